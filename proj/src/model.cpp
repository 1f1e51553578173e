#include "mpoc/model.hpp"

#include <sstream>

namespace mpoc {

bool Box::contains(const Vector& x, double tol) const {
    if (x.size() != lower.size()) return false;
    return (x.array() >= lower.array() - tol).all() &&
           (x.array() <= upper.array() + tol).all();
}

void LtiSystem::validate() const {
    std::ostringstream os;
    if (A.rows() < 1 || A.rows() != A.cols()) {
        os << "LtiSystem: A must be square and nonempty, got " << A.rows()
           << "x" << A.cols();
        throw ValidationError(os.str());
    }
    if (B.size() != A.rows()) {
        os << "LtiSystem: B has length " << B.size() << ", expected "
           << A.rows();
        throw ValidationError(os.str());
    }
    if (!A.allFinite() || !B.allFinite())
        throw ValidationError("LtiSystem: non-finite entries in A or B");
    if (!(t_f > 0.0))
        throw ValidationError("LtiSystem: t_f must be positive");
    if (!(u_max > 0.0))
        throw ValidationError("LtiSystem: u_max must be positive");
    if (theta.lower.size() != A.rows() || theta.upper.size() != A.rows()) {
        os << "LtiSystem: theta bounds must have length " << A.rows();
        throw ValidationError(os.str());
    }
    if (!((theta.lower.array() < theta.upper.array()).all()))
        throw ValidationError(
            "LtiSystem: theta lower bounds must be strictly below upper "
            "bounds");
}

std::string to_string(ArcSequence arc) {
    switch (arc) {
        case ArcSequence::FreeFull: return "free-full";
        case ArcSequence::UpperBaThenFree: return "upper-ba-then-free";
        case ArcSequence::UpperBaFull: return "upper-ba-full";
        case ArcSequence::LowerBaThenFree: return "lower-ba-then-free";
        case ArcSequence::LowerBaFull: return "lower-ba-full";
    }
    throw DomainError("to_string: unknown ArcSequence");
}

ArcSequence arc_from_string(const std::string& token) {
    if (token == "free-full") return ArcSequence::FreeFull;
    if (token == "upper-ba-then-free") return ArcSequence::UpperBaThenFree;
    if (token == "upper-ba-full") return ArcSequence::UpperBaFull;
    if (token == "lower-ba-then-free") return ArcSequence::LowerBaThenFree;
    if (token == "lower-ba-full") return ArcSequence::LowerBaFull;
    throw DomainError("arc_from_string: unknown token '" + token + "'");
}

bool is_transitional(ArcSequence arc) {
    return arc == ArcSequence::UpperBaThenFree ||
           arc == ArcSequence::LowerBaThenFree;
}

bool is_bound_full(ArcSequence arc) {
    return arc == ArcSequence::UpperBaFull || arc == ArcSequence::LowerBaFull;
}

int bound_sign_of(ArcSequence arc) {
    switch (arc) {
        case ArcSequence::FreeFull: return 0;
        case ArcSequence::UpperBaThenFree:
        case ArcSequence::UpperBaFull: return +1;
        case ArcSequence::LowerBaThenFree:
        case ArcSequence::LowerBaFull: return -1;
    }
    throw DomainError("bound_sign_of: unknown ArcSequence");
}

ArcSequence arc_of(int bound_sign, bool transitional) {
    if (bound_sign == 0 && !transitional) return ArcSequence::FreeFull;
    if (bound_sign == +1)
        return transitional ? ArcSequence::UpperBaThenFree
                            : ArcSequence::UpperBaFull;
    if (bound_sign == -1)
        return transitional ? ArcSequence::LowerBaThenFree
                            : ArcSequence::LowerBaFull;
    throw DomainError("arc_of: bound_sign must be -1, 0 or +1");
}

Matrix hamiltonian_free(const LtiSystem& sys) {
    sys.validate();
    const int n = sys.n();
    Matrix M = Matrix::Zero(2 * n, 2 * n);
    M.topLeftCorner(n, n) = sys.A;
    M.topRightCorner(n, n) = -sys.B * sys.B.transpose();
    M.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
    M.bottomRightCorner(n, n) = -sys.A.transpose();
    return M;
}

Matrix hamiltonian_bound(const LtiSystem& sys, int bound_sign) {
    sys.validate();
    if (bound_sign != +1 && bound_sign != -1)
        throw DomainError("hamiltonian_bound: bound_sign must be +1 or -1");
    const int n = sys.n();
    const double u_arc = -bound_sign * sys.u_max;
    Matrix M = Matrix::Zero(2 * n + 1, 2 * n + 1);
    M.topLeftCorner(n, n) = sys.A;
    M.block(0, 2 * n, n, 1) = u_arc * sys.B;
    M.block(n, 0, n, n) = -Matrix::Identity(n, n);
    M.block(n, n, n, n) = -sys.A.transpose();
    return M;
}

}  // namespace mpoc
