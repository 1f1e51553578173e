#include "mpoc/tpbvp.hpp"

#include <sstream>

namespace mpoc {

BlockedExponential blocked_exponential(const Matrix& M, int n, double t) {
    const Eigen::Index dim = M.rows();
    if (dim != 2 * n && dim != 2 * n + 1) {
        std::ostringstream os;
        os << "blocked_exponential: matrix is " << dim << "x" << M.cols()
           << ", expected " << 2 * n << " or " << 2 * n + 1 << " rows";
        throw DimensionError(os.str());
    }
    const Matrix E = mat_exp(M, t);
    BlockedExponential b;
    b.phi11 = E.block(0, 0, n, n);
    b.phi12 = E.block(0, n, n, n);
    b.phi21 = E.block(n, 0, n, n);
    b.phi22 = E.block(n, n, n, n);
    if (dim == 2 * n + 1) {
        b.affine_x = E.block(0, 2 * n, n, 1);
        b.affine_lambda = E.block(n, 2 * n, n, 1);
    } else {
        b.affine_x = Vector::Zero(n);
        b.affine_lambda = Vector::Zero(n);
    }
    return b;
}

namespace {

/// Shared pencil solve: given Φ blocks and affine offsets of a flow over
/// [0, h], the terminal condition λ(h) = x(h) on [x; λ](h) = Φ [x0; λ0] + d
/// reads (Φ²² - Φ¹²) λ0 = (Φ¹¹ - Φ²¹) x0 + (d_x - d_λ), i.e.
/// λ0 = K x0 + k with K = -(Φ²² - Φ¹²)⁻¹ (Φ²¹ - Φ¹¹).
void terminal_map(const BlockedExponential& b, double horizon, Matrix& K,
                  Vector& k) {
    const Matrix pencil = b.phi22 - b.phi12;
    Matrix rhs(pencil.rows(), pencil.cols() + 1);
    rhs.leftCols(pencil.cols()) = -(b.phi21 - b.phi11);
    rhs.rightCols(1) = b.affine_x - b.affine_lambda;
    Matrix sol;
    try {
        sol = solve(pencil, rhs);
    } catch (const SingularityError& e) {
        std::ostringstream os;
        os << "terminal pencil singular at horizon " << horizon << ": "
           << e.what();
        throw SingularityError(os.str(), e.rcond);
    }
    K = sol.leftCols(pencil.cols());
    k = sol.rightCols(1);
}

}  // namespace

FreeGain free_gain(const LtiSystem& sys, double horizon) {
    sys.validate();
    if (!(horizon >= 0.0) || horizon > sys.t_f + 1e-12) {
        std::ostringstream os;
        os << "free_gain: horizon " << horizon << " outside [0, t_f]";
        throw DomainError(os.str());
    }
    const BlockedExponential b =
        blocked_exponential(hamiltonian_free(sys), sys.n(), horizon);
    FreeGain g;
    g.horizon = horizon;
    Vector k;
    terminal_map(b, horizon, g.K_f, k);
    return g;
}

BoundTerminalSigma bound_terminal_sigma(const LtiSystem& sys,
                                        int bound_sign) {
    sys.validate();
    const int n = sys.n();
    const BlockedExponential b = blocked_exponential(
        hamiltonian_bound(sys, bound_sign), n, sys.t_f);
    BoundTerminalSigma out;
    terminal_map(b, sys.t_f, out.K_s, out.k_s);
    // Propagate λ to t_f: λ(t_f) = Φ²¹ x0 + Φ²² λ0 + d_λ with λ0 affine in
    // x0, then read σ(t_f) = Bᵀ λ(t_f) = a_sᵀ x0 + c_s.
    out.a_s = (b.phi21 + b.phi22 * out.K_s).transpose() * sys.B;
    out.c_s = sys.B.dot(b.phi22 * out.k_s + b.affine_lambda);
    return out;
}

Vector bound_state_at(const LtiSystem& sys, const Vector& x0, int bound_sign,
                      double t) {
    sys.validate();
    if (bound_sign != +1 && bound_sign != -1)
        throw DomainError("bound_state_at: bound_sign must be +1 or -1");
    if (x0.size() != sys.n())
        throw DimensionError("bound_state_at: x0 has wrong length");
    if (!(t >= 0.0) || t > sys.t_f + 1e-12) {
        std::ostringstream os;
        os << "bound_state_at: t " << t << " outside [0, t_f]";
        throw DomainError(os.str());
    }
    const int n = sys.n();
    const double u_arc = -bound_sign * sys.u_max;
    Matrix M = Matrix::Zero(n + 1, n + 1);
    M.topLeftCorner(n, n) = sys.A;
    M.block(0, n, n, 1) = u_arc * sys.B;
    const Matrix E = mat_exp(M, t);
    return E.topLeftCorner(n, n) * x0 + E.block(0, n, n, 1);
}

}  // namespace mpoc
