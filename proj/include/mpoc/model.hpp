// mpoc — problem-instance types and Hamiltonian-system assembly.
#ifndef MPOC_MODEL_HPP
#define MPOC_MODEL_HPP

#include <string>

#include "mpoc/linalg.hpp"

namespace mpoc {

/// Axis-aligned box in R^n (the admissible set of initial states).
struct Box {
    Vector lower;
    Vector upper;

    int dim() const { return static_cast<int>(lower.size()); }
    double volume() const { return (upper - lower).prod(); }
    Vector center() const { return 0.5 * (lower + upper); }
    bool contains(const Vector& x, double tol = 0.0) const;
};

/// Continuous-time LTI instance
///     xdot = A x + B u,   |u| <= u_max,   x(0) = x0 in theta,
/// under the fixed quadratic cost
///     J = 1/2 |x(t_f)|^2 + 1/2 ∫ (|x|^2 + u^2) dt
/// (identity state weight, unit input weight, identity terminal weight —
/// deliberately not configurable).
struct LtiSystem {
    Matrix A;      // n x n
    Vector B;      // n (single input column)
    double t_f;    // horizon, seconds
    double u_max;  // input bound
    Box theta;     // parameter box for x0

    int n() const { return static_cast<int>(A.rows()); }

    /// Throws ValidationError when any structural invariant fails.
    void validate() const;
};

/// The five admissible optimal arc structures: a trajectory is either free
/// over the whole horizon, starts on one input bound and leaves it once, or
/// stays on one bound throughout.
enum class ArcSequence {
    FreeFull,
    UpperBaThenFree,
    UpperBaFull,
    LowerBaThenFree,
    LowerBaFull,
};

/// Stable lower-case token used in exports and reports.
std::string to_string(ArcSequence arc);

/// Inverse of to_string; throws DomainError for unknown tokens.
ArcSequence arc_from_string(const std::string& token);

/// True for the two structures with a bound arc followed by a free arc.
bool is_transitional(ArcSequence arc);

/// True for the two structures that ride one bound over the full horizon.
bool is_bound_full(ArcSequence arc);

/// Sign at which sigma is pinned on the bound arc: +1 for the upper
/// structures, -1 for the lower ones, 0 for FreeFull.  With the control law
/// u = -clip(sigma), bound_sign = +1 means the applied input is -u_max.
int bound_sign_of(ArcSequence arc);

/// Arc structure for a given (bound sign, transitional?) combination.
ArcSequence arc_of(int bound_sign, bool transitional);

/// Free-arc Hamiltonian matrix M_f = [[A, -B Bᵀ], [-I, -Aᵀ]] driving
/// d/dt [x; λ] on arcs where u = -σ = -Bᵀλ.
Matrix hamiltonian_free(const LtiSystem& sys);

/// Bound-arc homogeneous augmentation of d/dt [x; λ; 1] with the constant
/// input u_arc = -bound_sign·u_max:
///     [[A, 0, u_arc·B], [-I, -Aᵀ, 0], [0, 0, 0]].
/// One exponential of this matrix yields both the Φ blocks and the affine
/// offsets of the bound arc.
Matrix hamiltonian_bound(const LtiSystem& sys, int bound_sign);

}  // namespace mpoc

#endif  // MPOC_MODEL_HPP
