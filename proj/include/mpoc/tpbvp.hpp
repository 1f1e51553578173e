// mpoc — analytic two-point boundary value solutions for the free and
// bound-active arcs, via blocked matrix exponentials.
#ifndef MPOC_TPBVP_HPP
#define MPOC_TPBVP_HPP

#include "mpoc/model.hpp"

namespace mpoc {

/// n×n blocks (and affine offsets) of one Hamiltonian-flow exponential.
/// affine_x / affine_lambda are zero when built from the free-arc matrix.
struct BlockedExponential {
    Matrix phi11, phi12, phi21, phi22;
    Vector affine_x, affine_lambda;
};

/// Split e^{M t} into state/costate blocks.  M must be 2n×2n (free arc) or
/// (2n+1)×(2n+1) (bound arc with homogeneous augmentation).
BlockedExponential blocked_exponential(const Matrix& M, int n, double t);

/// Linear map λ(0) = K_f x(0) solving the free-arc TPBVP with terminal
/// condition λ(h) = x(h).
struct FreeGain {
    Matrix K_f;
    double horizon;
};

/// K_f = -(Φ²² - Φ¹²)⁻¹ (Φ²¹ - Φ¹¹) over the given horizon.
/// Throws SingularityError (reporting the horizon) when the pencil
/// Φ²² - Φ¹² is not invertible; with the fixed positive-definite weights it
/// always is, so the guard only fires on malformed inputs.
FreeGain free_gain(const LtiSystem& sys, double horizon);

/// Affine terminal switching function of the full-horizon bound arc:
/// σ(t_f; x0) = a_sᵀ x0 + c_s.  K_s and k_s (the affine map
/// λ(0) = K_s x0 + k_s that enforces λ(t_f) = x(t_f)) are exposed for
/// diagnosis.
struct BoundTerminalSigma {
    Vector a_s;
    double c_s;
    Matrix K_s;
    Vector k_s;
};

BoundTerminalSigma bound_terminal_sigma(const LtiSystem& sys, int bound_sign);

/// Exact constant-input state propagation x(t) from x0 with
/// u ≡ -bound_sign·u_max, via the exponential of [[A, u_arc·B], [0, 0]].
Vector bound_state_at(const LtiSystem& sys, const Vector& x0, int bound_sign,
                      double t);

}  // namespace mpoc

#endif  // MPOC_TPBVP_HPP
