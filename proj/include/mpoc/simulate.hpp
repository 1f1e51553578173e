// mpoc — numerical oracle: fixed-step RK4 integration of the optimality
// system, arc-structure probing, and an independent shooting computation of
// the free-arc gain.  Everything analytic elsewhere is validated against
// this module.
#ifndef MPOC_SIMULATE_HPP
#define MPOC_SIMULATE_HPP

#include <optional>
#include <ostream>
#include <vector>

#include "mpoc/model.hpp"
#include "mpoc/tolerances.hpp"

namespace mpoc {

/// Time-sampled optimality-system path.  μ is |σ| − u_max where the bound
/// is active and 0 on free arcs; the clip deviation field carries the
/// pointwise max of |u + clip(σ)| so structure violations are measurable.
struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> states;
    std::vector<Vector> costates;
    std::vector<double> sigma;
    std::vector<double> control;
    std::vector<double> mu;

    ArcSequence arc = ArcSequence::FreeFull;
    double t_s = -1.0;  // junction time; < 0 when the arc has none

    double terminal_defect = 0.0;    // ‖λ(t_f)−x(t_f)‖ / (1+‖x(t_f)‖)
    double junction_residual = 0.0;  // |σ(t_s) − s·u_max| (analytic), 0 if no junction
    double clip_deviation = 0.0;     // max_k |u_k + clip(σ_k)|
    double hamiltonian_drift = 0.0;  // max |H(t) − H(0)| over free segments

    std::size_t size() const { return times.size(); }
};

/// Delimited-text dump (time, x…, λ…, σ, u, μ), full precision.
void write_trajectory(const Trajectory& traj, std::ostream& os);

/// Integrate the optimality system for the declared arc structure by
/// classic RK4 at `steps` fixed steps over [0, t_f] (the junction time is
/// inserted as an extra grid point so arcs never smear across a step; on a
/// linear autonomous system RK4 collapses to the degree-4 Taylor one-step
/// matrix, which is precomputed per arc).
///
/// Transitional arcs take t_s from the caller or locate it by bisection
/// when absent.  Throws InconsistencyError when the terminal transversality
/// defect or the analytic junction residual exceeds tolerance (a wrong
/// region or switching time), BracketError when a transitional structure is
/// requested but no junction exists.
Trajectory simulate_optimal(const LtiSystem& sys, const Vector& x0,
                            ArcSequence arc,
                            std::optional<double> t_s = std::nullopt,
                            int steps = 2000, double tol_mult = 1.0);

/// Number of sign changes of |σ(t)| − u_max along the grid (model-class
/// claim: at most one per optimal trajectory).  Linear interpolation between
/// samples; exact zeros count once per actual side change.
int count_sigma_crossings(const Trajectory& traj, double u_max);

/// Independent columnwise Newton-shooting computation of the free-arc gain:
/// for each basis state e_i, iterate on λ0 until the RK4-propagated terminal
/// residual λ(h) − x(h) vanishes.  The dynamics are linear, so the secant
/// Jacobian (unit perturbations) is exact.  Throws OracleError after 50
/// iterations without convergence.
Matrix shooting_gain_oracle(const LtiSystem& sys, double horizon,
                            int steps = 2000);

/// Structure diagnostics for one hypothesised arc at one initial state —
/// the streaming (no-storage) counterpart of simulate_optimal.  Never
/// throws for structure violations; they are the payload.
struct ArcProbe {
    ArcSequence arc = ArcSequence::FreeFull;
    double t_s = -1.0;
    bool constructible = false;  // false when no junction bracket exists
    double terminal_defect = 0.0;
    double junction_residual = 0.0;
    double clip_deviation = 0.0;
    int crossings = 0;
    bool consistent = false;  // all checks within tolerance
    double violation = 0.0;   // max normalized violation over the checks
};

ArcProbe probe_arc(const LtiSystem& sys, const Vector& x0, ArcSequence arc,
                   std::optional<double> t_s = std::nullopt, int steps = 2000,
                   double tol_mult = 1.0);

/// Try all five arc structures and report the one the simulation supports:
/// the first consistent hypothesis in a fixed priority order, or — when no
/// structure in the model class is self-consistent — the least-violating
/// one with `consistent = false`.
struct DetectedArc {
    ArcSequence arc = ArcSequence::FreeFull;
    double t_s = -1.0;
    bool consistent = false;
    double violation = 0.0;
};

DetectedArc detect_arc(const LtiSystem& sys, const Vector& x0,
                       int steps = 2000, double tol_mult = 1.0);

}  // namespace mpoc

#endif  // MPOC_SIMULATE_HPP
