// mpoc — every numerical tolerance the toolkit applies, pinned in one place.
// Values are chosen against the double-precision conditioning floor of the
// horizon-length exponentials (entries ~e^{|λ|·t_f} amplify rounding) and the
// measured RK4 truncation at the fixed 2000-step grid.
#ifndef MPOC_TOLERANCES_HPP
#define MPOC_TOLERANCES_HPP

namespace mpoc {

struct Tolerances {
    // Terminal transversality defect ‖λ(t_f) − x(t_f)‖ / (1 + ‖x(t_f)‖).
    // The defect is zero in exact arithmetic for every declared structure
    // (each gain is built to satisfy the terminal condition), so the gate
    // only needs to separate rounding — amplified up to ~e^{|λ|max·t_f} by
    // the mirrored costate modes, measured ≤ 2e-4 pure / ≤ 3e-3 composite
    // on horizon-5 instances — from gain-wiring faults, which land at O(1).
    double terminal_defect_pure = 1e-3;
    double terminal_defect_composite = 1e-2;

    // |σ(t_s) − s·u_max| evaluated from the analytic junction construction;
    // nonzero values signal a wrong switching time, not integration error.
    double junction_residual = 1e-6;

    // Pointwise |u + clip(σ)| budget for declaring a trajectory consistent
    // with its declared arc structure (σ-units).
    double clip_consistency = 1e-6;

    // Classification band around each hyperplane (σ-units).
    double boundary_band = 1e-9;

    // Residual bound guaranteed by 60 bisection halvings on [0, t_f].
    double bisection_residual = 1e-10;

    // Full-dimensionality floor for enumerated parameter-space regions.
    double volume_floor = 1e-9;

    // Polytope vertex feasibility / dedup scales (Θ units are O(1)).
    double geometry_feasibility = 1e-8;
    double vertex_dedup = 1e-8;

    // Reciprocal-condition floor below which solves are rejected
    // (kernel-level; not scaled by the CLI multiplier).
    double rcond_floor = 1e-12;

    /// Copy with every verification tolerance multiplied by `mult`
    /// (the CLI --tol flag).  The solver rcond floor stays fixed.
    Tolerances scaled(double mult) const {
        Tolerances t = *this;
        t.terminal_defect_pure *= mult;
        t.terminal_defect_composite *= mult;
        t.junction_residual *= mult;
        t.clip_consistency *= mult;
        t.boundary_band *= mult;
        t.bisection_residual *= mult;
        t.volume_floor *= mult;
        t.geometry_feasibility *= mult;
        t.vertex_dedup *= mult;
        return t;
    }
};

}  // namespace mpoc

#endif  // MPOC_TOLERANCES_HPP
