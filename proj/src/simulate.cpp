#include "mpoc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mpoc/switchfit.hpp"
#include "mpoc/tpbvp.hpp"

namespace mpoc {

namespace {

double clip(double v, double bound) {
    return std::max(-bound, std::min(bound, v));
}

/// One-step RK4 flow matrix for ẏ = M y: on a linear autonomous system the
/// classic four-stage scheme collapses exactly to the degree-4 Taylor
/// polynomial of e^{Mh}, so precomputing it is both faster and bitwise
/// deterministic across sweeps.
Matrix rk4_step_matrix(const Matrix& M, double h) {
    const Eigen::Index d = M.rows();
    const Matrix Mh = M * h;
    const Matrix Mh2 = Mh * Mh;
    return Matrix::Identity(d, d) + Mh + 0.5 * Mh2 + (1.0 / 6.0) * Mh2 * Mh +
           (1.0 / 24.0) * Mh2 * Mh2;
}

struct PathStats {
    double terminal_defect = 0.0;
    double junction_residual = 0.0;
    double clip_deviation = 0.0;
    double hamiltonian_drift = 0.0;
    int crossings = 0;
};

/// Streaming recorder for one node; appends to `store` when present.
class NodeSink {
public:
    NodeSink(const LtiSystem& sys, Trajectory* store)
        : sys_(sys), store_(store) {}

    void push(double t, const Vector& x, const Vector& lam, bool bound_active,
              double u, PathStats& st) {
        const double sig = sys_.B.dot(lam);
        const double dev = std::abs(u + clip(sig, sys_.u_max));
        st.clip_deviation = std::max(st.clip_deviation, dev);

        const double f = std::abs(sig) - sys_.u_max;
        const int sgn = (f > 0.0) - (f < 0.0);
        if (sgn != 0) {
            if (last_sign_ != 0 && sgn != last_sign_) ++st.crossings;
            last_sign_ = sgn;
        }

        if (!bound_active) {
            const double ham = 0.5 * (x.squaredNorm() + u * u) +
                               lam.dot(sys_.A * x + sys_.B * u);
            if (!have_ham_) {
                ham0_ = ham;
                have_ham_ = true;
            }
            st.hamiltonian_drift =
                std::max(st.hamiltonian_drift, std::abs(ham - ham0_));
        }

        if (store_) {
            store_->times.push_back(t);
            store_->states.push_back(x);
            store_->costates.push_back(lam);
            store_->sigma.push_back(sig);
            store_->control.push_back(u);
            store_->mu.push_back(bound_active ? f : 0.0);
        }
    }

private:
    const LtiSystem& sys_;
    Trajectory* store_;
    int last_sign_ = 0;
    bool have_ham_ = false;
    double ham0_ = 0.0;
};

/// Integrate the declared structure; fills stats and (optionally) the full
/// path.  t_s < 0 means "no junction" (free or full-bound structures).
PathStats run_declared(const LtiSystem& sys, const Vector& x0,
                       ArcSequence arc, double t_s, int steps,
                       Trajectory* store) {
    sys.validate();
    if (x0.size() != sys.n())
        throw DimensionError("simulate: x0 has wrong length");
    if (steps < 2) throw DomainError("simulate: need at least 2 steps");

    const int n = sys.n();
    const int s = bound_sign_of(arc);
    const double tf = sys.t_f;
    const double h = tf / steps;
    const bool transitional = is_transitional(arc);

    PathStats st;
    NodeSink sink(sys, store);

    // Initial costate per structure.
    Vector lam0(n);
    Matrix bound_phi22;
    if (arc == ArcSequence::FreeFull) {
        lam0 = free_gain(sys, tf).K_f * x0;
    } else if (is_bound_full(arc)) {
        const BoundTerminalSigma b = bound_terminal_sigma(sys, s);
        lam0 = b.K_s * x0 + b.k_s;
    } else {
        if (!(t_s >= 0.0 && t_s <= tf))
            throw DomainError("simulate: transitional arc needs t_s in [0, t_f]");
        const FreeGain tail = free_gain(sys, tf - t_s);
        const Vector x_ts = bound_state_at(sys, x0, s, t_s);
        const Vector lam_ts = tail.K_f * x_ts;
        st.junction_residual = std::abs(sys.B.dot(lam_ts) - s * sys.u_max);
        const BlockedExponential bb =
            blocked_exponential(hamiltonian_bound(sys, s), n, t_s);
        lam0 = solve(bb.phi22,
                     (lam_ts - bb.phi21 * x0 - bb.affine_lambda).eval());
    }

    const Matrix Mf = hamiltonian_free(sys);
    const Matrix Sf = rk4_step_matrix(Mf, h);

    if (store) {
        store->arc = arc;
        store->t_s = transitional ? t_s : -1.0;
        const std::size_t reserve = static_cast<std::size_t>(steps) + 2;
        store->times.reserve(reserve);
        store->states.reserve(reserve);
        store->costates.reserve(reserve);
        store->sigma.reserve(reserve);
        store->control.reserve(reserve);
        store->mu.reserve(reserve);
    }

    Vector x(n), lam(n);
    double t_resume = 0.0;
    int k_resume = 0;

    if (arc == ArcSequence::FreeFull) {
        x = x0;
        lam = lam0;
    } else {
        // Bound phase over [0, t_end] on the augmented [x; λ; 1] system.
        const double t_end = transitional ? t_s : tf;
        const Matrix Mb = hamiltonian_bound(sys, s);
        const Matrix Sb = rk4_step_matrix(Mb, h);
        const double u_arc = -s * sys.u_max;

        Vector z(2 * n + 1);
        z.head(n) = x0;
        z.segment(n, n) = lam0;
        z(2 * n) = 1.0;

        if (t_end > 1e-15 * tf) {  // empty bound arc when t_s = 0
            double t = 0.0;
            int k = 0;
            sink.push(t, z.head(n), z.segment(n, n), true, u_arc, st);
            while ((k + 1) * h <= t_end + 1e-12 * tf) {
                z = Sb * z;
                ++k;
                t = k * h;
                if (t <= t_end - 1e-12 * tf)
                    sink.push(t, z.head(n), z.segment(n, n), true, u_arc, st);
                else
                    break;
            }
            // Partial step onto the junction / terminal node when it is not
            // a uniform grid point.
            if (t < t_end - 1e-12 * tf)
                z = rk4_step_matrix(Mb, t_end - t) * z;
        }
        x = z.head(n);
        lam = z.segment(n, n);
        if (!transitional) {
            sink.push(t_end, x, lam, true, u_arc, st);
            st.terminal_defect = (lam - x).norm() / (1.0 + x.norm());
            return st;
        }
        // Junction node: control hands over to the free law u = -σ.
        sink.push(t_end, x, lam, true, -sys.B.dot(lam), st);
        t_resume = t_end;
        k_resume = static_cast<int>(std::ceil(t_end / h - 1e-9));
    }

    // Free phase from t_resume to t_f.
    Vector y(2 * n);
    y.head(n) = x;
    y.segment(n, n) = lam;

    if (arc == ArcSequence::FreeFull)
        sink.push(0.0, y.head(n), y.segment(n, n), false,
                  -sys.B.dot(y.segment(n, n)), st);

    double t = t_resume;
    int k = k_resume;
    // Partial step up to the next uniform node when resuming off-grid.
    if (transitional && k * h > t + 1e-12 * tf) {
        const double dt = k * h - t;
        y = rk4_step_matrix(Mf, dt) * y;
        t = k * h;
        sink.push(t, y.head(n), y.segment(n, n), false,
                  -sys.B.dot(y.segment(n, n)), st);
    }
    while (k < steps) {
        y = Sf * y;
        ++k;
        t = k * h;
        sink.push(t, y.head(n), y.segment(n, n), false,
                  -sys.B.dot(y.segment(n, n)), st);
    }

    const Vector xf = y.head(n);
    const Vector lf = y.segment(n, n);
    st.terminal_defect = (lf - xf).norm() / (1.0 + xf.norm());
    return st;
}

}  // namespace

void write_trajectory(const Trajectory& traj, std::ostream& os) {
    const int n = traj.states.empty() ? 0 : static_cast<int>(traj.states[0].size());
    os << "# time";
    for (int i = 1; i <= n; ++i) os << "\tx" << i;
    for (int i = 1; i <= n; ++i) os << "\tlambda" << i;
    os << "\tsigma\tu\tmu\n";
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
    };
    for (std::size_t k = 0; k < traj.size(); ++k) {
        put(traj.times[k]);
        for (int i = 0; i < n; ++i) { os << '\t'; put(traj.states[k](i)); }
        for (int i = 0; i < n; ++i) { os << '\t'; put(traj.costates[k](i)); }
        os << '\t'; put(traj.sigma[k]);
        os << '\t'; put(traj.control[k]);
        os << '\t'; put(traj.mu[k]);
        os << '\n';
    }
}

Trajectory simulate_optimal(const LtiSystem& sys, const Vector& x0,
                            ArcSequence arc, std::optional<double> t_s,
                            int steps, double tol_mult) {
    double ts_val = -1.0;
    if (is_transitional(arc))
        ts_val = t_s ? *t_s : switching_time(sys, x0, bound_sign_of(arc));

    Trajectory traj;
    const PathStats st = run_declared(sys, x0, arc, ts_val, steps, &traj);
    traj.terminal_defect = st.terminal_defect;
    traj.junction_residual = st.junction_residual;
    traj.clip_deviation = st.clip_deviation;
    traj.hamiltonian_drift = st.hamiltonian_drift;

    const Tolerances tol = Tolerances{}.scaled(tol_mult);
    if (st.junction_residual > tol.junction_residual) {
        std::ostringstream os;
        os << "simulate_optimal: junction residual " << st.junction_residual
           << " exceeds " << tol.junction_residual
           << " — t_s inconsistent with x0's region";
        throw InconsistencyError(os.str());
    }
    const double defect_tol = is_transitional(arc)
                                  ? tol.terminal_defect_composite
                                  : tol.terminal_defect_pure;
    if (st.terminal_defect > defect_tol) {
        std::ostringstream os;
        os << "simulate_optimal: terminal defect " << st.terminal_defect
           << " exceeds " << defect_tol << " for arc " << to_string(arc)
           << " — wrong region or t_s";
        throw InconsistencyError(os.str());
    }
    return traj;
}

int count_sigma_crossings(const Trajectory& traj, double u_max) {
    int crossings = 0;
    int last = 0;
    for (const double sig : traj.sigma) {
        const double f = std::abs(sig) - u_max;
        const int sgn = (f > 0.0) - (f < 0.0);
        if (sgn == 0) continue;
        if (last != 0 && sgn != last) ++crossings;
        last = sgn;
    }
    return crossings;
}

Matrix shooting_gain_oracle(const LtiSystem& sys, double horizon, int steps) {
    sys.validate();
    if (!(horizon > 0.0) || horizon > sys.t_f + 1e-12)
        throw DomainError("shooting_gain_oracle: horizon outside (0, t_f]");

    const int n = sys.n();
    const Matrix Mf = hamiltonian_free(sys);
    const Matrix S = rk4_step_matrix(Mf, horizon / steps);

    auto residual = [&](const Vector& x0, const Vector& lam0) {
        Vector y(2 * n);
        y.head(n) = x0;
        y.segment(n, n) = lam0;
        for (int k = 0; k < steps; ++k) y = S * y;
        return Vector(y.segment(n, n) - y.head(n));
    };

    // The flow is linear, so unit-perturbation differences give the exact
    // Jacobian of the residual in λ0; it is shared by every column.
    const Vector zero = Vector::Zero(n);
    const Vector r_base = residual(zero, zero);
    Matrix J(n, n);
    for (int j = 0; j < n; ++j)
        J.col(j) = residual(zero, Vector::Unit(n, j)) - r_base;

    // The residual cannot be polished below rounding amplified by the
    // horizon flow (‖J‖ ~ e^{|λ|max·h}); λ0 itself is still determined to
    // machine precision because the same amplification makes the residual
    // hypersensitive to it.  Accept either a clean small residual or
    // stagnation at that conditioning floor.
    const double noise_floor = 1e-9 * (1.0 + J.norm());

    Matrix K(n, n);
    for (int i = 0; i < n; ++i) {
        const Vector x0 = Vector::Unit(n, i);
        Vector lam = x0;
        bool converged = false;
        double prev_norm = std::numeric_limits<double>::infinity();
        for (int it = 0; it < 50; ++it) {
            const Vector r = residual(x0, lam);
            const double rn = r.norm();
            if (rn <= 1e-12 * (1.0 + lam.norm()) ||
                (it >= 1 && rn >= 0.5 * prev_norm && rn <= noise_floor)) {
                converged = true;
                break;
            }
            prev_norm = rn;
            lam += solve(J, (-r).eval());
        }
        if (!converged) {
            std::ostringstream os;
            os << "shooting_gain_oracle: Newton failed to converge for basis "
                  "state "
               << i << " at horizon " << horizon;
            throw OracleError(os.str());
        }
        K.col(i) = lam;
    }
    return K;
}

ArcProbe probe_arc(const LtiSystem& sys, const Vector& x0, ArcSequence arc,
                   std::optional<double> t_s, int steps, double tol_mult) {
    ArcProbe p;
    p.arc = arc;

    double ts_val = -1.0;
    if (is_transitional(arc)) {
        if (t_s) {
            ts_val = *t_s;
        } else {
            const std::optional<double> found =
                try_switching_time(sys, x0, bound_sign_of(arc));
            if (!found) {
                p.constructible = false;
                p.violation = std::numeric_limits<double>::infinity();
                return p;
            }
            ts_val = *found;
        }
        p.t_s = ts_val;
    }
    p.constructible = true;

    const PathStats st = run_declared(sys, x0, arc, ts_val, steps, nullptr);
    p.terminal_defect = st.terminal_defect;
    p.junction_residual = st.junction_residual;
    p.clip_deviation = st.clip_deviation;
    p.crossings = st.crossings;

    const Tolerances tol = Tolerances{}.scaled(tol_mult);
    const double defect_tol = is_transitional(arc)
                                  ? tol.terminal_defect_composite
                                  : tol.terminal_defect_pure;
    const int expected_crossings = is_transitional(arc) ? 1 : 0;
    double v = st.terminal_defect / defect_tol;
    v = std::max(v, st.junction_residual / tol.junction_residual);
    v = std::max(v, st.clip_deviation / tol.clip_consistency);
    if (st.crossings != expected_crossings)
        v = std::max(v, 1.0 + std::abs(st.crossings - expected_crossings));
    p.violation = v;
    p.consistent = v <= 1.0;
    return p;
}

DetectedArc detect_arc(const LtiSystem& sys, const Vector& x0, int steps,
                       double tol_mult) {
    static const ArcSequence order[] = {
        ArcSequence::FreeFull,        ArcSequence::UpperBaThenFree,
        ArcSequence::LowerBaThenFree, ArcSequence::UpperBaFull,
        ArcSequence::LowerBaFull};

    DetectedArc best;
    double best_violation = std::numeric_limits<double>::infinity();
    for (const ArcSequence arc : order) {
        const ArcProbe p =
            probe_arc(sys, x0, arc, std::nullopt, steps, tol_mult);
        if (!p.constructible) continue;
        if (p.consistent) {
            best.arc = arc;
            best.t_s = p.t_s;
            best.consistent = true;
            best.violation = p.violation;
            return best;
        }
        if (p.violation < best_violation) {
            best_violation = p.violation;
            best.arc = arc;
            best.t_s = p.t_s;
            best.consistent = false;
            best.violation = p.violation;
        }
    }
    return best;
}

}  // namespace mpoc
