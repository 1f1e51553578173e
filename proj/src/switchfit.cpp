#include "mpoc/switchfit.hpp"

#include <cmath>
#include <sstream>

#include "mpoc/sampling.hpp"
#include "mpoc/tolerances.hpp"

namespace mpoc {

double switch_residual(const LtiSystem& sys, const Vector& x0, int bound_sign,
                       double t) {
    sys.validate();
    if (bound_sign != 1 && bound_sign != -1)
        throw DomainError("switch_residual: bound_sign must be +1 or -1");
    if (!(t >= 0.0) || !(t <= sys.t_f))
        throw DomainError("switch_residual: t outside [0, t_f]");
    const Vector x_t = bound_state_at(sys, x0, bound_sign, t);
    const FreeGain tail = free_gain(sys, sys.t_f - t);
    const double sigma = sys.B.dot(tail.K_f * x_t);
    return sigma - bound_sign * sys.u_max;
}

std::optional<double> try_switching_time(const LtiSystem& sys,
                                         const Vector& x0, int bound_sign,
                                         double tol_mult) {
    const Tolerances tol = Tolerances{}.scaled(tol_mult);
    double lo = 0.0, hi = sys.t_f;
    double f_lo = switch_residual(sys, x0, bound_sign, lo);
    double f_hi = switch_residual(sys, x0, bound_sign, hi);
    // Endpoint roots (x0 on a region boundary) count as degenerate junctions.
    if (std::abs(f_lo) <= tol.bisection_residual) return lo;
    if (std::abs(f_hi) <= tol.bisection_residual) return hi;
    if (f_lo * f_hi > 0.0) return std::nullopt;
    for (int iter = 0; iter < 60; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = switch_residual(sys, x0, bound_sign, mid);
        if (std::abs(f_mid) <= tol.bisection_residual) return mid;
        if (f_lo * f_mid <= 0.0) {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    return 0.5 * (lo + hi);
}

double switching_time(const LtiSystem& sys, const Vector& x0, int bound_sign,
                      double tol_mult) {
    const auto t_s = try_switching_time(sys, x0, bound_sign, tol_mult);
    if (!t_s) {
        std::ostringstream msg;
        msg << "switching_time: junction residual does not change sign on "
               "[0, t_f]; residual(0) = "
            << switch_residual(sys, x0, bound_sign, 0.0)
            << ", residual(t_f) = "
            << switch_residual(sys, x0, bound_sign, sys.t_f);
        throw BracketError(msg.str());
    }
    return *t_s;
}

double SwitchTimeFit::evaluate(const Vector& x) const {
    double v = 0.0;
    for (std::size_t i = 0; i < monomials.size(); ++i)
        v += coefficients(static_cast<Eigen::Index>(i)) *
             eval_monomial(monomials[i], x);
    return v;
}

SwitchTimeFit fit_from_samples(const std::vector<Vector>& points,
                               const std::vector<double>& values, int degree,
                               const std::string& region_id) {
    if (points.size() != values.size())
        throw DimensionError("fit_from_samples: point/value count mismatch");
    if (points.empty())
        throw InsufficiencyError("fit_from_samples: no samples");
    const int n = static_cast<int>(points.front().size());
    const auto basis = monomial_exponents(n, degree);
    if (points.size() < 2 * basis.size()) {
        std::ostringstream msg;
        msg << "fit_from_samples: " << points.size()
            << " samples for " << basis.size()
            << " monomials; need at least " << 2 * basis.size();
        throw InsufficiencyError(msg.str());
    }
    const Matrix D = monomial_design(points, basis);
    Vector y(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i)
        y(static_cast<Eigen::Index>(i)) = values[i];
    const auto ls = least_squares(D, y);

    SwitchTimeFit fit;
    fit.region_id = region_id;
    fit.monomials = basis;
    fit.coefficients = ls.coefficients;
    fit.r_squared = ls.r_squared;
    fit.sample_count = static_cast<int>(points.size());
    fit.sample_points = points;
    fit.sample_values = values;
    fit.t_s_min = values.front();
    fit.t_s_max = values.front();
    for (const double v : values) {
        fit.t_s_min = std::min(fit.t_s_min, v);
        fit.t_s_max = std::max(fit.t_s_max, v);
    }
    return fit;
}

SwitchTimeFit fit_region(const LtiSystem& sys, const CtPartition& p,
                         const std::string& region_id, int samples,
                         int degree, unsigned long long seed,
                         double tol_mult) {
    sys.validate();
    if (samples < 1) throw DomainError("fit_region: samples must be >= 1");
    const RegionSpec& region = p.region(region_id);
    if (!is_transitional(region.arc))
        throw DomainError("fit_region: region " + region_id +
                          " is not transitional");
    const int bound_sign = bound_sign_of(region.arc);

    std::vector<Vector> points;
    std::vector<double> values;
    points.reserve(static_cast<std::size_t>(samples));
    values.reserve(static_cast<std::size_t>(samples));

    const unsigned long long draw_cap =
        500ull * static_cast<unsigned long long>(samples);
    unsigned long long index = seed;
    for (unsigned long long draws = 0;
         draws < draw_cap && static_cast<int>(points.size()) < samples;
         ++draws) {
        ++index;
        const Vector x0 = halton_point(index, p.theta);
        Classification cls;
        try {
            cls = classify(p, x0);
        } catch (const DomainError&) {
            continue;
        }
        if (cls.region_id != region_id || cls.boundary) continue;
        const auto t_s = try_switching_time(sys, x0, bound_sign, tol_mult);
        if (!t_s) continue;
        points.push_back(x0);
        values.push_back(*t_s);
    }

    const auto basis = monomial_exponents(sys.n(), degree);
    if (points.size() < 2 * basis.size()) {
        std::ostringstream msg;
        msg << "fit_region: region " << region_id << " yielded "
            << points.size() << " accepted samples for " << basis.size()
            << " monomials; need at least " << 2 * basis.size();
        throw InsufficiencyError(msg.str());
    }
    return fit_from_samples(points, values, degree, region_id);
}

}  // namespace mpoc
