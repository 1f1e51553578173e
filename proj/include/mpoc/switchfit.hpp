// mpoc — switching times on transitional arcs: root finding for the exact
// junction condition and polynomial surrogate fits over a region.
#ifndef MPOC_SWITCHFIT_HPP
#define MPOC_SWITCHFIT_HPP

#include <optional>
#include <string>
#include <vector>

#include "mpoc/partition.hpp"
#include "mpoc/tpbvp.hpp"

namespace mpoc {

/// Residual of the junction condition at candidate time `t`: the switching
/// function of the free tail, evaluated at the end of a bound arc of sign
/// `bound_sign` started from `x0`, minus the pinned bound value.  A root in
/// (0, t_f) is a switching time.
double switch_residual(const LtiSystem& sys, const Vector& x0, int bound_sign,
                       double t);

/// Bisection on [0, t_f] for a sign change of the junction residual.
/// Returns std::nullopt when the endpoint residuals do not bracket a root.
std::optional<double> try_switching_time(const LtiSystem& sys,
                                         const Vector& x0, int bound_sign,
                                         double tol_mult = 1.0);

/// As try_switching_time, but a missing bracket raises BracketError with
/// both endpoint residuals in the message.
double switching_time(const LtiSystem& sys, const Vector& x0, int bound_sign,
                      double tol_mult = 1.0);

/// A fitted polynomial surrogate t_s(x) over one transitional region.
struct SwitchTimeFit {
    std::string region_id;
    std::vector<std::vector<int>> monomials;  ///< graded exponent tuples
    Vector coefficients;                      ///< aligned with `monomials`
    double r_squared = 0.0;
    double t_s_min = 0.0;
    double t_s_max = 0.0;
    int sample_count = 0;
    std::vector<Vector> sample_points;        ///< accepted sample locations
    std::vector<double> sample_values;        ///< exact t_s at those points

    /// Evaluate the surrogate at a point.
    double evaluate(const Vector& x) const;
};

/// Fit a degree-`degree` polynomial in the initial state to exact switching
/// times sampled inside `region_id` (which must be transitional).  Halton
/// samples are classified against `p`; points outside the region or whose
/// residual fails to bracket are discarded.  Throws InsufficiencyError when
/// fewer accepted samples remain than twice the number of monomials, and
/// DomainError when the region is not transitional.
SwitchTimeFit fit_region(const LtiSystem& sys, const CtPartition& p,
                         const std::string& region_id, int samples,
                         int degree = 3, unsigned long long seed = 1,
                         double tol_mult = 1.0);

/// Core fit on caller-supplied samples; exposed for synthetic-data tests.
SwitchTimeFit fit_from_samples(const std::vector<Vector>& points,
                               const std::vector<double>& values, int degree,
                               const std::string& region_id = "");

}  // namespace mpoc

#endif  // MPOC_SWITCHFIT_HPP
