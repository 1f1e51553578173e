// mpoc — discrete-time comparison: exact ZOH discretization with exact
// stage-cost integrals, condensed box-constrained QP, exhaustive explicit
// region enumeration, and the largest-region affine law.
#ifndef MPOC_DT_MPQP_HPP
#define MPOC_DT_MPQP_HPP

#include <string>
#include <vector>

#include "mpoc/geometry.hpp"
#include "mpoc/model.hpp"

namespace mpoc {

/// Discrete-time finite-horizon problem equivalent to the continuous cost
/// under piecewise-constant input on N intervals of length T_s = t_f / N.
/// The terminal weight is the identity.
struct DtProblem {
    int N = 0;
    double T_s = 0.0;
    Matrix Ad;
    Vector Bd;
    Matrix Qbar;   ///< exact integrated state weight per interval
    Vector Sbar;   ///< exact state-input cross term
    double Rbar = 0.0;   ///< exact input weight
    double u_max = 0.0;  ///< input bound inherited from the source system
};

/// Condensed cost J(u; x0) = 1/2 u'Hu + x0'Fu + const(x0) over the stacked
/// input vector u in R^N.
struct Condensed {
    Matrix H;  ///< N x N, symmetric positive definite
    Matrix F;  ///< n x N
};

/// Closed halfspace `normal . x <= offset` in R^n.
struct HalfspaceN {
    Vector normal;
    double offset = 0.0;
};

/// One explicit-solution region: per-node active pattern (0 inactive, +1
/// pinned at +u_max, -1 pinned at -u_max), the affine law u = K x0 + offset,
/// the defining halfspaces (box included), and the region's n-dimensional
/// measure inside the parameter box.
struct DtRegion {
    std::vector<int> pattern;
    Matrix K;         ///< N x n gain rows
    Vector offset;    ///< N offsets (zero on inactive nodes of linear laws)
    std::vector<HalfspaceN> halfspaces;
    double volume = 0.0;
    Vector interior_point;  ///< a point strictly inside (centroid-based)
};

/// Bookkeeping from the exhaustive pattern sweep.
struct EnumerationLog {
    long long patterns_tested = 0;
    long long singular_skipped = 0;
    long long infeasible = 0;
    long long low_dimensional = 0;
    long long kept = 0;
};

/// Exact ZOH discretization with exact cost integrals via a block-matrix
/// exponential (the state is augmented with the held input, the integrand
/// is the identity on the augmented state).
DtProblem discretize(const LtiSystem& sys, int N);

/// Condense the N-step problem onto the stacked input.  Throws ModelError
/// when H fails a Cholesky positive-definiteness check.
Condensed condense(const DtProblem& dt);

/// Exhaustively enumerate all 3^N active patterns, keeping regions whose
/// measure inside `theta` exceeds 1e-9.  Results are sorted by pattern, so
/// the output is independent of enumeration order.  Throws BudgetError when
/// N > 12.  Singular reduced Hessians skip the pattern and count in `log`.
std::vector<DtRegion> enumerate_regions(const DtProblem& dt,
                                        const Condensed& qp, const Box& theta,
                                        EnumerationLog* log = nullptr);

/// Maximum-volume region; volume ties within 1e-9 resolve to the
/// lexicographically smallest pattern.  Throws DomainError on empty input.
const DtRegion& largest_region_law(const std::vector<DtRegion>& regions);

/// Numerical oracle: solve min 1/2 u'Hu + f'u subject to |u_k| <= u_max by
/// primal active-set iteration from the unconstrained optimum.
struct BoxQpResult {
    Vector u;
    std::vector<int> pattern;  ///< active fingerprint, same convention
    int iterations = 0;
};
BoxQpResult box_qp_solve(const Matrix& H, const Vector& f, double u_max,
                         double tol = 1e-9);

/// n-dimensional measure (length / area / volume) of a halfspace
/// intersection inside a box, for n in {1, 2, 3}.
double region_measure(const std::vector<HalfspaceN>& halfspaces,
                      const Box& box, Vector* interior = nullptr);

}  // namespace mpoc

#endif  // MPOC_DT_MPQP_HPP
