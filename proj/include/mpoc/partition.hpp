// mpoc — critical-region partition of the parameter box: hyperplane
// construction, point classification, and grid-based verification sweeps.
#ifndef MPOC_PARTITION_HPP
#define MPOC_PARTITION_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mpoc/model.hpp"
#include "mpoc/tpbvp.hpp"

namespace mpoc {

/// A single affine boundary `normal . x = offset` in canonical form: the
/// entry of `normal` with the largest magnitude is positive.  `label` is a
/// short stable identifier ("l1".."l4") used in exports and reports.
struct Hyperplane {
    Vector normal;
    double offset = 0.0;
    std::string label;

    /// Signed margin `normal . x - offset` of a point against this plane.
    double margin(const Vector& x) const { return normal.dot(x) - offset; }
};

/// One critical region: the set of initial states sharing an arc sequence.
/// `signs[j]` constrains the margin of hyperplane j: +1 requires margin > 0,
/// -1 requires margin < 0, 0 means the plane is not load-bearing for this
/// region.  `probe_point` is an interior representative found during
/// construction (empty when the region does not intersect the box).
struct RegionSpec {
    std::string id;
    ArcSequence arc = ArcSequence::FreeFull;
    std::array<int, 4> signs{};
    bool empty_in_theta = false;
    Vector probe_point;
};

/// The full partition: four hyperplanes, five regions, the parameter box
/// they tile, and a note recording the sign conventions applied.
struct CtPartition {
    std::vector<Hyperplane> hyperplanes;
    std::vector<RegionSpec> regions;
    Box theta;
    std::string convention_note;

    const Hyperplane& plane(const std::string& label) const;
    const RegionSpec& region(const std::string& id) const;
};

/// Result of classifying one initial state.
struct Classification {
    std::string region_id;
    ArcSequence arc = ArcSequence::FreeFull;
    /// True when the point sits within the boundary band of a plane that is
    /// load-bearing for the selected region.
    bool boundary = false;
};

/// Build the partition for `sys`: terminal switching-function gains define
/// the four boundary planes; each candidate region is probed at interior
/// points for structural consistency (boundary values of the switching
/// function and existence of a switching time where the arc requires one).
/// Throws ModelError when a probe contradicts the declared arc structure,
/// e.g. a transitional cell whose trajectories admit switching times for
/// both bound signs.
CtPartition compute_partition(const LtiSystem& sys, double tol_mult = 1.0);

/// Classify `x0` against a computed partition.  Points outside the box
/// raise DomainError.  Points within `band` of a load-bearing plane are
/// flagged `boundary = true`; ties are resolved deterministically by
/// treating every banded margin as negative.
Classification classify(const CtPartition& p, const Vector& x0,
                        double band = 1e-9);

/// Grid sweep counting switching-function crossings along simulated optimal
/// trajectories; the premise is that no trajectory crosses more than once.
struct SingleSwitchReport {
    int grid_points = 0;
    int simulated = 0;
    int multi_crossing = 0;           ///< points with more than one crossing
    int max_crossings = 0;
    std::vector<Vector> offenders;    ///< up to 32 multi-crossing samples
};

SingleSwitchReport verify_single_switch(const LtiSystem& sys, int grid_k,
                                        int steps = 2000,
                                        double tol_mult = 1.0);

/// Per-region complementarity check: on bound arcs the multiplier must stay
/// nonnegative with its minimum at the arc end dictated by the arc type.
struct RegionEndpointStats {
    std::string region_id;
    int samples = 0;
    double min_mu_including_junction = 0.0;
    double min_mu_excluding_junction = 0.0;
    int argmin_violations = 0;   ///< samples whose closed-arc argmin strays
    double worst_argmin_time_error = 0.0;
    int negative_mu_samples = 0; ///< samples whose interior multiplier dips < 0
    double max_gbar = 0.0;       ///< free samples: max of |sigma| - u_max
    int gbar_violations = 0;     ///< free samples whose |sigma| reaches the bound
    int construction_failures = 0;
};

struct EndpointReport {
    std::vector<RegionEndpointStats> regions;
    int fine_grid_mismatches = 0;  ///< cross-check disagreements on refinement
};

EndpointReport verify_endpoint_condition(const LtiSystem& sys,
                                         const CtPartition& p,
                                         int samples_per_region,
                                         unsigned long long seed = 1,
                                         int steps = 2000,
                                         double tol_mult = 1.0);

/// Grid sweep comparing partition classification against an independent
/// per-point arc detector driven only by simulation consistency checks.
struct AgreementReport {
    int grid_points = 0;
    int compared = 0;            ///< non-boundary points actually compared
    int boundary_skipped = 0;
    int agreements = 0;
    int disagreements = 0;
    int disagreements_off_band = 0;  ///< disagreeing points not near a plane
    double agreement_ratio = 0.0;
    std::vector<Vector> mismatch_samples;  ///< up to 32 disagreeing points
};

AgreementReport verify_oracle_agreement(const LtiSystem& sys,
                                        const CtPartition& p, int grid_k,
                                        int steps = 2000,
                                        double tol_mult = 1.0);

}  // namespace mpoc

#endif  // MPOC_PARTITION_HPP
