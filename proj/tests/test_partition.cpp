// mpoc — partition construction, classification, and verification sweeps.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "mpoc/partition.hpp"
#include "mpoc/simulate.hpp"

using namespace mpoc;
using mpoc_tests::make_demo;
using mpoc_tests::make_double_integrator;
using mpoc_tests::make_scalar_wide;

TEST_CASE("the shipped instance produces the published hyperplanes") {
    const LtiSystem sys = make_demo();
    const CtPartition p = compute_partition(sys);
    REQUIRE(p.hyperplanes.size() == 4);
    REQUIRE(p.regions.size() == 5);

    const Hyperplane& l1 = p.plane("l1");
    const Hyperplane& l2 = p.plane("l2");
    const Hyperplane& l3 = p.plane("l3");
    const Hyperplane& l4 = p.plane("l4");

    // band planes share the terminal free normal and sit at ∓u_max
    CHECK(l1.normal == l2.normal);
    CHECK(l1.offset == doctest::Approx(-0.4).epsilon(1e-12));
    CHECK(l2.offset == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(l1.normal(0) == doctest::Approx(0.2084).epsilon(5e-4));
    CHECK(l1.normal(1) == doctest::Approx(0.8613).epsilon(5e-4));
    CHECK(l1.normal(2) == doctest::Approx(0.2650).epsilon(5e-4));

    // junction-existence planes are mirror images of each other
    CHECK(l3.normal == l4.normal);
    CHECK(l3.offset == doctest::Approx(-l4.offset).epsilon(1e-12));
    CHECK(l4.offset == doctest::Approx(0.3611).epsilon(5e-4));
    CHECK(l3.normal(0) == doctest::Approx(0.1944).epsilon(5e-4));
    CHECK(l3.normal(1) == doctest::Approx(0.1593).epsilon(5e-4));
    CHECK(l3.normal(2) == doctest::Approx(0.0252).epsilon(5e-4));
}

TEST_CASE("region table carries the expected arcs and sign patterns") {
    const CtPartition p = compute_partition(make_demo());

    const RegionSpec& r1 = p.region("CR01");
    CHECK(r1.arc == ArcSequence::FreeFull);
    CHECK(r1.signs == std::array<int, 4>{+1, -1, 0, 0});
    CHECK_FALSE(r1.empty_in_theta);

    const RegionSpec& r2 = p.region("CR02");
    CHECK(r2.arc == ArcSequence::UpperBaThenFree);
    CHECK(r2.signs == std::array<int, 4>{0, +1, 0, -1});

    const RegionSpec& r3 = p.region("CR03");
    CHECK(r3.arc == ArcSequence::UpperBaFull);
    CHECK(r3.signs == std::array<int, 4>{0, +1, 0, +1});

    const RegionSpec& r4 = p.region("CR04");
    CHECK(r4.arc == ArcSequence::LowerBaThenFree);
    CHECK(r4.signs == std::array<int, 4>{-1, 0, +1, 0});

    const RegionSpec& r5 = p.region("CR05");
    CHECK(r5.arc == ArcSequence::LowerBaFull);
    CHECK(r5.signs == std::array<int, 4>{-1, 0, -1, 0});

    for (const RegionSpec& r : p.regions) {
        CHECK_FALSE(r.empty_in_theta);
        REQUIRE(r.probe_point.size() == 3);
        const Classification c = classify(p, r.probe_point);
        CHECK(c.region_id == r.id);
        CHECK_FALSE(c.boundary);
    }

    CHECK_THROWS_AS(p.region("CR99"), DomainError);
    CHECK_THROWS_AS(p.plane("l5"), DomainError);
}

TEST_CASE("partition construction is bitwise deterministic") {
    const LtiSystem sys = make_demo();
    const CtPartition a = compute_partition(sys);
    const CtPartition b = compute_partition(sys);
    REQUIRE(a.hyperplanes.size() == b.hyperplanes.size());
    for (std::size_t j = 0; j < a.hyperplanes.size(); ++j) {
        CHECK(a.hyperplanes[j].normal == b.hyperplanes[j].normal);
        CHECK(a.hyperplanes[j].offset == b.hyperplanes[j].offset);
    }
    for (std::size_t j = 0; j < a.regions.size(); ++j)
        CHECK(a.regions[j].probe_point == b.regions[j].probe_point);
}

TEST_CASE("classify places landmark points and flags boundary bands") {
    const LtiSystem sys = make_demo();
    const CtPartition p = compute_partition(sys);

    const Classification origin = classify(p, Vector::Zero(3));
    CHECK(origin.region_id == "CR01");
    CHECK_FALSE(origin.boundary);

    Vector corner(3);
    corner << -2.6, -0.9, -0.7;
    CHECK(classify(p, corner).region_id == "CR05");
    corner = -corner;
    CHECK(classify(p, corner).region_id == "CR03");

    // a point constructed to sit exactly on the lower band plane: banded
    // margins resolve to the negative side, so it lands in CR04
    const Vector& a = p.plane("l1").normal;
    const Vector on_l1 = (-sys.u_max / a.squaredNorm()) * a;
    const Classification edge = classify(p, on_l1);
    CHECK(edge.region_id == "CR04");
    CHECK(edge.boundary);

    Vector outside(3);
    outside << 2.7, 0.0, 0.0;
    CHECK_THROWS_AS(classify(p, outside), DomainError);
    CHECK_THROWS_AS(classify(p, Vector::Zero(2)), DimensionError);
}

TEST_CASE("classification covers a full grid with exactly one region each") {
    const LtiSystem sys = make_demo();
    const CtPartition p = compute_partition(sys);
    int count = 0;
    std::array<int, 5> per_region{};
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j)
            for (int k = 0; k < 9; ++k) {
                Vector x(3);
                x << -2.6 + 5.2 * i / 8.0, -0.9 + 1.8 * j / 8.0,
                    -0.7 + 1.4 * k / 8.0;
                const Classification c = classify(p, x);
                ++count;
                ++per_region[static_cast<std::size_t>(
                    c.region_id[3] - '1')];
            }
    CHECK(count == 729);
    for (const int n : per_region) CHECK(n > 0);
}

TEST_CASE("initial switching value is affine across the box") {
    // σ(0; x) of the free structure must be linear in x: midpoints map to
    // midpoints.  This pins the boundary planes to genuine level sets.
    const LtiSystem sys = make_demo();
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto draw = [&]() {
        Vector x(3);
        x << 2.6 * u(rng), 0.9 * u(rng), 0.7 * u(rng);
        return x;
    };
    auto sigma0 = [&](const Vector& x) {
        return simulate_optimal(sys, x, ArcSequence::FreeFull, std::nullopt,
                                100)
            .sigma.front();
    };
    for (int trial = 0; trial < 20; ++trial) {
        const Vector x = draw();
        const Vector y = draw();
        const double mid = sigma0(0.5 * (x + y));
        CHECK(std::abs(mid - 0.5 * (sigma0(x) + sigma0(y))) < 1e-9);
    }
}

TEST_CASE("a wide input bound collapses the partition onto the free region") {
    const LtiSystem sys = make_scalar_wide();
    const CtPartition p = compute_partition(sys);
    CHECK_FALSE(p.region("CR01").empty_in_theta);
    for (const char* id : {"CR02", "CR03", "CR04", "CR05"})
        CHECK(p.region(id).empty_in_theta);
    for (const double x : {-1.0, -0.5, 0.0, 0.5, 1.0})
        CHECK(classify(p, Vector::Constant(1, x)).region_id == "CR01");

    const SingleSwitchReport r = verify_single_switch(sys, 11, 500);
    CHECK(r.grid_points == 11);
    CHECK(r.multi_crossing == 0);
    CHECK(r.max_crossings <= 1);
}

TEST_CASE("single-switch sweep exposes the double-integrator violations") {
    const LtiSystem sys = make_double_integrator();
    const SingleSwitchReport r = verify_single_switch(sys, 7, 1000);
    CHECK(r.grid_points == 49);
    CHECK(r.simulated == 49);
    CHECK(r.multi_crossing == 14);
    CHECK(r.max_crossings == 3);
    CHECK(!r.offenders.empty());
    CHECK(r.offenders.size() <= 32);
}

TEST_CASE("endpoint sweep reports complementarity violations per region") {
    const LtiSystem sys = make_demo();
    const CtPartition p = compute_partition(sys);
    const EndpointReport rep = verify_endpoint_condition(sys, p, 20);
    REQUIRE(rep.regions.size() == 5);
    for (const RegionEndpointStats& st : rep.regions) {
        CHECK(st.samples + st.construction_failures == 20);
        CHECK(st.samples > 0);
    }
    CHECK(rep.regions[0].region_id == "CR01");
    // the shipped instance genuinely violates the single-arc premise: the
    // full-bound multiplier dips negative and free trajectories reach the
    // band inside the nominal free region
    CHECK(rep.regions[2].negative_mu_samples > 0);
    CHECK(rep.regions[4].negative_mu_samples > 0);
    CHECK(rep.regions[0].gbar_violations > 0);
    CHECK(rep.regions[0].max_gbar > 0.0);
}

TEST_CASE("endpoint sweep is reproducible for a fixed seed") {
    const LtiSystem sys = make_demo();
    const CtPartition p = compute_partition(sys);
    const EndpointReport a = verify_endpoint_condition(sys, p, 10, 42);
    const EndpointReport b = verify_endpoint_condition(sys, p, 10, 42);
    REQUIRE(a.regions.size() == b.regions.size());
    for (std::size_t i = 0; i < a.regions.size(); ++i) {
        CHECK(a.regions[i].min_mu_including_junction ==
              b.regions[i].min_mu_including_junction);
        CHECK(a.regions[i].negative_mu_samples ==
              b.regions[i].negative_mu_samples);
        CHECK(a.regions[i].max_gbar == b.regions[i].max_gbar);
    }
}

TEST_CASE("oracle agreement sweep audits itself") {
    const LtiSystem sys = make_demo();
    const CtPartition p = compute_partition(sys);
    const AgreementReport r = verify_oracle_agreement(sys, p, 5, 500);
    CHECK(r.grid_points == 125);
    CHECK(r.compared == r.agreements + r.disagreements);
    CHECK(r.compared + r.boundary_skipped == 125);
    CHECK(r.disagreements_off_band <= r.disagreements);
    CHECK(r.agreement_ratio >= 0.0);
    CHECK(r.agreement_ratio <= 1.0);
    CHECK(r.mismatch_samples.size() <=
          static_cast<std::size_t>(r.disagreements));

    const AgreementReport again = verify_oracle_agreement(sys, p, 5, 500);
    CHECK(again.agreements == r.agreements);
    CHECK(again.disagreements == r.disagreements);
}

TEST_CASE("verification sweeps reject degenerate grids") {
    const LtiSystem sys = make_demo();
    const CtPartition p = compute_partition(sys);
    CHECK_THROWS_AS(verify_single_switch(sys, 0), DomainError);
    CHECK_THROWS_AS(verify_oracle_agreement(sys, p, 0), DomainError);
}
