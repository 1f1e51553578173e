// mpoc — instance types, arc-structure vocabulary, Hamiltonian assembly.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "mpoc/model.hpp"

using namespace mpoc;
using mpoc_tests::make_demo;

TEST_CASE("box geometry accessors") {
    Box box;
    box.lower.resize(3);
    box.lower << -2.6, -0.9, -0.7;
    box.upper.resize(3);
    box.upper << 2.6, 0.9, 0.7;

    CHECK(box.dim() == 3);
    CHECK(box.volume() == doctest::Approx(13.104).epsilon(1e-14));
    CHECK(box.center().norm() == doctest::Approx(0.0));

    Vector inside(3), outside(3), edge(3);
    inside << 1.0, 0.0, 0.0;
    outside << 2.7, 0.0, 0.0;
    edge << 2.6, 0.9, 0.7;
    CHECK(box.contains(inside));
    CHECK_FALSE(box.contains(outside));
    CHECK(box.contains(edge));
    CHECK(box.contains(outside, 0.2));
}

TEST_CASE("validate accepts the shipped instance") {
    CHECK_NOTHROW(make_demo().validate());
}

TEST_CASE("validate rejects structural violations") {
    {
        LtiSystem s = make_demo();
        s.u_max = 0.0;
        CHECK_THROWS_AS(s.validate(), ValidationError);
        s.u_max = -0.4;
        CHECK_THROWS_AS(s.validate(), ValidationError);
    }
    {
        LtiSystem s = make_demo();
        s.t_f = 0.0;
        CHECK_THROWS_AS(s.validate(), ValidationError);
    }
    {
        LtiSystem s = make_demo();
        s.A = Matrix::Zero(3, 2);
        CHECK_THROWS_AS(s.validate(), ValidationError);
    }
    {
        LtiSystem s = make_demo();
        s.B = Vector::Zero(2);
        CHECK_THROWS_AS(s.validate(), ValidationError);
    }
    {
        LtiSystem s = make_demo();
        s.theta.lower(0) = 3.0;  // lower above upper
        CHECK_THROWS_AS(s.validate(), ValidationError);
    }
    {
        LtiSystem s = make_demo();
        s.A(1, 1) = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(s.validate(), ValidationError);
    }
}

TEST_CASE("arc tokens round-trip and reject junk") {
    const ArcSequence all[] = {
        ArcSequence::FreeFull, ArcSequence::UpperBaThenFree,
        ArcSequence::UpperBaFull, ArcSequence::LowerBaThenFree,
        ArcSequence::LowerBaFull};
    for (const ArcSequence arc : all)
        CHECK(arc_from_string(to_string(arc)) == arc);
    CHECK_THROWS_AS(arc_from_string("sideways"), DomainError);
}

TEST_CASE("arc predicates are mutually consistent") {
    const ArcSequence all[] = {
        ArcSequence::FreeFull, ArcSequence::UpperBaThenFree,
        ArcSequence::UpperBaFull, ArcSequence::LowerBaThenFree,
        ArcSequence::LowerBaFull};
    int transitional = 0, full = 0, free_arcs = 0;
    for (const ArcSequence arc : all) {
        const int s = bound_sign_of(arc);
        if (arc == ArcSequence::FreeFull) {
            CHECK(s == 0);
            CHECK_FALSE(is_transitional(arc));
            CHECK_FALSE(is_bound_full(arc));
            ++free_arcs;
            continue;
        }
        CHECK((s == 1 || s == -1));
        CHECK(is_transitional(arc) != is_bound_full(arc));
        transitional += is_transitional(arc);
        full += is_bound_full(arc);
        CHECK(arc_of(s, is_transitional(arc)) == arc);
    }
    CHECK(free_arcs == 1);
    CHECK(transitional == 2);
    CHECK(full == 2);
}

TEST_CASE("free Hamiltonian has the joint state-costate block layout") {
    const LtiSystem sys = make_demo();
    const Matrix M = hamiltonian_free(sys);
    REQUIRE(M.rows() == 6);
    REQUIRE(M.cols() == 6);
    CHECK((M.topLeftCorner(3, 3) - sys.A).norm() == doctest::Approx(0.0));
    CHECK((M.topRightCorner(3, 3) + sys.B * sys.B.transpose()).norm() ==
          doctest::Approx(0.0));
    CHECK((M.bottomLeftCorner(3, 3) + Matrix::Identity(3, 3)).norm() ==
          doctest::Approx(0.0));
    CHECK((M.bottomRightCorner(3, 3) + sys.A.transpose()).norm() ==
          doctest::Approx(0.0));
}

TEST_CASE("bound Hamiltonian pins the input at the sign-dependent constant") {
    const LtiSystem sys = make_demo();
    for (const int s : {+1, -1}) {
        const Matrix M = hamiltonian_bound(sys, s);
        REQUIRE(M.rows() == 7);
        REQUIRE(M.cols() == 7);
        // state block: xdot = A x + (-s u_max) B via the homogeneous column
        CHECK((M.topLeftCorner(3, 3) - sys.A).norm() == doctest::Approx(0.0));
        CHECK((M.block(0, 6, 3, 1) + s * sys.u_max * sys.B).norm() ==
              doctest::Approx(0.0));
        // costate block independent of the input
        CHECK((M.block(3, 0, 3, 3) + Matrix::Identity(3, 3)).norm() ==
              doctest::Approx(0.0));
        CHECK((M.block(3, 3, 3, 3) + sys.A.transpose()).norm() ==
              doctest::Approx(0.0));
        CHECK(M.block(3, 6, 3, 1).norm() == doctest::Approx(0.0));
        // homogeneous row stays zero
        CHECK(M.row(6).norm() == doctest::Approx(0.0));
    }
    CHECK_THROWS_AS(hamiltonian_bound(sys, 0), DomainError);
}
