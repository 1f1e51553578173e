// mpoc — linear-algebra kernel tests: matrix exponential, guarded solve,
// least squares.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mpoc/linalg.hpp"

using namespace mpoc;

TEST_CASE("mat_exp matches the scalar exponential") {
    Matrix A(1, 1);
    A << -1.0;
    const Matrix E = mat_exp(A);
    CHECK(E(0, 0) == doctest::Approx(0.36787944117144233).epsilon(1e-14));

    const Matrix E2 = mat_exp(A, 2.0);
    CHECK(E2(0, 0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));

    const Matrix E0 = mat_exp(A, 0.0);
    CHECK(E0(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("mat_exp of a nilpotent matrix terminates exactly") {
    Matrix N(2, 2);
    N << 0, 1, 0, 0;
    const Matrix E = mat_exp(N, 3.5);
    CHECK(E(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(E(0, 1) == doctest::Approx(3.5).epsilon(1e-15));
    CHECK(E(1, 0) == doctest::Approx(0.0));
    CHECK(E(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("mat_exp of a rotation generator gives sine and cosine") {
    Matrix J(2, 2);
    J << 0, -1, 1, 0;
    const double t = 1.2345;
    const Matrix E = mat_exp(J, t);
    CHECK(E(0, 0) == doctest::Approx(std::cos(t)).epsilon(1e-13));
    CHECK(E(0, 1) == doctest::Approx(-std::sin(t)).epsilon(1e-13));
    CHECK(E(1, 0) == doctest::Approx(std::sin(t)).epsilon(1e-13));
    CHECK(E(1, 1) == doctest::Approx(std::cos(t)).epsilon(1e-13));
}

TEST_CASE("mat_exp group property: forward times backward is identity") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unit(-2.0, 2.0);
    for (int trial = 0; trial < 5; ++trial) {
        Matrix A(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) A(i, j) = unit(rng);
        const Matrix P = mat_exp(A, 0.7) * mat_exp(A, -0.7);
        CHECK((P - Matrix::Identity(4, 4)).norm() < 1e-12);
    }
}

TEST_CASE("mat_exp semigroup property under squaring-scale horizons") {
    Matrix A(3, 3);
    A << 0, 1, 0, 0, 0, 1, -2, -2, -5;
    const Matrix whole = mat_exp(A, 5.0);
    const Matrix halves = mat_exp(A, 2.5) * mat_exp(A, 2.5);
    CHECK((whole - halves).norm() < 1e-11 * whole.norm());
}

TEST_CASE("mat_exp rejects malformed input") {
    CHECK_THROWS_AS(mat_exp(Matrix::Zero(2, 3)), DimensionError);
    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(mat_exp(bad), DomainError);
}

TEST_CASE("solve recovers a known solution and handles matrix right-hand sides") {
    Matrix A(2, 2);
    A << 3, 1, 1, 2;
    Vector b(2);
    b << 9, 8;
    const Matrix x = solve(A, b);
    CHECK(x(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(x(1, 0) == doctest::Approx(3.0).epsilon(1e-14));

    const Matrix X = solve(A, Matrix::Identity(2, 2));
    CHECK((A * X - Matrix::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("solve rejects singular and malformed systems") {
    Matrix S(2, 2);
    S << 1, 2, 2, 4;
    try {
        solve(S, Vector::Ones(2));
        FAIL("expected SingularityError");
    } catch (const SingularityError& e) {
        CHECK(e.rcond <= 1e-12);
    }

    CHECK_THROWS_AS(solve(Matrix::Zero(2, 3), Vector::Ones(2)),
                    DimensionError);
    CHECK_THROWS_AS(solve(Matrix::Identity(2, 2), Vector::Ones(3)),
                    DimensionError);

    Matrix nan2 = Matrix::Identity(2, 2);
    nan2(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(solve(nan2, Vector::Ones(2)), DomainError);
}

TEST_CASE("least_squares reproduces an exactly polynomial target") {
    // y = 2 - x + 0.5 x^2 sampled without noise: residual zero, r^2 = 1.
    const int m = 12;
    Matrix design(m, 3);
    Vector y(m);
    for (int i = 0; i < m; ++i) {
        const double x = -1.0 + 2.0 * i / (m - 1);
        design(i, 0) = 1.0;
        design(i, 1) = x;
        design(i, 2) = x * x;
        y(i) = 2.0 - x + 0.5 * x * x;
    }
    const auto fit = least_squares(design, y);
    CHECK(fit.coefficients(0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.coefficients(1) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(fit.coefficients(2) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("least_squares r-squared drops when the model cannot explain the data") {
    const int m = 50;
    Matrix design(m, 1);
    Vector y(m);
    for (int i = 0; i < m; ++i) {
        const double x = static_cast<double>(i) / (m - 1);
        design(i, 0) = 1.0;           // constant-only model
        y(i) = std::sin(6.28 * x);    // structure it cannot capture
    }
    const auto fit = least_squares(design, y);
    CHECK(fit.r_squared < 0.5);
    CHECK(fit.r_squared >= 0.0);
}

TEST_CASE("least_squares reports exact fit of constant data as r-squared one") {
    Matrix design = Matrix::Ones(5, 1);
    Vector y = Vector::Constant(5, 3.0);
    const auto fit = least_squares(design, y);
    CHECK(fit.coefficients(0) == doctest::Approx(3.0));
    CHECK(fit.r_squared == doctest::Approx(1.0));
}

TEST_CASE("least_squares rejects deficient designs") {
    CHECK_THROWS_AS(least_squares(Matrix::Ones(2, 3), Vector::Ones(2)),
                    DimensionError);  // underdetermined
    CHECK_THROWS_AS(least_squares(Matrix::Ones(4, 3), Vector::Ones(5)),
                    DimensionError);  // row mismatch

    Matrix rank1(4, 2);
    rank1 << 1, 2, 2, 4, 3, 6, 4, 8;
    CHECK_THROWS_AS(least_squares(rank1, Vector::Ones(4)), SingularityError);
}
