// mpoc — shared fixtures for the test suite.
#ifndef MPOC_TESTS_HELPERS_HPP
#define MPOC_TESTS_HELPERS_HPP

#include <random>
#include <string>

#include "mpoc/model.hpp"

namespace mpoc_tests {

/// The instance shipped as configs/demo.json: a third-order plant with one
/// bounded input, horizon 5 s, and the box of initial states used
/// throughout the reports.
inline mpoc::LtiSystem make_demo() {
    mpoc::LtiSystem sys;
    sys.A.resize(3, 3);
    sys.A << 0, 1, 0, 0, 0, 1, -2, -2, -5;
    sys.B.resize(3);
    sys.B << 0, 0, 1;
    sys.t_f = 5.0;
    sys.u_max = 0.4;
    sys.theta.lower.resize(3);
    sys.theta.lower << -2.6, -0.9, -0.7;
    sys.theta.upper.resize(3);
    sys.theta.upper << 2.6, 0.9, 0.7;
    return sys;
}

/// Double integrator with a long horizon and a tight bound — engineered so
/// optimal trajectories cross the bound more than once (diagnostic fixture).
inline mpoc::LtiSystem make_double_integrator() {
    mpoc::LtiSystem sys;
    sys.A.resize(2, 2);
    sys.A << 0, 1, 0, 0;
    sys.B.resize(2);
    sys.B << 0, 1;
    sys.t_f = 6.0;
    sys.u_max = 0.1;
    sys.theta.lower = mpoc::Vector::Constant(2, -1.0);
    sys.theta.upper = mpoc::Vector::Constant(2, 1.0);
    return sys;
}

/// Scalar stable plant with a bound so wide the input never saturates.
inline mpoc::LtiSystem make_scalar_wide() {
    mpoc::LtiSystem sys;
    sys.A.resize(1, 1);
    sys.A << -1.0;
    sys.B.resize(1);
    sys.B << 1.0;
    sys.t_f = 5.0;
    sys.u_max = 1e6;
    sys.theta.lower = mpoc::Vector::Constant(1, -1.0);
    sys.theta.upper = mpoc::Vector::Constant(1, 1.0);
    return sys;
}

/// Random Hurwitz system: a random matrix shifted left of its spectral
/// abscissa, random nonzero input column, moderate horizon.  Deterministic
/// per seed.
inline mpoc::LtiSystem make_random_stable(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    mpoc::Matrix A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = unit(rng);
    const double abscissa =
        A.eigenvalues().real().maxCoeff();
    A -= (abscissa + 0.5) * mpoc::Matrix::Identity(n, n);

    mpoc::Vector B(n);
    double norm = 0.0;
    while (norm < 0.1) {
        for (int i = 0; i < n; ++i) B(i) = unit(rng);
        norm = B.norm();
    }

    mpoc::LtiSystem sys;
    sys.A = A;
    sys.B = B;
    sys.t_f = 2.0;
    sys.u_max = 5.0;
    sys.theta.lower = mpoc::Vector::Constant(n, -1.0);
    sys.theta.upper = mpoc::Vector::Constant(n, 1.0);
    return sys;
}

/// Directory holding the shipped configuration files, baked in at compile
/// time so the tests run from any working directory.
inline std::string config_dir() {
#ifdef MPOC_CONFIG_DIR
    return MPOC_CONFIG_DIR;
#else
    return "configs";
#endif
}

}  // namespace mpoc_tests

#endif  // MPOC_TESTS_HELPERS_HPP
