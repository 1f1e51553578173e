// mpoc — dense linear-algebra kernel: matrix exponential, guarded solves,
// least squares.  Header-only and generic over the Eigen scalar type so the
// kernel composes with expression templates; everything downstream
// instantiates it with double.
#ifndef MPOC_LINALG_HPP
#define MPOC_LINALG_HPP

#include <Eigen/Dense>
#include <cmath>
#include <sstream>
#include <utility>

#include "mpoc/errors.hpp"

namespace mpoc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace detail {

/// Padé(13) numerator/denominator split for e^X, from the classic
/// scaling-and-squaring coefficient table.
template <typename Mat>
void pade13(const Mat& X, Mat& U, Mat& V) {
    using Scalar = typename Mat::Scalar;
    static const double b[] = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0,  129060195264000.0,   10559470521600.0,
        670442572800.0,      33522128640.0,       1323241920.0,
        40840800.0,          960960.0,            16380.0,
        182.0,               1.0};
    const Eigen::Index n = X.rows();
    const Mat I = Mat::Identity(n, n);
    const Mat X2 = X * X;
    const Mat X4 = X2 * X2;
    const Mat X6 = X4 * X2;
    U = X * (X6 * (Scalar(b[13]) * X6 + Scalar(b[11]) * X4 + Scalar(b[9]) * X2)
             + Scalar(b[7]) * X6 + Scalar(b[5]) * X4 + Scalar(b[3]) * X2
             + Scalar(b[1]) * I);
    V = X6 * (Scalar(b[12]) * X6 + Scalar(b[10]) * X4 + Scalar(b[8]) * X2)
        + Scalar(b[6]) * X6 + Scalar(b[4]) * X4 + Scalar(b[2]) * X2
        + Scalar(b[0]) * I;
}

}  // namespace detail

/// e^{M t} by scaling-and-squaring with a fixed Padé(13) approximant.
/// Accepts t = 0 or negative.  Matrices here stay small (≤ ~21×21), so the
/// fixed order favours accuracy over the adaptive-order ladder.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
mat_exp(const Eigen::MatrixBase<Derived>& M,
        typename Derived::Scalar t = typename Derived::Scalar(1)) {
    using Scalar = typename Derived::Scalar;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    if (M.rows() != M.cols()) {
        std::ostringstream os;
        os << "mat_exp: matrix must be square, got " << M.rows() << "x"
           << M.cols();
        throw DimensionError(os.str());
    }
    if (!M.allFinite() || !std::isfinite(static_cast<double>(t)))
        throw DomainError("mat_exp: non-finite input");

    Mat X = M * t;
    // theta_13: largest 1-norm for which the unscaled Padé(13) approximant
    // meets double-precision backward accuracy.
    const double theta13 = 5.371920351148152;
    const double norm1 = static_cast<double>(
        X.cwiseAbs().colwise().sum().maxCoeff());
    int squarings = 0;
    if (norm1 > theta13) {
        squarings = std::max(0, static_cast<int>(
                                    std::ceil(std::log2(norm1 / theta13))));
        X /= Scalar(std::pow(2.0, squarings));
    }

    Mat U, V;
    detail::pade13(X, U, V);
    Mat R = (V - U).partialPivLu().solve(V + U);
    for (int i = 0; i < squarings; ++i) R = R * R;
    return R;
}

/// Solve M X = rhs by partial-pivoting LU with a reciprocal-condition guard.
/// Throws SingularityError (carrying the estimate) below rcond 1e-12.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic>
solve(const Eigen::MatrixBase<DerivedA>& M,
      const Eigen::MatrixBase<DerivedB>& rhs) {
    using Scalar = typename DerivedA::Scalar;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    if (M.rows() != M.cols()) {
        std::ostringstream os;
        os << "solve: matrix must be square, got " << M.rows() << "x"
           << M.cols();
        throw DimensionError(os.str());
    }
    if (M.rows() != rhs.rows()) {
        std::ostringstream os;
        os << "solve: rhs has " << rhs.rows() << " rows, expected "
           << M.rows();
        throw DimensionError(os.str());
    }
    if (!M.allFinite() || !rhs.allFinite())
        throw DomainError("solve: non-finite input");

    Eigen::PartialPivLU<Mat> lu(M.eval());
    const double rcond = static_cast<double>(lu.rcond());
    if (!(rcond > 1e-12)) {
        std::ostringstream os;
        os << "solve: matrix singular to working precision (rcond ≈ "
           << rcond << ")";
        throw SingularityError(os.str(), rcond);
    }
    return lu.solve(rhs.eval());
}

template <typename Scalar>
struct LeastSquaresResult {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> coefficients;
    Scalar r_squared;
};

/// Least-squares fit via column-pivoted QR (degree-3 monomial designs are
/// mildly ill-conditioned, so normal equations are avoided).  r² is taken
/// about the target mean; the degenerate SS_tot = 0 case reports 1 when the
/// residual also vanishes.
template <typename DerivedA, typename DerivedB>
LeastSquaresResult<typename DerivedA::Scalar>
least_squares(const Eigen::MatrixBase<DerivedA>& design,
              const Eigen::MatrixBase<DerivedB>& targets) {
    using Scalar = typename DerivedA::Scalar;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    if (design.rows() != targets.rows()) {
        std::ostringstream os;
        os << "least_squares: " << design.rows() << " rows vs "
           << targets.rows() << " targets";
        throw DimensionError(os.str());
    }
    if (design.rows() < design.cols()) {
        std::ostringstream os;
        os << "least_squares: underdetermined (" << design.rows() << " rows, "
           << design.cols() << " columns)";
        throw DimensionError(os.str());
    }
    if (!design.allFinite() || !targets.allFinite())
        throw DomainError("least_squares: non-finite input");

    Eigen::ColPivHouseholderQR<Mat> qr(design.eval());
    if (qr.rank() < design.cols()) {
        std::ostringstream os;
        os << "least_squares: design rank " << qr.rank() << " < "
           << design.cols() << " columns";
        throw SingularityError(os.str(), 0.0);
    }

    LeastSquaresResult<Scalar> out;
    out.coefficients = qr.solve(targets.eval());
    const Vec y = targets.eval();
    const Vec resid = y - design * out.coefficients;
    const Scalar ss_res = resid.squaredNorm();
    const Scalar mean = y.mean();
    const Scalar ss_tot = (y.array() - mean).matrix().squaredNorm();
    const Scalar scale =
        Scalar(1) + static_cast<Scalar>(y.squaredNorm());
    if (ss_tot <= Scalar(1e-24) * scale) {
        out.r_squared = (ss_res <= Scalar(1e-24) * scale) ? Scalar(1)
                                                          : Scalar(0);
    } else {
        out.r_squared = Scalar(1) - ss_res / ss_tot;
    }
    return out;
}

}  // namespace mpoc

#endif  // MPOC_LINALG_HPP
