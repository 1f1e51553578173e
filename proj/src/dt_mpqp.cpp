#include "mpoc/dt_mpqp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mpoc {

namespace {
constexpr double kVolumeFloor = 1e-9;
constexpr double kTieTol = 1e-9;

/// Minimum of normal . x over an axis-aligned box (attained at a corner).
double min_over_box(const Vector& normal, const Box& box) {
    double v = 0.0;
    for (int i = 0; i < box.dim(); ++i)
        v += normal(i) > 0.0 ? normal(i) * box.lower(i)
                             : normal(i) * box.upper(i);
    return v;
}

std::vector<HalfspaceN> box_halfspaces_n(const Box& box) {
    std::vector<HalfspaceN> hs;
    for (int i = 0; i < box.dim(); ++i) {
        HalfspaceN lo;
        lo.normal = Vector::Zero(box.dim());
        lo.normal(i) = -1.0;
        lo.offset = -box.lower(i);
        hs.push_back(std::move(lo));
        HalfspaceN hi;
        hi.normal = Vector::Zero(box.dim());
        hi.normal(i) = 1.0;
        hi.offset = box.upper(i);
        hs.push_back(std::move(hi));
    }
    return hs;
}

double measure_1d(const std::vector<HalfspaceN>& hs, const Box& box,
                  Vector* interior) {
    double lo = box.lower(0), hi = box.upper(0);
    for (const HalfspaceN& h : hs) {
        const double a = h.normal(0);
        if (std::abs(a) <= 1e-14) {
            if (h.offset < -1e-12) return 0.0;
            continue;
        }
        if (a > 0.0)
            hi = std::min(hi, h.offset / a);
        else
            lo = std::max(lo, h.offset / a);
    }
    if (!(hi > lo)) return 0.0;
    if (interior) {
        interior->resize(1);
        (*interior)(0) = 0.5 * (lo + hi);
    }
    return hi - lo;
}

double measure_2d(const std::vector<HalfspaceN>& hs, const Box& box,
                  Vector* interior) {
    using P2 = Eigen::Vector2d;
    std::vector<P2> poly = {
        {box.lower(0), box.lower(1)},
        {box.upper(0), box.lower(1)},
        {box.upper(0), box.upper(1)},
        {box.lower(0), box.upper(1)},
    };
    for (const HalfspaceN& h : hs) {
        const P2 n(h.normal(0), h.normal(1));
        if (n.norm() <= 1e-14) {
            if (h.offset < -1e-12) return 0.0;
            continue;
        }
        std::vector<P2> next;
        const std::size_t m = poly.size();
        for (std::size_t i = 0; i < m; ++i) {
            const P2& p = poly[i];
            const P2& q = poly[(i + 1) % m];
            const double dp = n.dot(p) - h.offset;
            const double dq = n.dot(q) - h.offset;
            if (dp <= 0.0) next.push_back(p);
            if ((dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0))
                next.push_back(p + (dp / (dp - dq)) * (q - p));
        }
        poly = std::move(next);
        if (poly.size() < 3) return 0.0;
    }
    double area2 = 0.0;
    P2 mean = P2::Zero();
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const P2& p = poly[i];
        const P2& q = poly[(i + 1) % poly.size()];
        area2 += p(0) * q(1) - q(0) * p(1);
        mean += p;
    }
    if (interior) {
        mean /= static_cast<double>(poly.size());
        interior->resize(2);
        (*interior)(0) = mean(0);
        (*interior)(1) = mean(1);
    }
    return 0.5 * std::abs(area2);
}

double measure_3d(const std::vector<HalfspaceN>& hs, const Box& box,
                  Vector* interior) {
    std::vector<Halfspace3> h3;
    h3.reserve(hs.size() + 6);
    for (const HalfspaceN& h : hs) {
        if (h.normal.norm() <= 1e-14) {
            if (h.offset < -1e-12) return 0.0;
            continue;
        }
        h3.push_back(Halfspace3{Eigen::Vector3d(h.normal(0), h.normal(1),
                                                h.normal(2)),
                                h.offset});
    }
    for (const Halfspace3& b : box_halfspaces(box)) h3.push_back(b);
    const Polytope3 poly = make_polytope(std::move(h3));
    if (interior && !poly.vertices.empty()) {
        Eigen::Vector3d mean = Eigen::Vector3d::Zero();
        for (const auto& v : poly.vertices) mean += v;
        mean /= static_cast<double>(poly.vertices.size());
        interior->resize(3);
        for (int i = 0; i < 3; ++i) (*interior)(i) = mean(i);
    }
    return volume(poly);
}

}  // namespace

double region_measure(const std::vector<HalfspaceN>& halfspaces,
                      const Box& box, Vector* interior) {
    switch (box.dim()) {
        case 1:
            return measure_1d(halfspaces, box, interior);
        case 2:
            return measure_2d(halfspaces, box, interior);
        case 3:
            return measure_3d(halfspaces, box, interior);
        default:
            throw DimensionError(
                "region_measure: only dimensions 1..3 are supported");
    }
}

DtProblem discretize(const LtiSystem& sys, int N) {
    sys.validate();
    if (N < 1) throw DomainError("discretize: N must be >= 1");
    const int n = sys.n();
    const int m = n + 1;

    // Augment the held input into the state; the exact interval cost of
    // (|x|^2 + u^2)/2 is then a Gram integral of the augmented flow,
    // computed from one block exponential.
    Matrix Atil = Matrix::Zero(m, m);
    Atil.topLeftCorner(n, n) = sys.A;
    Atil.block(0, n, n, 1) = sys.B;

    const double T_s = sys.t_f / N;
    Matrix C = Matrix::Zero(2 * m, 2 * m);
    C.topLeftCorner(m, m) = -Atil.transpose();
    C.topRightCorner(m, m) = Matrix::Identity(m, m);
    C.bottomRightCorner(m, m) = Atil;
    const Matrix expC = mat_exp(C, T_s);

    const Matrix F3 = expC.bottomRightCorner(m, m);  // e^{Atil T_s}
    const Matrix G2 = expC.topRightCorner(m, m);
    Matrix gram = F3.transpose() * G2;               // integral Gram matrix
    gram = 0.5 * (gram + gram.transpose()).eval();

    DtProblem dt;
    dt.N = N;
    dt.T_s = T_s;
    dt.Ad = F3.topLeftCorner(n, n);
    dt.Bd = F3.block(0, n, n, 1);
    dt.Qbar = gram.topLeftCorner(n, n);
    dt.Sbar = gram.block(0, n, n, 1);
    dt.Rbar = gram(n, n);
    dt.u_max = sys.u_max;
    return dt;
}

Condensed condense(const DtProblem& dt) {
    const int n = static_cast<int>(dt.Ad.rows());
    const int N = dt.N;
    if (N < 1 || dt.Ad.cols() != n || dt.Bd.size() != n)
        throw DimensionError("condense: malformed DtProblem");

    // Prediction x_k = G_k x0 + E_k u with u the stacked inputs.
    Matrix G = Matrix::Identity(n, n);
    Matrix E = Matrix::Zero(n, N);
    Matrix H = Matrix::Zero(N, N);
    Matrix F = Matrix::Zero(n, N);
    for (int k = 0; k < N; ++k) {
        const Vector ESk = E.transpose() * dt.Sbar;  // N-vector
        H += E.transpose() * dt.Qbar * E;
        H += ESk * Vector::Unit(N, k).transpose();
        H += Vector::Unit(N, k) * ESk.transpose();
        H(k, k) += dt.Rbar;
        F += G.transpose() * dt.Qbar * E;
        F += (G.transpose() * dt.Sbar) * Vector::Unit(N, k).transpose();
        // advance to k+1
        E = (dt.Ad * E).eval();
        E.col(k) += dt.Bd;
        G = (dt.Ad * G).eval();
    }
    // Terminal weight 1/2 |x_N|^2.
    H += E.transpose() * E;
    F += G.transpose() * E;
    H = 0.5 * (H + H.transpose()).eval();

    const Eigen::LLT<Matrix> llt(H);
    if (llt.info() != Eigen::Success)
        throw ModelError(
            "condense: condensed Hessian is not positive definite");
    return Condensed{std::move(H), std::move(F)};
}

std::vector<DtRegion> enumerate_regions(const DtProblem& dt,
                                        const Condensed& qp, const Box& theta,
                                        EnumerationLog* log) {
    const int N = dt.N;
    const int n = theta.dim();
    if (N > 12) {
        std::ostringstream msg;
        msg << "enumerate_regions: N = " << N
            << " exceeds the 3^N enumeration budget (N <= 12)";
        throw BudgetError(msg.str());
    }
    if (qp.H.rows() != N || qp.F.rows() != n || qp.F.cols() != N)
        throw DimensionError("enumerate_regions: H/F dimensions mismatch");
    if (!(dt.u_max > 0.0))
        throw DomainError("enumerate_regions: DtProblem carries no bound");

    const Matrix Ft = qp.F.transpose();  // N x n
    const std::vector<HalfspaceN> box_hs = box_halfspaces_n(theta);
    EnumerationLog local;
    EnumerationLog& lg = log ? *log : local;
    lg = EnumerationLog{};

    long long total = 1;
    for (int k = 0; k < N; ++k) total *= 3;

    std::vector<DtRegion> kept;
    for (long long code = 0; code < total; ++code) {
        ++lg.patterns_tested;
        std::vector<int> pattern(static_cast<std::size_t>(N), 0);
        std::vector<int> inact, act;
        long long rem = code;
        for (int k = 0; k < N; ++k) {
            const int trit = static_cast<int>(rem % 3);
            rem /= 3;
            pattern[static_cast<std::size_t>(k)] =
                trit == 0 ? 0 : (trit == 1 ? 1 : -1);
            (trit == 0 ? inact : act).push_back(k);
        }

        Matrix K = Matrix::Zero(N, n);
        Vector off = Vector::Zero(N);
        for (int k : act)
            off(k) = pattern[static_cast<std::size_t>(k)] * dt.u_max;

        if (!inact.empty()) {
            const int ni = static_cast<int>(inact.size());
            Matrix Hii(ni, ni);
            Matrix rhs(ni, n + 1);  // [Ft_I | H_IA u_A] solved in one pass
            for (int r = 0; r < ni; ++r) {
                const int kr = inact[static_cast<std::size_t>(r)];
                for (int c = 0; c < ni; ++c)
                    Hii(r, c) = qp.H(kr, inact[static_cast<std::size_t>(c)]);
                rhs.block(r, 0, 1, n) = Ft.row(kr);
                double s = 0.0;
                for (int k : act) s += qp.H(kr, k) * off(k);
                rhs(r, n) = s;
            }
            Matrix sol;
            try {
                sol = solve(Hii, rhs);
            } catch (const SingularityError&) {
                ++lg.singular_skipped;
                continue;
            }
            for (int r = 0; r < ni; ++r) {
                const int kr = inact[static_cast<std::size_t>(r)];
                K.row(kr) = -sol.block(r, 0, 1, n);
                off(kr) = -sol(r, n);
            }
        }

        // Region halfspaces: multiplier nonnegativity on active nodes and
        // bound feasibility on inactive nodes; gradient g(x0) = Gx x0 + g0.
        const Matrix Gx = qp.H * K + Ft;
        const Vector g0 = qp.H * off;
        std::vector<HalfspaceN> hs;
        hs.reserve(static_cast<std::size_t>(2 * N));
        bool infeasible = false;
        auto push = [&](Vector normal, double offset) {
            if (normal.norm() <= 1e-14) {
                if (offset < -1e-12) infeasible = true;
                return;
            }
            hs.push_back(HalfspaceN{std::move(normal), offset});
        };
        for (int k : act) {
            const int s = pattern[static_cast<std::size_t>(k)];
            // upper: g_k <= 0;  lower: g_k >= 0.
            push(s * Gx.row(k).transpose(), -s * g0(k));
        }
        for (int k : inact) {
            push(K.row(k).transpose(), dt.u_max - off(k));
            push(-K.row(k).transpose(), dt.u_max + off(k));
        }
        if (infeasible) {
            ++lg.infeasible;
            continue;
        }

        // Corner prefilter: a halfspace whose minimum over the box is
        // positive excludes the whole box.
        for (const HalfspaceN& h : hs) {
            if (min_over_box(h.normal, theta) > h.offset + 1e-9) {
                infeasible = true;
                break;
            }
        }
        if (infeasible) {
            ++lg.infeasible;
            continue;
        }

        Vector interior;
        const double vol = region_measure(hs, theta, &interior);
        if (!(vol > kVolumeFloor)) {
            ++lg.low_dimensional;
            continue;
        }
        ++lg.kept;

        DtRegion region;
        region.pattern = std::move(pattern);
        region.K = std::move(K);
        region.offset = std::move(off);
        region.halfspaces = std::move(hs);
        for (const HalfspaceN& b : box_hs) region.halfspaces.push_back(b);
        region.volume = vol;
        region.interior_point = std::move(interior);
        kept.push_back(std::move(region));
    }

    std::sort(kept.begin(), kept.end(),
              [](const DtRegion& a, const DtRegion& b) {
                  return a.pattern < b.pattern;
              });
    return kept;
}

const DtRegion& largest_region_law(const std::vector<DtRegion>& regions) {
    if (regions.empty())
        throw DomainError("largest_region_law: empty region list");
    std::size_t best = 0;
    for (std::size_t i = 1; i < regions.size(); ++i)
        if (regions[i].volume > regions[best].volume + kTieTol) best = i;
    return regions[best];
}

BoxQpResult box_qp_solve(const Matrix& H, const Vector& f, double u_max,
                         double tol) {
    const int N = static_cast<int>(H.rows());
    if (H.cols() != N || f.size() != N)
        throw DimensionError("box_qp_solve: dimension mismatch");
    if (!(u_max > 0.0)) throw DomainError("box_qp_solve: u_max must be > 0");

    std::vector<int> pattern(static_cast<std::size_t>(N), 0);
    Vector u = Vector::Zero(N);
    for (int iter = 1; iter <= 1000; ++iter) {
        std::vector<int> inact, act;
        for (int k = 0; k < N; ++k)
            (pattern[static_cast<std::size_t>(k)] == 0 ? inact : act)
                .push_back(k);

        for (int k : act)
            u(k) = pattern[static_cast<std::size_t>(k)] * u_max;
        if (!inact.empty()) {
            const int ni = static_cast<int>(inact.size());
            Matrix Hii(ni, ni);
            Vector rhs(ni);
            for (int r = 0; r < ni; ++r) {
                rhs(r) = f(inact[static_cast<std::size_t>(r)]);
                for (int c = 0; c < ni; ++c)
                    Hii(r, c) = H(inact[static_cast<std::size_t>(r)],
                                  inact[static_cast<std::size_t>(c)]);
                for (int k : act)
                    rhs(r) += H(inact[static_cast<std::size_t>(r)], k) * u(k);
            }
            const Matrix sol = solve(Hii, (-rhs).eval());
            for (int r = 0; r < ni; ++r)
                u(inact[static_cast<std::size_t>(r)]) = sol(r, 0);
        }

        // Most violated primal bound among inactive nodes.
        int worst = -1;
        double worst_v = tol;
        for (int k : inact) {
            const double v = std::abs(u(k)) - u_max;
            if (v > worst_v) {
                worst_v = v;
                worst = k;
            }
        }
        if (worst >= 0) {
            pattern[static_cast<std::size_t>(worst)] =
                u(worst) > 0.0 ? 1 : -1;
            continue;
        }

        // Most negative multiplier among active nodes.
        const Vector g = H * u + f;
        worst = -1;
        worst_v = -tol;
        for (int k : act) {
            const double lambda =
                -pattern[static_cast<std::size_t>(k)] * g(k);
            if (lambda < worst_v) {
                worst_v = lambda;
                worst = k;
            }
        }
        if (worst >= 0) {
            pattern[static_cast<std::size_t>(worst)] = 0;
            continue;
        }
        return BoxQpResult{std::move(u), std::move(pattern), iter};
    }
    throw OracleError("box_qp_solve: active-set iteration did not converge");
}

}  // namespace mpoc
