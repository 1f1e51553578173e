#include "mpoc/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace mpoc {

namespace {
constexpr double kFeasTol = 1e-8;
constexpr double kDedupTol = 1e-8;

bool lex_less(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    for (int i = 0; i < 3; ++i) {
        if (a(i) < b(i)) return true;
        if (a(i) > b(i)) return false;
    }
    return false;
}
}  // namespace

std::vector<Halfspace3> box_halfspaces(const Box& box) {
    if (box.dim() != 3)
        throw DimensionError("box_halfspaces: box must be 3-D");
    std::vector<Halfspace3> hs;
    hs.reserve(6);
    for (int axis = 0; axis < 3; ++axis) {
        Halfspace3 lo;
        lo.normal = Eigen::Vector3d::Zero();
        lo.normal(axis) = -1.0;
        lo.offset = -box.lower(axis);
        hs.push_back(lo);
        Halfspace3 hi;
        hi.normal = Eigen::Vector3d::Zero();
        hi.normal(axis) = 1.0;
        hi.offset = box.upper(axis);
        hs.push_back(hi);
    }
    return hs;
}

std::vector<Eigen::Vector3d> vertices_of(
    const std::vector<Halfspace3>& halfspaces) {
    const std::size_t m = halfspaces.size();
    if (m > 64)
        throw DomainError("vertices_of: more than 64 halfspaces");
    std::vector<Eigen::Vector3d> verts;
    for (std::size_t i = 0; i + 2 < m; ++i) {
        for (std::size_t j = i + 1; j + 1 < m; ++j) {
            for (std::size_t k = j + 1; k < m; ++k) {
                Eigen::Matrix3d N;
                N.row(0) = halfspaces[i].normal.transpose();
                N.row(1) = halfspaces[j].normal.transpose();
                N.row(2) = halfspaces[k].normal.transpose();
                const double scale = halfspaces[i].normal.norm() *
                                     halfspaces[j].normal.norm() *
                                     halfspaces[k].normal.norm();
                const double det = N.determinant();
                if (!(std::abs(det) > 1e-12 * (scale + 1e-300))) continue;
                const Eigen::Vector3d b(halfspaces[i].offset,
                                        halfspaces[j].offset,
                                        halfspaces[k].offset);
                const Eigen::Vector3d v = N.partialPivLu().solve(b);
                bool feasible = true;
                for (const Halfspace3& h : halfspaces) {
                    if (h.normal.dot(v) > h.offset + kFeasTol) {
                        feasible = false;
                        break;
                    }
                }
                if (!feasible) continue;
                bool dup = false;
                for (const Eigen::Vector3d& w : verts) {
                    if ((w - v).norm() <= kDedupTol) {
                        dup = true;
                        break;
                    }
                }
                if (!dup) verts.push_back(v);
            }
        }
    }
    std::sort(verts.begin(), verts.end(), lex_less);
    return verts;
}

Polytope3 make_polytope(std::vector<Halfspace3> halfspaces) {
    Polytope3 p;
    p.vertices = vertices_of(halfspaces);
    p.halfspaces = std::move(halfspaces);
    return p;
}

double volume(const Polytope3& p) {
    if (p.vertices.size() < 4) return 0.0;

    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
    for (const auto& v : p.vertices) centroid += v;
    centroid /= static_cast<double>(p.vertices.size());

    // Deduplicate coplanar copies of the same facet plane so each facet is
    // fanned exactly once.
    std::vector<Halfspace3> facets;
    for (const Halfspace3& h : p.halfspaces) {
        const double norm = h.normal.norm();
        if (!(norm > 0.0)) continue;
        const Eigen::Vector3d n = h.normal / norm;
        const double b = h.offset / norm;
        bool dup = false;
        for (const Halfspace3& f : facets) {
            if ((f.normal - n).norm() <= 1e-9 &&
                std::abs(f.offset - b) <= 1e-9) {
                dup = true;
                break;
            }
        }
        if (!dup) facets.push_back(Halfspace3{n, b});
    }

    double vol = 0.0;
    for (const Halfspace3& f : facets) {
        std::vector<Eigen::Vector3d> on_plane;
        for (const auto& v : p.vertices)
            if (std::abs(f.normal.dot(v) - f.offset) <= kFeasTol)
                on_plane.push_back(v);
        if (on_plane.size() < 3) continue;

        Eigen::Vector3d fc = Eigen::Vector3d::Zero();
        for (const auto& v : on_plane) fc += v;
        fc /= static_cast<double>(on_plane.size());

        // Angle-order the facet polygon in an in-plane basis.
        Eigen::Vector3d u = (on_plane.front() - fc);
        if (u.norm() <= kDedupTol) u = Eigen::Vector3d::UnitX();
        u -= f.normal * f.normal.dot(u);
        if (u.norm() <= kDedupTol) {
            u = Eigen::Vector3d::UnitY();
            u -= f.normal * f.normal.dot(u);
        }
        u.normalize();
        const Eigen::Vector3d w = f.normal.cross(u);
        std::sort(on_plane.begin(), on_plane.end(),
                  [&](const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
                      const double ta =
                          std::atan2(w.dot(a - fc), u.dot(a - fc));
                      const double tb =
                          std::atan2(w.dot(b - fc), u.dot(b - fc));
                      return ta < tb;
                  });

        for (std::size_t i = 0; i < on_plane.size(); ++i) {
            const Eigen::Vector3d& a = on_plane[i];
            const Eigen::Vector3d& b = on_plane[(i + 1) % on_plane.size()];
            Eigen::Matrix3d M;
            M.col(0) = a - centroid;
            M.col(1) = b - centroid;
            M.col(2) = fc - centroid;
            vol += std::abs(M.determinant()) / 6.0;
        }
    }
    return vol;
}

FaceSection face_section(const Hyperplane& h, const Box& box, int face) {
    if (box.dim() != 3)
        throw DimensionError("face_section: box must be 3-D");
    if (h.normal.size() != 3)
        throw DimensionError("face_section: hyperplane must be 3-D");
    if (face < 0 || face > 5)
        throw DomainError("face_section: face index must be in 0..5");

    const int axis = face / 2;
    const bool upper_side = (face % 2) == 1;
    const double c = upper_side ? box.upper(axis) : box.lower(axis);
    const int ua = (axis + 1) % 3;
    const int va = (axis + 2) % 3;

    FaceSection out;
    const double nu = h.normal(ua);
    const double nv = h.normal(va);
    const double rhs = h.offset - h.normal(axis) * c;
    const double scale = 1.0 + std::abs(h.offset) + h.normal.norm();

    if (std::abs(nu) <= 1e-12 * scale && std::abs(nv) <= 1e-12 * scale) {
        // Plane parallel to the face: either coplanar or disjoint.
        out.degenerate = std::abs(rhs) <= 1e-12 * scale;
        return out;
    }

    // Line nu*u + nv*v = rhs in face coordinates; clip to the rectangle.
    const double den = nu * nu + nv * nv;
    const double p0u = nu * rhs / den;
    const double p0v = nv * rhs / den;
    const double du = -nv;
    const double dv = nu;

    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = std::numeric_limits<double>::infinity();
    auto clip_axis = [&](double p0, double d, double lo, double hi) -> bool {
        if (std::abs(d) <= 1e-15 * (1.0 + std::abs(p0))) {
            return p0 >= lo - 1e-12 && p0 <= hi + 1e-12;
        }
        double ta = (lo - p0) / d;
        double tb = (hi - p0) / d;
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        return true;
    };
    if (!clip_axis(p0u, du, box.lower(ua), box.upper(ua))) return out;
    if (!clip_axis(p0v, dv, box.lower(va), box.upper(va))) return out;
    if (!(t1 - t0 > 1e-12)) return out;  // missed or touches at one point

    Segment3 seg;
    seg.a(axis) = c;
    seg.a(ua) = p0u + t0 * du;
    seg.a(va) = p0v + t0 * dv;
    seg.b(axis) = c;
    seg.b(ua) = p0u + t1 * du;
    seg.b(va) = p0v + t1 * dv;
    out.segments.push_back(seg);
    return out;
}

}  // namespace mpoc
