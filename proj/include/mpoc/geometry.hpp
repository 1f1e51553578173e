// mpoc — small 3-D polytope utilities: halfspace intersection by vertex
// enumeration, convex volume, and hyperplane/box-face cross sections.
#ifndef MPOC_GEOMETRY_HPP
#define MPOC_GEOMETRY_HPP

#include <vector>

#include "mpoc/partition.hpp"

namespace mpoc {

/// Closed halfspace `normal . x <= offset` in R^3.
struct Halfspace3 {
    Eigen::Vector3d normal;
    double offset = 0.0;
};

/// Convex polytope as a halfspace list plus derived vertex list.  Callers
/// must include bounding halfspaces (e.g. the parameter box) so the
/// intersection is bounded.
struct Polytope3 {
    std::vector<Halfspace3> halfspaces;
    std::vector<Eigen::Vector3d> vertices;
};

/// Halfspace form of an axis-aligned 3-D box.
std::vector<Halfspace3> box_halfspaces(const Box& box);

/// All feasible triple-plane intersection points, deduplicated (pairwise
/// distance > 1e-8) and sorted lexicographically.  An empty result means an
/// empty or lower-dimensional intersection.  At most 64 halfspaces.
std::vector<Eigen::Vector3d> vertices_of(
    const std::vector<Halfspace3>& halfspaces);

/// Convenience constructor computing the vertex list.
Polytope3 make_polytope(std::vector<Halfspace3> halfspaces);

/// Convex volume by facet fan decomposition into tetrahedra anchored at the
/// vertex centroid.  Fewer than 4 non-coplanar vertices give volume 0.
double volume(const Polytope3& p);

/// Closed segment in R^3.
struct Segment3 {
    Eigen::Vector3d a;
    Eigen::Vector3d b;
};

/// Intersection of a hyperplane with one box face: empty, one segment, or a
/// degenerate (coplanar) overlap of the whole face.
struct FaceSection {
    std::vector<Segment3> segments;
    bool degenerate = false;
};

/// Face index convention: face = 2*axis + (1 on the upper side, 0 on the
/// lower), axis in {0,1,2}; requires a 3-D box.
FaceSection face_section(const Hyperplane& h, const Box& box, int face);

}  // namespace mpoc

#endif  // MPOC_GEOMETRY_HPP
