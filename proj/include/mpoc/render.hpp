// mpoc — SVG figure generation: box-face views of the continuous-time
// partition and of enumerated discrete-time regions.
#ifndef MPOC_RENDER_HPP
#define MPOC_RENDER_HPP

#include <string>
#include <vector>

#include "mpoc/dt_mpqp.hpp"
#include "mpoc/geometry.hpp"
#include "mpoc/partition.hpp"

namespace mpoc {

/// One rendered face: the SVG document plus the region ids that appear.
struct FaceFigure {
    int face = 0;
    std::string svg;
    std::vector<std::string> region_ids;  ///< sorted distinct ids on the face
};

/// A full figure set: one SVG per box face plus an index page.  Rendering
/// is pure (strings only); writing files is the caller's concern.  File
/// names follow `<tag>_face<k>.svg`.
struct RenderSet {
    std::string tag;
    std::vector<FaceFigure> faces;
    std::string index_html;

    std::string face_filename(int face) const;
};

/// Color the box faces by classify() on a grid of cell centers (default
/// 200x200), polygonized into merged rectangles; hyperplane cross sections
/// are drawn as black segments.  3-D boxes yield six faces, 2-D one face,
/// 1-D a single strip.
RenderSet render_ct(const CtPartition& p, const Box& box, int grid = 200,
                    const std::string& tag = "ct");

/// Color the box faces by point-in-region tests against enumerated DT
/// regions (first match in sorted order); annotated with the region count.
RenderSet render_dt(const std::vector<DtRegion>& regions, const Box& box,
                    int grid = 200, const std::string& tag = "dt");

}  // namespace mpoc

#endif  // MPOC_RENDER_HPP
