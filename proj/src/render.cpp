#include "mpoc/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

namespace mpoc {

namespace {

const char* kPalette[32] = {
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948",
    "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac", "#1f77b4", "#aec7e8",
    "#ff7f0e", "#ffbb78", "#2ca02c", "#98df8a", "#d62728", "#ff9896",
    "#9467bd", "#c5b0d5", "#8c564b", "#c49c94", "#e377c2", "#f7b6d2",
    "#7f7f7f", "#c7c7c7", "#bcbd22", "#dbdb8d", "#17becf", "#9edae5",
    "#393b79", "#637939"};

constexpr double kPlotX = 60.0, kPlotY = 20.0;
constexpr double kPlotW = 600.0, kPlotH = 600.0;
constexpr double kSvgW = 840.0, kSvgH = 680.0;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string fmt4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

/// Clip the line nu*u + nv*v = rhs to a rectangle; at most one segment.
bool clip_line_to_rect(double nu, double nv, double rhs, double lo_u,
                       double hi_u, double lo_v, double hi_v,
                       double out[4]) {
    const double den = nu * nu + nv * nv;
    if (den <= 1e-24) return false;
    const double p0u = nu * rhs / den;
    const double p0v = nv * rhs / den;
    const double du = -nv, dv = nu;
    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = std::numeric_limits<double>::infinity();
    auto clip = [&](double p0, double d, double lo, double hi) -> bool {
        if (std::abs(d) <= 1e-15 * (1.0 + std::abs(p0)))
            return p0 >= lo - 1e-12 && p0 <= hi + 1e-12;
        double ta = (lo - p0) / d, tb = (hi - p0) / d;
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        return true;
    };
    if (!clip(p0u, du, lo_u, hi_u)) return false;
    if (!clip(p0v, dv, lo_v, hi_v)) return false;
    if (!(t1 - t0 > 1e-12)) return false;
    out[0] = p0u + t0 * du;
    out[1] = p0v + t0 * dv;
    out[2] = p0u + t1 * du;
    out[3] = p0v + t1 * dv;
    return true;
}

struct FaceContext {
    int axis = 2;          // fixed axis (3-D), -1 for lower dims
    bool upper_side = false;
    double c = 0.0;        // fixed-axis value
    int ua = 0, va = 1;    // in-plane axes
    double lo_u = 0, hi_u = 1, lo_v = 0, hi_v = 1;
    bool dummy_v = false;  // 1-D strip: v axis is synthetic
};

FaceContext face_context(const Box& box, int face) {
    FaceContext fc;
    if (box.dim() == 3) {
        fc.axis = face / 2;
        fc.upper_side = (face % 2) == 1;
        fc.c = fc.upper_side ? box.upper(fc.axis) : box.lower(fc.axis);
        fc.ua = (fc.axis + 1) % 3;
        fc.va = (fc.axis + 2) % 3;
        fc.lo_u = box.lower(fc.ua);
        fc.hi_u = box.upper(fc.ua);
        fc.lo_v = box.lower(fc.va);
        fc.hi_v = box.upper(fc.va);
    } else if (box.dim() == 2) {
        fc.axis = -1;
        fc.ua = 0;
        fc.va = 1;
        fc.lo_u = box.lower(0);
        fc.hi_u = box.upper(0);
        fc.lo_v = box.lower(1);
        fc.hi_v = box.upper(1);
    } else {
        fc.axis = -1;
        fc.ua = 0;
        fc.va = -1;
        fc.lo_u = box.lower(0);
        fc.hi_u = box.upper(0);
        fc.lo_v = 0.0;
        fc.hi_v = 1.0;
        fc.dummy_v = true;
    }
    return fc;
}

Vector face_point(const FaceContext& fc, const Box& box, double u, double v) {
    Vector x(box.dim());
    if (box.dim() == 3) {
        x(fc.axis) = fc.c;
        x(fc.ua) = u;
        x(fc.va) = v;
    } else if (box.dim() == 2) {
        x(0) = u;
        x(1) = v;
    } else {
        x(0) = u;
    }
    return x;
}

double map_u(const FaceContext& fc, double u) {
    return kPlotX + (u - fc.lo_u) / (fc.hi_u - fc.lo_u) * kPlotW;
}
double map_v(const FaceContext& fc, double v) {
    return kPlotY + kPlotH - (v - fc.lo_v) / (fc.hi_v - fc.lo_v) * kPlotH;
}

struct Rect {
    int i0, i1;  // cell-edge column range [i0, i1)
    int j0, j1;  // cell-edge row range [j0, j1)
    int cls;
};

/// Merge equal-class cells into rectangles: maximal runs per row, then
/// vertical merging of identical runs in consecutive rows.
std::vector<Rect> merge_cells(const std::vector<std::vector<int>>& cls,
                              int grid) {
    std::vector<Rect> done;
    std::vector<Rect> active;  // open rectangles from the previous row
    for (int j = 0; j < grid; ++j) {
        std::vector<Rect> runs;
        int i = 0;
        while (i < grid) {
            int k = i;
            while (k < grid &&
                   cls[static_cast<std::size_t>(j)][static_cast<std::size_t>(
                       k)] ==
                       cls[static_cast<std::size_t>(j)]
                          [static_cast<std::size_t>(i)])
                ++k;
            runs.push_back(Rect{
                i, k, j, j + 1,
                cls[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]});
            i = k;
        }
        std::vector<Rect> next_active;
        for (Rect& run : runs) {
            bool merged = false;
            for (Rect& a : active) {
                if (a.i0 == run.i0 && a.i1 == run.i1 && a.cls == run.cls &&
                    a.j1 == run.j0) {
                    a.j1 = run.j1;
                    next_active.push_back(a);
                    a.j0 = -1;  // consumed
                    merged = true;
                    break;
                }
            }
            if (!merged) next_active.push_back(run);
        }
        for (const Rect& a : active)
            if (a.j0 >= 0) done.push_back(a);
        active = std::move(next_active);
    }
    for (const Rect& a : active) done.push_back(a);
    return done;
}

std::string color_class(int cls, std::ostringstream& defs,
                        std::vector<bool>& hatch_defined) {
    if (cls < 0) return "#ffffff";
    const char* base = kPalette[cls % 32];
    if (cls < 32) return base;
    // Past the palette: hatch overlay patterns distinguish repeats.
    const int slot = cls % 32;
    if (!hatch_defined[static_cast<std::size_t>(slot)]) {
        defs << "<pattern id=\"hatch" << slot
             << "\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\" "
                "patternTransform=\"rotate(45)\"><rect width=\"6\" "
                "height=\"6\" fill=\""
             << base
             << "\"/><line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" "
                "stroke=\"#000000\" stroke-width=\"1\"/></pattern>";
        hatch_defined[static_cast<std::size_t>(slot)] = true;
    }
    std::ostringstream ref;
    ref << "url(#hatch" << slot << ")";
    return ref.str();
}

std::string render_face(
    const FaceContext& fc, const Box& box, int grid,
    const std::string& title, const std::string& annotation,
    const std::vector<std::string>& catalog,
    const std::function<int(const Vector&)>& classify_point,
    const std::vector<std::pair<double, double>>& segment_endpoints,
    std::vector<std::string>* ids_seen) {
    std::vector<std::vector<int>> cls(
        static_cast<std::size_t>(grid),
        std::vector<int>(static_cast<std::size_t>(grid), -1));
    std::vector<bool> seen(catalog.size(), false);
    for (int j = 0; j < grid; ++j) {
        const double v =
            fc.lo_v + (j + 0.5) * (fc.hi_v - fc.lo_v) / grid;
        for (int i = 0; i < grid; ++i) {
            const double u =
                fc.lo_u + (i + 0.5) * (fc.hi_u - fc.lo_u) / grid;
            const int c = classify_point(face_point(fc, box, u, v));
            cls[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = c;
            if (c >= 0) seen[static_cast<std::size_t>(c)] = true;
        }
    }

    std::ostringstream defs;
    std::vector<bool> hatch_defined(32, false);
    std::ostringstream body;

    for (const Rect& r : merge_cells(cls, grid)) {
        const double u0 = fc.lo_u + r.i0 * (fc.hi_u - fc.lo_u) / grid;
        const double u1 = fc.lo_u + r.i1 * (fc.hi_u - fc.lo_u) / grid;
        const double v0 = fc.lo_v + r.j0 * (fc.hi_v - fc.lo_v) / grid;
        const double v1 = fc.lo_v + r.j1 * (fc.hi_v - fc.lo_v) / grid;
        const std::string fill = color_class(r.cls, defs, hatch_defined);
        body << "<rect x=\"" << fmt(map_u(fc, u0)) << "\" y=\""
             << fmt(map_v(fc, v1)) << "\" width=\""
             << fmt(map_u(fc, u1) - map_u(fc, u0)) << "\" height=\""
             << fmt(map_v(fc, v0) - map_v(fc, v1)) << "\" fill=\"" << fill
             << "\"/>";
        body << "\n";
    }

    for (std::size_t s = 0; s + 1 < segment_endpoints.size(); s += 2) {
        body << "<line x1=\"" << fmt(map_u(fc, segment_endpoints[s].first))
             << "\" y1=\"" << fmt(map_v(fc, segment_endpoints[s].second))
             << "\" x2=\"" << fmt(map_u(fc, segment_endpoints[s + 1].first))
             << "\" y2=\"" << fmt(map_v(fc, segment_endpoints[s + 1].second))
             << "\" stroke=\"#000000\" stroke-width=\"2\"/>\n";
    }

    // Frame, title, axis labels.
    body << "<rect x=\"" << fmt(kPlotX) << "\" y=\"" << fmt(kPlotY)
         << "\" width=\"" << fmt(kPlotW) << "\" height=\"" << fmt(kPlotH)
         << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    body << "<text x=\"" << fmt(kPlotX) << "\" y=\"" << fmt(kSvgH - 14.0)
         << "\" font-family=\"monospace\" font-size=\"14\">" << title;
    if (!annotation.empty()) body << " | " << annotation;
    body << "</text>\n";
    body << "<text x=\"" << fmt(kPlotX + kPlotW / 2) << "\" y=\""
         << fmt(kPlotY + kPlotH + 34.0)
         << "\" font-family=\"monospace\" font-size=\"13\" "
            "text-anchor=\"middle\">x"
         << (fc.ua + 1) << "</text>\n";
    if (!fc.dummy_v)
        body << "<text x=\"" << fmt(kPlotX - 36.0) << "\" y=\""
             << fmt(kPlotY + kPlotH / 2)
             << "\" font-family=\"monospace\" font-size=\"13\" "
                "text-anchor=\"middle\" transform=\"rotate(-90 "
             << fmt(kPlotX - 36.0) << " " << fmt(kPlotY + kPlotH / 2)
             << ")\">x" << (fc.va + 1) << "</text>\n";
    // Axis extent ticks.
    body << "<text x=\"" << fmt(kPlotX) << "\" y=\""
         << fmt(kPlotY + kPlotH + 16.0)
         << "\" font-family=\"monospace\" font-size=\"11\">" << fmt4(fc.lo_u)
         << "</text>\n";
    body << "<text x=\"" << fmt(kPlotX + kPlotW) << "\" y=\""
         << fmt(kPlotY + kPlotH + 16.0)
         << "\" font-family=\"monospace\" font-size=\"11\" "
            "text-anchor=\"end\">"
         << fmt4(fc.hi_u) << "</text>\n";

    // Legend (only when it fits comfortably).
    std::vector<std::string> present;
    for (std::size_t c = 0; c < catalog.size(); ++c)
        if (seen[c]) present.push_back(catalog[c]);
    if (present.size() <= 24) {
        double ly = kPlotY + 8.0;
        for (std::size_t c = 0; c < catalog.size(); ++c) {
            if (!seen[c]) continue;
            const std::string fill =
                color_class(static_cast<int>(c), defs, hatch_defined);
            body << "<rect x=\"" << fmt(kPlotX + kPlotW + 16.0) << "\" y=\""
                 << fmt(ly - 10.0)
                 << "\" width=\"14\" height=\"14\" fill=\"" << fill
                 << "\" stroke=\"#000000\" stroke-width=\"0.5\"/>";
            body << "<text x=\"" << fmt(kPlotX + kPlotW + 36.0) << "\" y=\""
                 << fmt(ly + 2.0)
                 << "\" font-family=\"monospace\" font-size=\"12\">"
                 << catalog[c] << "</text>\n";
            ly += 22.0;
        }
    }

    if (ids_seen) *ids_seen = present;

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
           "width=\""
        << fmt(kSvgW) << "\" height=\"" << fmt(kSvgH) << "\" viewBox=\"0 0 "
        << fmt(kSvgW) << " " << fmt(kSvgH) << "\">\n";
    const std::string defs_str = defs.str();
    if (!defs_str.empty()) svg << "<defs>" << defs_str << "</defs>\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n"
        << "<g shape-rendering=\"crispEdges\">\n"
        << body.str() << "</g>\n</svg>\n";
    return svg.str();
}

std::string build_index(const RenderSet& set, const std::string& heading) {
    std::ostringstream html;
    html << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"/><title>"
         << heading << "</title></head>\n<body>\n<h1>" << heading
         << "</h1>\n<ul>\n";
    for (const FaceFigure& f : set.faces) {
        html << "<li><a href=\"" << set.face_filename(f.face) << "\">"
             << set.face_filename(f.face) << "</a> — regions:";
        for (const std::string& id : f.region_ids) html << " " << id;
        html << "</li>\n";
    }
    html << "</ul>\n";
    for (const FaceFigure& f : set.faces)
        html << "<img src=\"" << set.face_filename(f.face)
             << "\" width=\"420\"/>\n";
    html << "</body></html>\n";
    return html.str();
}

std::string face_title(const FaceContext& fc, const Box& box, int face) {
    std::ostringstream t;
    if (box.dim() == 3)
        t << "face " << face << ": x" << (fc.axis + 1) << " = " << fmt4(fc.c);
    else
        t << "parameter box";
    return t.str();
}

}  // namespace

std::string RenderSet::face_filename(int face) const {
    std::ostringstream name;
    name << tag << "_face" << face << ".svg";
    return name.str();
}

RenderSet render_ct(const CtPartition& p, const Box& box, int grid,
                    const std::string& tag) {
    if (grid < 1) throw DomainError("render_ct: grid must be >= 1");
    const int n_faces = box.dim() == 3 ? 6 : 1;

    std::vector<std::string> catalog;
    for (const RegionSpec& r : p.regions) catalog.push_back(r.id);
    std::sort(catalog.begin(), catalog.end());

    RenderSet set;
    set.tag = tag;
    for (int face = 0; face < n_faces; ++face) {
        const FaceContext fc = face_context(box, face);
        auto classify_point = [&](const Vector& x) -> int {
            const Classification c = classify(p, x);
            const auto it =
                std::lower_bound(catalog.begin(), catalog.end(), c.region_id);
            return static_cast<int>(it - catalog.begin());
        };
        // Hyperplane cross sections with this face.
        std::vector<std::pair<double, double>> endpoints;
        for (const Hyperplane& h : p.hyperplanes) {
            if (box.dim() == 3) {
                const FaceSection fs = face_section(h, box, face);
                for (const Segment3& s : fs.segments) {
                    endpoints.emplace_back(s.a(fc.ua), s.a(fc.va));
                    endpoints.emplace_back(s.b(fc.ua), s.b(fc.va));
                }
            } else if (box.dim() == 2) {
                double seg[4];
                if (clip_line_to_rect(h.normal(0), h.normal(1), h.offset,
                                      fc.lo_u, fc.hi_u, fc.lo_v, fc.hi_v,
                                      seg)) {
                    endpoints.emplace_back(seg[0], seg[1]);
                    endpoints.emplace_back(seg[2], seg[3]);
                }
            } else {
                const double root = h.offset / h.normal(0);
                if (root >= fc.lo_u && root <= fc.hi_u) {
                    endpoints.emplace_back(root, fc.lo_v);
                    endpoints.emplace_back(root, fc.hi_v);
                }
            }
        }
        FaceFigure fig;
        fig.face = face;
        fig.svg = render_face(fc, box, grid, face_title(fc, box, face),
                              "", catalog, classify_point, endpoints,
                              &fig.region_ids);
        set.faces.push_back(std::move(fig));
    }
    set.index_html = build_index(set, tag + " partition faces");
    return set;
}

RenderSet render_dt(const std::vector<DtRegion>& regions, const Box& box,
                    int grid, const std::string& tag) {
    if (grid < 1) throw DomainError("render_dt: grid must be >= 1");
    const int n_faces = box.dim() == 3 ? 6 : 1;

    std::vector<std::string> catalog;
    for (std::size_t i = 0; i < regions.size(); ++i) {
        std::ostringstream id;
        id << "R" << (i < 9 ? "0" : "") << (i + 1);
        catalog.push_back(id.str());
    }

    std::ostringstream note;
    note << regions.size() << " regions";

    RenderSet set;
    set.tag = tag;
    for (int face = 0; face < n_faces; ++face) {
        const FaceContext fc = face_context(box, face);
        auto classify_point = [&](const Vector& x) -> int {
            for (std::size_t i = 0; i < regions.size(); ++i) {
                bool inside = true;
                for (const HalfspaceN& h : regions[i].halfspaces) {
                    if (h.normal.dot(x) > h.offset + 1e-9) {
                        inside = false;
                        break;
                    }
                }
                if (inside) return static_cast<int>(i);
            }
            return -1;
        };
        FaceFigure fig;
        fig.face = face;
        fig.svg = render_face(fc, box, grid, face_title(fc, box, face),
                              note.str(), catalog, classify_point, {},
                              &fig.region_ids);
        set.faces.push_back(std::move(fig));
    }
    set.index_html = build_index(set, tag + " regions (" + note.str() + ")");
    return set;
}

}  // namespace mpoc
