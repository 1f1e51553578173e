#include "mpoc/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mpoc/dt_mpqp.hpp"
#include "mpoc/render.hpp"
#include "mpoc/simulate.hpp"
#include "mpoc/switchfit.hpp"
#include "mpoc/tolerances.hpp"

namespace mpoc {

namespace {

std::string f4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::string e4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4e", v);
    return buf;
}

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file(const std::string& dir, const std::string& name,
                const std::string& content) {
    std::filesystem::create_directories(dir);
    const std::string path = dir + "/" + name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw Error("write failed for " + path);
}

std::string md_header(const std::string& title, const RunConfig& cfg) {
    std::ostringstream os;
    os << "<!-- config-hash " << cfg.hash << " -->\n"
       << "# " << title << "\n\n"
       << "- config: `" << cfg.source_name << "` (" << cfg.hash << ")\n"
       << "- tolerance multiplier: " << f4(cfg.tol_multiplier) << "\n\n";
    return os.str();
}

std::string tolerance_section(double mult) {
    const Tolerances t = Tolerances{}.scaled(mult);
    std::ostringstream os;
    os << "## Effective tolerances\n\n"
       << "| name | value |\n|---|---|\n"
       << "| terminal_defect_pure | " << e4(t.terminal_defect_pure) << " |\n"
       << "| terminal_defect_composite | "
       << e4(t.terminal_defect_composite) << " |\n"
       << "| junction_residual | " << e4(t.junction_residual) << " |\n"
       << "| clip_consistency | " << e4(t.clip_consistency) << " |\n"
       << "| boundary_band | " << e4(t.boundary_band) << " |\n"
       << "| bisection_residual | " << e4(t.bisection_residual) << " |\n"
       << "| volume_floor | " << e4(t.volume_floor) << " |\n"
       << "| geometry_feasibility | " << e4(t.geometry_feasibility) << " |\n"
       << "| vertex_dedup | " << e4(t.vertex_dedup) << " |\n"
       << "| rcond_floor (unscaled) | " << e4(t.rcond_floor) << " |\n\n";
    return os.str();
}

/// "l1: +0.2084 x1 +0.8613 x2 +0.2650 x3 = -0.4000"
std::string hyperplane_line(const Hyperplane& h) {
    std::ostringstream os;
    os << h.label << ":";
    for (Eigen::Index i = 0; i < h.normal.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), " %+.4f x%d", h.normal(i),
                      static_cast<int>(i + 1));
        os << buf;
    }
    os << " = " << f4(h.offset);
    return os.str();
}

char sign_char(int s) { return s > 0 ? '+' : (s < 0 ? '-' : '.'); }

int sign_of_char(char c) {
    switch (c) {
        case '+':
            return 1;
        case '-':
            return -1;
        case '.':
            return 0;
        default:
            throw ValidationError(
                std::string("partition export: bad sign token '") + c + "'");
    }
}

std::string endpoint_report_md(const RunConfig& cfg, const EndpointReport& ep,
                               int requested) {
    std::ostringstream os;
    os << md_header("Endpoint-condition report", cfg);
    os << "Requested samples per region: " << requested << "\n\n";
    os << "| region | samples | min mu (incl. junction) | min mu (interior) "
          "| argmin violations | worst argmin error [s] | negative-mu "
          "samples | max gbar (free) | gbar violations | construction "
          "failures |\n";
    os << "|---|---|---|---|---|---|---|---|---|---|\n";
    for (const RegionEndpointStats& st : ep.regions) {
        os << "| " << st.region_id << " | " << st.samples << " | "
           << e4(st.min_mu_including_junction) << " | "
           << e4(st.min_mu_excluding_junction) << " | "
           << st.argmin_violations << " | " << e4(st.worst_argmin_time_error)
           << " | " << st.negative_mu_samples << " | "
           << (std::isfinite(st.max_gbar) ? e4(st.max_gbar)
                                          : std::string("n/a"))
           << " | " << st.gbar_violations << " | " << st.construction_failures
           << " |\n";
    }
    os << "\nFine-grid argmin mismatches (10x refinement cross-check): "
       << ep.fine_grid_mismatches << "\n\n";
    os << "Convention: the transitional argmin target is t = 0 and the "
          "full-bound target is t = t_f; a violation means the measured "
          "closed-arc argmin sits more than one integration step away. The "
          "interior minimum excludes the junction node, where the "
          "multiplier vanishes identically.\n\n";
    os << tolerance_section(cfg.tol_multiplier);
    return os.str();
}

std::string single_switch_md(const RunConfig& cfg,
                             const SingleSwitchReport& ss, int grid_k) {
    std::ostringstream os;
    os << md_header("Single-switch sweep", cfg);
    os << "- grid: " << grid_k << " nodes per axis (" << ss.grid_points
       << " points)\n"
       << "- simulated: " << ss.simulated << "\n"
       << "- trajectories with more than one band crossing: "
       << ss.multi_crossing << "\n"
       << "- maximum crossings observed: " << ss.max_crossings << "\n\n";
    if (!ss.offenders.empty()) {
        os << "Sample offenders (up to 32):\n\n";
        for (const Vector& x : ss.offenders) {
            os << "- (";
            for (Eigen::Index i = 0; i < x.size(); ++i)
                os << (i ? ", " : "") << g17(x(i));
            os << ")\n";
        }
        os << "\n";
    }
    os << tolerance_section(cfg.tol_multiplier);
    return os.str();
}

}  // namespace

std::string format_partition_export(const CtPartition& p,
                                    const std::string& hash) {
    std::ostringstream os;
    os << "mpoc-partition 1\n";
    os << "config-hash " << hash << "\n";
    os << "dim " << p.theta.dim() << "\n";
    os << "theta-lower";
    for (int i = 0; i < p.theta.dim(); ++i) os << " " << g17(p.theta.lower(i));
    os << "\ntheta-upper";
    for (int i = 0; i < p.theta.dim(); ++i) os << " " << g17(p.theta.upper(i));
    os << "\n";
    for (const Hyperplane& h : p.hyperplanes) {
        os << "hyperplane " << h.label << " normal";
        for (Eigen::Index i = 0; i < h.normal.size(); ++i)
            os << " " << g17(h.normal(i));
        os << " offset " << g17(h.offset) << "\n";
    }
    for (const RegionSpec& r : p.regions) {
        os << "region " << r.id << " arc " << to_string(r.arc) << " signs";
        for (const int s : r.signs) os << " " << sign_char(s);
        os << " empty " << (r.empty_in_theta ? 1 : 0);
        if (!r.empty_in_theta && r.probe_point.size() == p.theta.dim()) {
            os << " probe";
            for (Eigen::Index i = 0; i < r.probe_point.size(); ++i)
                os << " " << g17(r.probe_point(i));
        }
        os << "\n";
    }
    os << "note " << p.convention_note << "\n";
    return os.str();
}

CtPartition parse_partition_export(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    CtPartition p;
    int dim = -1;
    bool magic_seen = false;

    auto need_dim = [&]() {
        if (dim < 1)
            throw ValidationError(
                "partition export: dim line must precede vector data");
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "mpoc-partition") {
            int version = 0;
            ls >> version;
            if (version != 1)
                throw ValidationError(
                    "partition export: unsupported version");
            magic_seen = true;
        } else if (key == "config-hash") {
            std::string ignored;
            ls >> ignored;
        } else if (key == "dim") {
            ls >> dim;
            if (dim < 1)
                throw ValidationError("partition export: bad dim");
            p.theta.lower = Vector::Zero(dim);
            p.theta.upper = Vector::Zero(dim);
        } else if (key == "theta-lower" || key == "theta-upper") {
            need_dim();
            Vector& v =
                key == "theta-lower" ? p.theta.lower : p.theta.upper;
            for (int i = 0; i < dim; ++i)
                if (!(ls >> v(i)))
                    throw ValidationError(
                        "partition export: short theta line");
        } else if (key == "hyperplane") {
            need_dim();
            Hyperplane h;
            std::string tag;
            ls >> h.label >> tag;
            if (tag != "normal")
                throw ValidationError(
                    "partition export: malformed hyperplane line");
            h.normal = Vector::Zero(dim);
            for (int i = 0; i < dim; ++i)
                if (!(ls >> h.normal(i)))
                    throw ValidationError(
                        "partition export: short hyperplane normal");
            ls >> tag;
            if (tag != "offset" || !(ls >> h.offset))
                throw ValidationError(
                    "partition export: malformed hyperplane offset");
            p.hyperplanes.push_back(std::move(h));
        } else if (key == "region") {
            need_dim();
            RegionSpec r;
            std::string tag, arc_token;
            ls >> r.id >> tag;
            if (tag != "arc" || !(ls >> arc_token))
                throw ValidationError(
                    "partition export: malformed region line");
            r.arc = arc_from_string(arc_token);
            ls >> tag;
            if (tag != "signs")
                throw ValidationError(
                    "partition export: malformed region signs");
            for (std::size_t j = 0; j < 4; ++j) {
                std::string s;
                if (!(ls >> s) || s.size() != 1)
                    throw ValidationError(
                        "partition export: short region signs");
                r.signs[j] = sign_of_char(s[0]);
            }
            ls >> tag;
            int empty_flag = 0;
            if (tag != "empty" || !(ls >> empty_flag))
                throw ValidationError(
                    "partition export: malformed region empty flag");
            r.empty_in_theta = empty_flag != 0;
            if (ls >> tag) {
                if (tag != "probe")
                    throw ValidationError(
                        "partition export: unexpected region trailer");
                r.probe_point = Vector::Zero(dim);
                for (int i = 0; i < dim; ++i)
                    if (!(ls >> r.probe_point(i)))
                        throw ValidationError(
                            "partition export: short region probe");
            }
            p.regions.push_back(std::move(r));
        } else if (key == "note") {
            std::string rest;
            std::getline(ls, rest);
            if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
            p.convention_note = rest;
        } else {
            throw ValidationError("partition export: unknown line key '" +
                                  key + "'");
        }
    }
    if (!magic_seen)
        throw ValidationError("partition export: missing magic line");
    if (p.hyperplanes.size() != 4 || p.regions.size() != 5)
        throw ValidationError(
            "partition export: expected 4 hyperplanes and 5 regions");
    return p;
}

int cmd_partition(const RunConfig& cfg) {
    const LtiSystem& sys = cfg.system;
    const CtPartition p = compute_partition(sys, cfg.tol_multiplier);

    std::cout << "partition of theta (" << cfg.hash << ")\n";
    for (const Hyperplane& h : p.hyperplanes)
        std::cout << "  " << hyperplane_line(h) << "\n";
    std::cout << "regions:\n";
    for (const RegionSpec& r : p.regions) {
        std::cout << "  " << r.id << "  " << to_string(r.arc) << "  signs ";
        for (const int s : r.signs) std::cout << sign_char(s);
        std::cout << (r.empty_in_theta ? "  (empty in theta)" : "") << "\n";
    }

    const SingleSwitchReport ss = verify_single_switch(
        sys, cfg.partition_grid, 2000, cfg.tol_multiplier);
    const EndpointReport ep = verify_endpoint_condition(
        sys, p, cfg.partition_samples_per_region, cfg.seed, 2000,
        cfg.tol_multiplier);

    write_file(cfg.output_dir, "partition.txt",
               format_partition_export(p, cfg.hash));
    write_file(cfg.output_dir, "single_switch.md",
               single_switch_md(cfg, ss, cfg.partition_grid));
    write_file(cfg.output_dir, "endpoint_report.md",
               endpoint_report_md(cfg, ep, cfg.partition_samples_per_region));

    std::ostringstream report;
    report << md_header("Partition run report", cfg);
    report << "## Hyperplanes\n\n```\n";
    for (const Hyperplane& h : p.hyperplanes)
        report << hyperplane_line(h) << "\n";
    report << "```\n\n## Regions\n\n| id | arc | signs | empty |\n"
           << "|---|---|---|---|\n";
    for (const RegionSpec& r : p.regions) {
        report << "| " << r.id << " | " << to_string(r.arc) << " | ";
        for (const int s : r.signs) report << sign_char(s);
        report << " | " << (r.empty_in_theta ? "yes" : "no") << " |\n";
    }
    report << "\n- single-switch sweep: " << ss.multi_crossing << " of "
           << ss.simulated
           << " simulated grid trajectories crossed the band more than "
              "once (max "
           << ss.max_crossings << ")\n"
           << "- convention: " << p.convention_note << "\n\n";
    report << tolerance_section(cfg.tol_multiplier);
    write_file(cfg.output_dir, "partition_report.md", report.str());

    std::cout << "single-switch: " << ss.multi_crossing << "/" << ss.simulated
              << " multi-crossing trajectories\n"
              << "wrote partition.txt, single_switch.md, endpoint_report.md, "
                 "partition_report.md in "
              << cfg.output_dir << "\n";
    return 0;
}

int cmd_switchfit(const RunConfig& cfg) {
    const LtiSystem& sys = cfg.system;
    const CtPartition p = compute_partition(sys, cfg.tol_multiplier);

    std::ostringstream report;
    report << md_header("Switching-time fit report", cfg);
    report << "| region | samples | R^2 | t_s min [s] | t_s max [s] |\n"
           << "|---|---|---|---|---|\n";

    std::cout << "switching-time fits (" << cfg.hash << ")\n";
    std::cout << "region   samples  R^2      t_s min  t_s max\n";
    bool any = false;
    for (const RegionSpec& r : p.regions) {
        if (!is_transitional(r.arc) || r.empty_in_theta) continue;
        any = true;
        const SwitchTimeFit fit =
            fit_region(sys, p, r.id, cfg.switching_samples,
                       cfg.switching_degree, cfg.seed, cfg.tol_multiplier);

        std::ostringstream txt;
        txt << "# config-hash " << cfg.hash << "\n";
        txt << "# region " << fit.region_id << " degree "
            << cfg.switching_degree << " samples " << fit.sample_count
            << "\n";
        txt << "# r_squared " << g17(fit.r_squared) << "\n";
        txt << "# t_s_range " << g17(fit.t_s_min) << " " << g17(fit.t_s_max)
            << "\n";
        for (std::size_t m = 0; m < fit.monomials.size(); ++m) {
            txt << "coeff";
            for (const int e : fit.monomials[m]) txt << " " << e;
            txt << " " << g17(fit.coefficients(static_cast<Eigen::Index>(m)))
                << "\n";
        }
        write_file(cfg.output_dir, "switchfit_" + r.id + ".txt", txt.str());

        std::ostringstream csv;
        csv << "# config-hash " << cfg.hash << "\n";
        for (int i = 0; i < sys.n(); ++i) csv << "x0_" << (i + 1) << ",";
        csv << "t_s\n";
        for (std::size_t s = 0; s < fit.sample_points.size(); ++s) {
            for (Eigen::Index i = 0; i < fit.sample_points[s].size(); ++i)
                csv << g17(fit.sample_points[s](i)) << ",";
            csv << g17(fit.sample_values[s]) << "\n";
        }
        write_file(cfg.output_dir, "switchfit_" + r.id + "_samples.csv",
                   csv.str());

        report << "| " << r.id << " | " << fit.sample_count << " | "
               << f4(fit.r_squared) << " | " << f4(fit.t_s_min) << " | "
               << f4(fit.t_s_max) << " |\n";
        std::printf("%-8s %7d  %.4f   %.4f   %.4f\n", r.id.c_str(),
                    fit.sample_count, fit.r_squared, fit.t_s_min,
                    fit.t_s_max);
    }
    if (!any)
        std::cout << "no transitional regions intersect theta; nothing to "
                     "fit\n";
    report << "\n" << tolerance_section(cfg.tol_multiplier);
    write_file(cfg.output_dir, "switchfit_report.md", report.str());
    return 0;
}

int cmd_dtcompare(const RunConfig& cfg) {
    const LtiSystem& sys = cfg.system;
    const CtPartition p = compute_partition(sys, cfg.tol_multiplier);
    int ct_count = 0;
    for (const RegionSpec& r : p.regions)
        if (!r.empty_in_theta) ++ct_count;

    std::ostringstream report;
    report << md_header("Discrete-time comparison report", cfg);
    report << "Continuous-time region count: " << ct_count << "\n\n";
    report << "| horizon nodes N | regions | patterns tested | singular "
              "skipped | infeasible | low-dimensional |\n"
           << "|---|---|---|---|---|---|\n";

    std::cout << "region-count comparison (" << cfg.hash << ")\n"
              << "  CT: " << ct_count << "\n";

    std::ostringstream gains_section;
    for (const int N : cfg.dt_horizons) {
        const DtProblem dt = discretize(sys, N);
        const Condensed qp = condense(dt);
        EnumerationLog log;
        const std::vector<DtRegion> regions =
            enumerate_regions(dt, qp, sys.theta, &log);

        report << "| " << N << " | " << regions.size() << " | "
               << log.patterns_tested << " | " << log.singular_skipped
               << " | " << log.infeasible << " | " << log.low_dimensional
               << " |\n";
        std::cout << "  DT N=" << N << ": " << regions.size() << "\n";

        std::ostringstream txt;
        txt << "# config-hash " << cfg.hash << "\n";
        txt << "# N " << N << " regions " << regions.size() << "\n";
        for (std::size_t i = 0; i < regions.size(); ++i) {
            const DtRegion& r = regions[i];
            txt << "region " << (i + 1) << " pattern";
            for (const int s : r.pattern) txt << " " << sign_char(s);
            txt << " volume " << g17(r.volume) << "\n";
            for (int k = 0; k < N; ++k) {
                txt << "  u" << k << " gain";
                for (int c = 0; c < sys.n(); ++c)
                    txt << " " << g17(r.K(k, c));
                txt << " offset " << g17(r.offset(k)) << "\n";
            }
            for (const HalfspaceN& h : r.halfspaces) {
                txt << "  halfspace";
                for (Eigen::Index c = 0; c < h.normal.size(); ++c)
                    txt << " " << g17(h.normal(c));
                txt << " <= " << g17(h.offset) << "\n";
            }
        }
        std::ostringstream base;
        base << "dt_regions_N" << N;
        write_file(cfg.output_dir, base.str() + ".txt", txt.str());

        const DtRegion& largest = largest_region_law(regions);
        std::ostringstream csv;
        csv << "# config-hash " << cfg.hash << "\n";
        csv << "k";
        for (int c = 0; c < sys.n(); ++c) csv << ",K_" << (c + 1);
        csv << ",offset\n";
        for (int k = 0; k < N; ++k) {
            csv << k;
            for (int c = 0; c < sys.n(); ++c)
                csv << "," << g17(largest.K(k, c));
            csv << "," << g17(largest.offset(k)) << "\n";
        }
        std::ostringstream gains_name;
        gains_name << "dt_gains_N" << N << ".csv";
        write_file(cfg.output_dir, gains_name.str(), csv.str());

        gains_section << "### Largest region at N = " << N << " (volume "
                      << f4(largest.volume) << ", pattern ";
        for (const int s : largest.pattern) gains_section << sign_char(s);
        gains_section << ")\n\n| k |";
        for (int c = 0; c < sys.n(); ++c) gains_section << " K_" << (c + 1)
                                                        << " |";
        gains_section << " offset |\n|---|";
        for (int c = 0; c < sys.n(); ++c) gains_section << "---|";
        gains_section << "---|\n";
        for (int k = 0; k < N; ++k) {
            gains_section << "| " << k << " |";
            for (int c = 0; c < sys.n(); ++c)
                gains_section << " " << f4(largest.K(k, c)) << " |";
            gains_section << " " << f4(largest.offset(k)) << " |\n";
        }
        gains_section << "\n";

        std::ostringstream tag;
        tag << "dt_N" << N;
        const RenderSet figs =
            render_dt(regions, sys.theta, 200, tag.str());
        for (const FaceFigure& f : figs.faces) {
            std::string svg = f.svg;
            const std::size_t pos = svg.find('\n');
            svg.insert(pos == std::string::npos ? svg.size() : pos + 1,
                       "<!-- config-hash " + cfg.hash + " -->\n");
            write_file(cfg.output_dir, figs.face_filename(f.face), svg);
        }
        write_file(cfg.output_dir, tag.str() + "_index.html",
                   "<!-- config-hash " + cfg.hash + " -->\n" +
                       figs.index_html);
    }

    report << "\n" << gains_section.str();
    report << tolerance_section(cfg.tol_multiplier);
    write_file(cfg.output_dir, "dtcompare_report.md", report.str());
    return 0;
}

int cmd_render(const RunConfig& cfg, const std::string& partition_path) {
    CtPartition p;
    if (partition_path.empty()) {
        p = compute_partition(cfg.system, cfg.tol_multiplier);
    } else {
        std::ifstream in(partition_path, std::ios::binary);
        if (!in)
            throw ValidationError("cannot open partition export " +
                                  partition_path);
        std::ostringstream buf;
        buf << in.rdbuf();
        p = parse_partition_export(buf.str());
    }

    const RenderSet figs = render_ct(p, p.theta, 200, "ct");
    for (const FaceFigure& f : figs.faces) {
        std::string svg = f.svg;
        const std::size_t pos = svg.find('\n');
        svg.insert(pos == std::string::npos ? svg.size() : pos + 1,
                   "<!-- config-hash " + cfg.hash + " -->\n");
        write_file(cfg.output_dir, figs.face_filename(f.face), svg);
    }
    write_file(cfg.output_dir, "ct_index.html",
               "<!-- config-hash " + cfg.hash + " -->\n" + figs.index_html);

    std::ostringstream report;
    report << md_header("Render report", cfg);
    report << "| face | regions shown |\n|---|---|\n";
    for (const FaceFigure& f : figs.faces) {
        report << "| " << figs.face_filename(f.face) << " |";
        for (const std::string& id : f.region_ids) report << " " << id;
        report << " |\n";
    }
    report << "\n" << tolerance_section(cfg.tol_multiplier);
    write_file(cfg.output_dir, "render_report.md", report.str());

    std::cout << "wrote " << figs.faces.size() << " face figures and "
              << "ct_index.html in " << cfg.output_dir << "\n";
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    const LtiSystem& sys = cfg.system;
    const CtPartition p = compute_partition(sys, cfg.tol_multiplier);

    const AgreementReport ag = verify_oracle_agreement(
        sys, p, cfg.verify_grid, 2000, cfg.tol_multiplier);
    const SingleSwitchReport ss = verify_single_switch(
        sys, cfg.verify_grid, 2000, cfg.tol_multiplier);
    const EndpointReport ep = verify_endpoint_condition(
        sys, p, cfg.verify_samples_per_region, cfg.seed, 2000,
        cfg.tol_multiplier);

    const FreeGain fg = free_gain(sys, sys.t_f);
    const Matrix K_shoot = shooting_gain_oracle(sys, sys.t_f);
    const double kf_rel =
        (fg.K_f - K_shoot).norm() / std::max(1e-300, fg.K_f.norm());

    auto status = [](bool ok) { return ok ? "ok  " : "FAIL"; };
    std::cout << "verification suite (" << cfg.hash << ")\n";
    std::cout << "  [" << status(ag.disagreements == 0)
              << "] oracle agreement: " << ag.agreements << "/" << ag.compared
              << " (" << f4(100.0 * ag.agreement_ratio) << "%), "
              << ag.disagreements_off_band << " disagreements off-band\n";
    std::cout << "  [" << status(ss.multi_crossing == 0)
              << "] single-switch: " << ss.multi_crossing << "/"
              << ss.simulated << " multi-crossing (max " << ss.max_crossings
              << ")\n";
    int argmin_viol = 0, neg_mu = 0, gbar_viol = 0;
    for (const RegionEndpointStats& st : ep.regions) {
        argmin_viol += st.argmin_violations;
        neg_mu += st.negative_mu_samples;
        gbar_viol += st.gbar_violations;
    }
    std::cout << "  [" << status(argmin_viol == 0)
              << "] endpoint argmin: " << argmin_viol << " violations\n";
    std::cout << "  [" << status(neg_mu == 0)
              << "] multiplier positivity: " << neg_mu
              << " samples with interior dips\n";
    std::cout << "  [" << status(gbar_viol == 0)
              << "] free-arc bound clearance: " << gbar_viol
              << " violations\n";
    std::cout << "  [" << status(kf_rel <= 1e-6 * cfg.tol_multiplier)
              << "] gain cross-check (analytic vs shooting): rel "
              << e4(kf_rel) << "\n";

    std::ostringstream report;
    report << md_header("Verification report", cfg);
    report << "## Oracle agreement (grid " << cfg.verify_grid << ")\n\n"
           << "- compared: " << ag.compared << " (boundary skipped "
           << ag.boundary_skipped << ")\n"
           << "- agreements: " << ag.agreements << " ("
           << f4(100.0 * ag.agreement_ratio) << "%)\n"
           << "- disagreements: " << ag.disagreements << ", off-band: "
           << ag.disagreements_off_band << "\n\n";
    if (!ag.mismatch_samples.empty()) {
        report << "Disagreeing samples (up to 32):\n\n";
        for (const Vector& x : ag.mismatch_samples) {
            report << "- (";
            for (Eigen::Index i = 0; i < x.size(); ++i)
                report << (i ? ", " : "") << g17(x(i));
            report << ")\n";
        }
        report << "\n";
    }
    report << "## Single-switch sweep\n\n"
           << "- simulated: " << ss.simulated << ", multi-crossing: "
           << ss.multi_crossing << ", max crossings: " << ss.max_crossings
           << "\n\n";
    report << "## Endpoint condition\n\n"
           << "(see endpoint_report.md for the per-region table)\n\n"
           << "- argmin violations: " << argmin_viol
           << "\n- negative interior multiplier samples: " << neg_mu
           << "\n- free-arc bound violations: " << gbar_viol << "\n\n";
    report << "## Gain cross-check\n\n- relative Frobenius gap (analytic vs "
              "shooting): "
           << e4(kf_rel) << "\n\n";
    report << tolerance_section(cfg.tol_multiplier);
    write_file(cfg.output_dir, "verify_report.md", report.str());
    write_file(cfg.output_dir, "endpoint_report.md",
               endpoint_report_md(cfg, ep, cfg.verify_samples_per_region));
    write_file(cfg.output_dir, "single_switch.md",
               single_switch_md(cfg, ss, cfg.verify_grid));
    return 0;
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{
        "mpoc — critical-region analysis of input-bounded LQ optimal "
        "control"};
    app.require_subcommand(1);

    std::string config_path, out_dir, partition_path;
    double tol = 1.0;
    long long seed = -1;
    int grid = -1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file")
            ->required();
        sub->add_option("--out", out_dir,
                        "output directory (overrides config)");
        sub->add_option("--tol", tol, "tolerance multiplier (default 1)");
        sub->add_option("--seed", seed, "sampling seed (overrides config)");
        sub->add_option("--grid", grid,
                        "verification grid nodes per axis (overrides "
                        "config)");
    };
    CLI::App* sub_partition = app.add_subcommand(
        "partition", "compute hyperplanes, regions, and verification "
                     "reports");
    add_common(sub_partition);
    CLI::App* sub_switchfit = app.add_subcommand(
        "switchfit", "fit switching-time polynomials per transitional "
                     "region");
    add_common(sub_switchfit);
    CLI::App* sub_dtcompare = app.add_subcommand(
        "dtcompare", "enumerate discrete-time regions and compare counts");
    add_common(sub_dtcompare);
    CLI::App* sub_render =
        app.add_subcommand("render", "emit face figures of the partition");
    add_common(sub_render);
    sub_render->add_option("--partition", partition_path,
                           "render a previously exported partition.txt");
    CLI::App* sub_verify =
        app.add_subcommand("verify", "run the full oracle suite");
    add_common(sub_verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        RunConfig cfg = load_config(config_path);
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        cfg.tol_multiplier *= tol;
        if (!(cfg.tol_multiplier > 0.0))
            throw ValidationError("--tol must be > 0");
        if (seed >= 0) cfg.seed = static_cast<unsigned long long>(seed);
        if (grid > 0) {
            cfg.partition_grid = grid;
            cfg.verify_grid = grid;
        }
        if (sub_partition->parsed()) return cmd_partition(cfg);
        if (sub_switchfit->parsed()) return cmd_switchfit(cfg);
        if (sub_dtcompare->parsed()) return cmd_dtcompare(cfg);
        if (sub_render->parsed()) return cmd_render(cfg, partition_path);
        if (sub_verify->parsed()) return cmd_verify(cfg);
        throw Error("no subcommand dispatched");
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace mpoc
