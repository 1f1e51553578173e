#include "mpoc/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mpoc {

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_label(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string hex(16, '0');
    for (int i = 15; i >= 0; --i) {
        hex[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return "fnv1a:" + hex;
}

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& name, const std::string& what) {
    throw ValidationError("config " + name + ": " + what);
}

double to_num(const json& j, const std::string& name, const char* key) {
    if (!j.is_number()) bad(name, std::string(key) + " must be a number");
    return j.get<double>();
}

int to_count(const json& j, const std::string& name, const char* key,
             int min_value) {
    if (!j.is_number_integer())
        bad(name, std::string(key) + " must be an integer");
    const long long v = j.get<long long>();
    if (v < min_value)
        bad(name, std::string(key) + " must be >= " +
                      std::to_string(min_value));
    return static_cast<int>(v);
}

Vector to_vector(const json& j, const std::string& name, const char* key) {
    if (!j.is_array() || j.empty())
        bad(name, std::string(key) + " must be a nonempty array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = to_num(j[i], name, key);
    return v;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& name) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        bad(name, std::string("not valid JSON (") + e.what() + ")");
    }
    if (!doc.is_object()) bad(name, "top level must be an object");
    if (!doc.contains("system") || !doc["system"].is_object())
        bad(name, "missing \"system\" block");

    RunConfig cfg;
    cfg.source_name = name;
    cfg.raw_bytes = text;
    cfg.hash = hash_label(fnv1a64(text));

    const json& sys = doc["system"];
    if (!sys.contains("A") || !sys["A"].is_array() || sys["A"].empty())
        bad(name, "system.A must be an array of rows");
    const std::size_t n = sys["A"].size();
    cfg.system.A = Matrix(static_cast<Eigen::Index>(n),
                          static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
        if (!sys["A"][r].is_array() || sys["A"][r].size() != n)
            bad(name, "system.A rows must all have length " +
                          std::to_string(n));
        for (std::size_t c = 0; c < n; ++c)
            cfg.system.A(static_cast<Eigen::Index>(r),
                         static_cast<Eigen::Index>(c)) =
                to_num(sys["A"][r][c], name, "system.A");
    }
    if (!sys.contains("B")) bad(name, "missing system.B");
    cfg.system.B = to_vector(sys["B"], name, "system.B");
    if (!sys.contains("t_f")) bad(name, "missing system.t_f");
    cfg.system.t_f = to_num(sys["t_f"], name, "system.t_f");
    if (!sys.contains("u_max")) bad(name, "missing system.u_max");
    cfg.system.u_max = to_num(sys["u_max"], name, "system.u_max");
    if (!sys.contains("theta") || !sys["theta"].is_object() ||
        !sys["theta"].contains("lower") || !sys["theta"].contains("upper"))
        bad(name, "system.theta must carry \"lower\" and \"upper\" arrays");
    cfg.system.theta.lower =
        to_vector(sys["theta"]["lower"], name, "system.theta.lower");
    cfg.system.theta.upper =
        to_vector(sys["theta"]["upper"], name, "system.theta.upper");
    try {
        cfg.system.validate();
    } catch (const ValidationError& e) {
        bad(name, e.what());
    }

    if (doc.contains("switching")) {
        const json& sw = doc["switching"];
        if (!sw.is_object()) bad(name, "switching must be an object");
        if (sw.contains("samples"))
            cfg.switching_samples =
                to_count(sw["samples"], name, "switching.samples", 1);
        if (sw.contains("degree"))
            cfg.switching_degree =
                to_count(sw["degree"], name, "switching.degree", 1);
        if (sw.contains("seed"))
            cfg.seed = static_cast<unsigned long long>(
                to_count(sw["seed"], name, "switching.seed", 0));
    }
    if (doc.contains("dt")) {
        const json& dt = doc["dt"];
        if (!dt.is_object() || !dt.contains("N") || !dt["N"].is_array() ||
            dt["N"].empty())
            bad(name, "dt.N must be a nonempty array of node counts");
        cfg.dt_horizons.clear();
        for (const json& item : dt["N"])
            cfg.dt_horizons.push_back(to_count(item, name, "dt.N", 1));
    }
    if (doc.contains("partition")) {
        const json& pa = doc["partition"];
        if (!pa.is_object()) bad(name, "partition must be an object");
        if (pa.contains("grid"))
            cfg.partition_grid =
                to_count(pa["grid"], name, "partition.grid", 1);
        if (pa.contains("samples_per_region"))
            cfg.partition_samples_per_region = to_count(
                pa["samples_per_region"], name,
                "partition.samples_per_region", 1);
    }
    if (doc.contains("verify")) {
        const json& ve = doc["verify"];
        if (!ve.is_object()) bad(name, "verify must be an object");
        if (ve.contains("grid"))
            cfg.verify_grid = to_count(ve["grid"], name, "verify.grid", 1);
        if (ve.contains("samples_per_region"))
            cfg.verify_samples_per_region =
                to_count(ve["samples_per_region"], name,
                         "verify.samples_per_region", 1);
    }
    if (doc.contains("output_dir")) {
        if (!doc["output_dir"].is_string())
            bad(name, "output_dir must be a string");
        cfg.output_dir = doc["output_dir"].get<std::string>();
    }
    if (doc.contains("tolerances")) {
        const json& to = doc["tolerances"];
        if (!to.is_object()) bad(name, "tolerances must be an object");
        if (to.contains("multiplier")) {
            cfg.tol_multiplier =
                to_num(to["multiplier"], name, "tolerances.multiplier");
            if (!(cfg.tol_multiplier > 0.0))
                bad(name, "tolerances.multiplier must be > 0");
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("config " + path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

}  // namespace mpoc
