// mpoc — run configuration: JSON ingestion, validation, and the config
// hash embedded in every output artifact.
#ifndef MPOC_CONFIG_HPP
#define MPOC_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mpoc/model.hpp"

namespace mpoc {

/// Everything a command run needs, resolved from one JSON document.
struct RunConfig {
    LtiSystem system;

    // switching block
    int switching_samples = 2000;
    int switching_degree = 3;
    unsigned long long seed = 1;

    // dt block
    std::vector<int> dt_horizons = {5, 10};

    // partition block (light sweeps run by cmd_partition)
    int partition_grid = 7;
    int partition_samples_per_region = 60;

    // verify block (heavy sweeps run by cmd_verify)
    int verify_grid = 21;
    int verify_samples_per_region = 200;

    // output
    std::string output_dir = "out";

    // tolerances block
    double tol_multiplier = 1.0;

    // source identity (embedded into every artifact)
    std::string source_name;  ///< config path (or synthetic name)
    std::string raw_bytes;    ///< exact file content, as hashed
    std::string hash;         ///< "fnv1a:<16 hex digits>" of raw_bytes
};

/// FNV-1a 64-bit hash of a byte string.
std::uint64_t fnv1a64(const std::string& bytes);

/// "fnv1a:" + 16 lowercase hex digits.
std::string hash_label(std::uint64_t h);

/// Parse a JSON config document.  Structural or value problems raise
/// ValidationError with the offending key in the message.
RunConfig parse_config(const std::string& text, const std::string& name);

/// Read and parse a config file; missing file raises ValidationError.
RunConfig load_config(const std::string& path);

}  // namespace mpoc

#endif  // MPOC_CONFIG_HPP
