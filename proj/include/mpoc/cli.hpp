// mpoc — command-line front end: subcommand dispatch, report emission, and
// the stable partition export format.
#ifndef MPOC_CLI_HPP
#define MPOC_CLI_HPP

#include <string>

#include "mpoc/config.hpp"
#include "mpoc/partition.hpp"

namespace mpoc {

/// Parse arguments and dispatch one subcommand.  Exit codes: 0 success,
/// 2 validation/usage errors, 3 budget errors, 1 anything else.
int run_cli(int argc, const char* const* argv);

/// Subcommand bodies; `cfg` carries all resolved settings (flag overrides
/// already applied).  Each writes its artifacts under cfg.output_dir and
/// prints a human summary.
int cmd_partition(const RunConfig& cfg);
int cmd_switchfit(const RunConfig& cfg);
int cmd_dtcompare(const RunConfig& cfg);
int cmd_render(const RunConfig& cfg, const std::string& partition_path = "");
int cmd_verify(const RunConfig& cfg);

/// Stable structured-text export of a partition (consumed by cmd_render
/// --partition and by external tools).
std::string format_partition_export(const CtPartition& p,
                                    const std::string& hash);

/// Inverse of format_partition_export; throws ValidationError on malformed
/// documents.
CtPartition parse_partition_export(const std::string& text);

}  // namespace mpoc

#endif  // MPOC_CLI_HPP
