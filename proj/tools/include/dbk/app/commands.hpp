#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dbk/app/config.hpp"

namespace dbk::app {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kCertificateFailed = 1, kHypothesisFailed = 2 };

/// Each command prints a summary to `out`, writes its CSV files into
/// cfg.out when that is set, and returns an exit code. Library errors
/// propagate; run_command maps them.
int cmd_verify_koszul(const RunConfig& cfg, std::ostream& out);
int cmd_corona(const RunConfig& cfg, std::ostream& out);
int cmd_approximate(const RunConfig& cfg, std::ostream& out);
int cmd_toeplitz(const RunConfig& cfg, std::ostream& out);
int cmd_density(const RunConfig& cfg, std::ostream& out);

const std::vector<std::string>& command_names();

/// Dispatches by name. HypothesisError and DomainMismatch exit with 2,
/// CertificateError with 1; the failing certificate is printed to `err`
/// as "error: <certificate>: <detail>".
int run_command(const std::string& name, const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Keeps freed grid-sized buffers in the process heap instead of returning
/// them to the kernel, which otherwise dominates the cost of the identity
/// suite on large grids. No-op outside glibc.
void tune_allocator();

}  // namespace dbk::app
