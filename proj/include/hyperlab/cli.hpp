#pragma once

// Batch front end: one subcommand per experiment, JSON reports and CSV tables.

#include <iosfwd>
#include <string>
#include <vector>

namespace hyperlab::cli {

inline constexpr const char* kToolVersion = "1.0.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// args excludes the program name. Reports go to `out` unless --output is
/// given; diagnostics and usage text go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Write `content` to `path` through a temporary file in the same directory
/// and an atomic rename.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace hyperlab::cli
