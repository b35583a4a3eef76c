#pragma once

#include <string>
#include <vector>

namespace vlc::cli {

/// Runs the command line tool. Returns the process exit code:
/// 0 success, 2 I/O, parse, or usage errors, 3 validation errors.
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

extern const char* const kVersion;

}  // namespace vlc::cli
