#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rtrace::cli {

inline constexpr const char* kToolName = "rtrace";
inline constexpr const char* kVersion = "0.1.0";

/// Runs one command-line invocation (without the program name).
/// Exit status contract: 0 all pass, 1 violations or mismatches found,
/// 2 usage or parse errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rtrace::cli
