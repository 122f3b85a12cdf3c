#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace laip::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;

/// Entry point for the `laip` tool. `args` excludes the program name.
/// Diagnostics go to `err`; results that are not written to files go to `out`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace laip::cli
