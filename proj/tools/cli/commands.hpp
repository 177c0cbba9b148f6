#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace irtcat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// A flag value that cannot be interpreted (exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs the `irtcat` command line; `args` excludes the program name.
/// Returns the process exit code. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace irtcat::cli
