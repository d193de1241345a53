#pragma once

#include <string>
#include <vector>

namespace strauss {

inline constexpr const char* kToolVersion = "0.1.0";

/// Command-line front end. Exit codes: 0 success, 2 usage error, 3 numerical
/// failure (diagnostic on stderr, partial table written when available),
/// 4 I/O error.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args); ///< args without argv[0]

} // namespace strauss
