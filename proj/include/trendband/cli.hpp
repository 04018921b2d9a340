#ifndef TRENDBAND_CLI_HPP
#define TRENDBAND_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace trendband {

/// Runs one subcommand (estimate | band | simulate | coverage | rate-check |
/// normality) against the given arguments, excluding the program name.
/// Returns 0 on success, 1 on a validation or usage error, 2 on a numeric
/// failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trendband

#endif
