#pragma once

// Command-line front end: construct, verify, simulate.
// Exit codes: 0 success, 1 a check failed, 2 usage or I/O error.

#include <iosfwd>
#include <string>
#include <vector>

namespace perfectst {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "a:b:step" (inclusive), "a,b,c" or a single value, in dB.
std::vector<double> parse_snr_list(const std::string& text);

/// Version string plus the git revision the library was built from.
std::string version_digest();

}  // namespace perfectst
