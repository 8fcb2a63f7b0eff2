#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace extdiff::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitBadFlags = 2;
inline constexpr int kExitBadFile = 3;
inline constexpr int kExitSolver = 4;

/// Each command takes its arguments without the program or subcommand name.
int cmd_diff(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
/// args[0] is "interval" or "ball".
int cmd_closed_form(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cmd_check(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Dispatches on argv[1]: diff, interval, ball, check.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct CheckConfig {
    std::size_t trials = 25;
    std::uint64_t seed = 1;
    std::size_t m = 64;
};

/// Runs the randomized property suite and writes the report; returns true iff all pass.
bool run_checks(const CheckConfig& cfg, std::ostream& out);

}  // namespace extdiff::cli
