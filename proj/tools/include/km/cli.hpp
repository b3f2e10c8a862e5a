#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace km {

/// Exit codes of the km tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitUsage = 2;

struct CliEnv {
    /// Value of KM_SEED; overrides --seed when set.
    std::optional<std::string> km_seed;
    /// Test hook passed to the selftest as SelftestOptions::inject_fault.
    std::string inject_fault;
};

/// Runs one invocation; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const CliEnv& env = {});

} // namespace km
