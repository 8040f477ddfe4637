// Subcommand driver behind the command-line tool: resolves a scenario, runs
// forward | adjoint | gradcheck | optimize | verify, writes CSV artifacts
// plus a deterministic `manifest` file, and maps errors to exit codes.
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "deadoil/config.hpp"

namespace deadoil {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitVerification = 4;

// Command-line flag overrides applied on top of the parsed config.
struct RunOverrides {
    std::optional<std::string> out_dir;
    std::optional<int> stride;
    std::optional<uint64_t> seed;
};

// Returns the process exit status. Diagnostics and warnings go to diag.
// The manifest records the resolved config and FNV-1a checksums of every
// artifact; it contains no timestamps and not the output path itself, so
// reruns of one config are byte-identical wherever they land.
int run_scenario(const std::string& config_path, const std::string& subcommand,
                 const RunOverrides& overrides, std::ostream& diag);

}  // namespace deadoil
