#pragma once

#include "hawkes/report.hpp"
#include "hawkes/scenario.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace hawkes {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitError = 2;

struct RunOptions {
    std::optional<std::filesystem::path> out_dir;  // overrides output.directory
    std::optional<std::uint64_t> seed;             // overrides rng.seed
    unsigned threads = 1;

    // Test hook: the commit of output number `fault_at` fails with `fault`.
    std::optional<std::size_t> fault_at;
    WriteFault fault = WriteFault::before_rename;
};

struct RunResult {
    int exit_code = kExitPass;
    nlohmann::json summary;            // printed as one line on stdout
    std::vector<std::string> outputs;  // file names, relative to the output directory
};

// Runs one subcommand on a validated config. Outputs are rendered in memory
// first and committed one atomic write at a time; if any commit fails the
// files already committed by this run are removed and the exit code is 2.
RunResult run(Subcommand subcommand, const ScenarioConfig& config, const RunOptions& options = {});

// Digest of the serialized config, echoed in the summary.
std::string config_digest(const ScenarioConfig& config);

}  // namespace hawkes
