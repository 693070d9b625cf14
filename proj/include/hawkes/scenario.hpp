#pragma once

#include "hawkes/model.hpp"
#include "hawkes/simulate.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace hawkes {

enum class Subcommand { simulate, resolvent, moments, lln_count, lln_compound, lln_dphi, ruin, netprofit };

std::string_view subcommand_name(Subcommand s);
std::optional<Subcommand> parse_subcommand(std::string_view name);
const std::vector<std::string>& subcommand_names();

// Scenario files carry this schema version.
inline constexpr int kScenarioSchemaVersion = 1;

// The config structs mirror the JSON document one to one. Only the fields
// relevant to each `type` are read or written.

struct MarkFunctionConfig {
    std::string type = "constant";  // constant | identity | power | exp_decay | table | indicator
    double value = 1.0;
    double exponent = 1.0;
    double rate = 0.0;
    double low = 0.0;
    double high = 0.0;
    std::map<std::string, double> table;

    friend bool operator==(const MarkFunctionConfig&, const MarkFunctionConfig&) = default;
};

struct ExcitationConfig {
    std::string type = "zero";  // zero | exponential | power_law | erlang
    double alpha = 0.0;
    double beta = 1.0;
    double amplitude = 0.0;
    double scale = 1.0;
    double shape = 2.0;
    double rate = 1.0;
    MarkFunctionConfig modulation;

    friend bool operator==(const ExcitationConfig&, const ExcitationConfig&) = default;
};

struct MarkPointConfig {
    std::string label;
    std::optional<double> value;
    double prob = 0.0;

    friend bool operator==(const MarkPointConfig&, const MarkPointConfig&) = default;
};

struct MarksConfig {
    std::string type = "discrete";  // discrete | uniform | exponential
    std::vector<MarkPointConfig> points;
    double low = 0.0;
    double high = 1.0;
    double rate = 1.0;

    friend bool operator==(const MarksConfig&, const MarksConfig&) = default;
};

struct KernelConfig {
    double base_rate = 0.0;
    ExcitationConfig excitation;
    MarksConfig marks;
    bool allow_unstable = false;

    friend bool operator==(const KernelConfig&, const KernelConfig&) = default;
};

struct TargetSetConfig {
    std::string type = "all";  // all | labels | interval
    std::vector<std::string> labels;
    double low = 0.0;
    double high = 0.0;

    friend bool operator==(const TargetSetConfig&, const TargetSetConfig&) = default;
};

struct ClaimLawConfig {
    std::string type = "constant";  // constant | exponential | lognormal
    double value = 0.0;
    double mean = 1.0;
    double mu = 0.0;
    double sigma = 1.0;

    friend bool operator==(const ClaimLawConfig&, const ClaimLawConfig&) = default;
};

struct ClaimsConfig {
    ClaimLawConfig fallback;
    std::map<std::string, ClaimLawConfig> per_mark;

    friend bool operator==(const ClaimsConfig&, const ClaimsConfig&) = default;
};

struct ExperimentConfig {
    std::optional<double> horizon;
    std::vector<double> T_grid;
    std::vector<double> v{1.0};
    std::size_t replications = 200;
    TargetSetConfig target_set;
    ClaimsConfig claims;
    double premium = 0.0;
    double initial_capital = 0.0;
    MarkFunctionConfig phi;
    std::vector<double> query_times;
    std::optional<double> epsilon;
    double mean_tolerance = 0.05;
    double max_exceedance = 0.10;
    double min_sign_fraction = 0.95;
    std::size_t event_cap = kDefaultEventCap;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct NumericsConfig {
    double dt = 1e-3;
    double tol = 1e-8;
    double horizon_multiplier = 40.0;
    std::optional<double> horizon;
    std::string method = "neumann";  // neumann | direct

    friend bool operator==(const NumericsConfig&, const NumericsConfig&) = default;
};

struct RngConfig {
    std::uint64_t seed = 0;

    friend bool operator==(const RngConfig&, const RngConfig&) = default;
};

struct OutputConfig {
    std::string directory = "out";
    std::vector<std::string> formats{"csv", "json", "svg"};  // also: binary

    friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct ScenarioConfig {
    int version = kScenarioSchemaVersion;
    KernelConfig kernel;
    ExperimentConfig experiment;
    NumericsConfig numerics;
    RngConfig rng;
    OutputConfig output;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Raised by parse_scenario. Schema errors list every violation found, not
/// just the first.
class ScenarioError : public std::runtime_error {
public:
    enum class Kind { missing_file, syntax, schema, instability };

    ScenarioError(Kind kind, std::vector<std::string> messages);

    Kind kind() const noexcept { return kind_; }
    const std::vector<std::string>& messages() const noexcept { return messages_; }

private:
    Kind kind_;
    std::vector<std::string> messages_;
};

std::string_view error_kind_name(ScenarioError::Kind kind);

// Reads and validates a scenario file. When `subcommand` is given the
// subcommand-specific requirements are checked too; unstable kernels pass only
// for `simulate` with allow_unstable set.
ScenarioConfig parse_scenario(const std::filesystem::path& path, std::optional<Subcommand> subcommand = std::nullopt);
ScenarioConfig parse_scenario_text(std::string_view text, std::optional<Subcommand> subcommand = std::nullopt);

nlohmann::json scenario_to_json(const ScenarioConfig& config);
std::string serialize_scenario(const ScenarioConfig& config);

// Model objects from a validated config. Kernels are built with
// allow_unstable taken from the config.
KernelSpec build_kernel(const KernelConfig& config);
MarkDistribution build_marks(const MarksConfig& config);
MarkFunction build_mark_function(const MarkFunctionConfig& config, const MarkDistribution& marks);
MarkSet build_target_set(const TargetSetConfig& config, const MarkDistribution& marks);
ClaimLaw build_claim_law(const ClaimLawConfig& config);
ClaimLaws build_claim_laws(const ClaimsConfig& config, const MarkDistribution& marks);

}  // namespace hawkes
