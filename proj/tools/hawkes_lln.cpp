// hawkes-lln <subcommand> --scenario <path> [--out <dir>] [--seed <u64>] [--threads <n>]

#include "hawkes/runner.hpp"
#include "hawkes/scenario.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <thread>

namespace {

unsigned default_threads() {
    if (const char* env = std::getenv("HAWKES_LLN_THREADS")) {
        char* end = nullptr;
        const unsigned long n = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
        std::cerr << "ignoring invalid HAWKES_LLN_THREADS='" << env << "'\n";
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void print_error(const std::string& subcommand, const std::string& kind, const std::vector<std::string>& messages) {
    nlohmann::json j{{"subcommand", subcommand}, {"status", "error"}, {"error", kind}, {"messages", messages}};
    std::cout << j.dump() << std::endl;
    for (const auto& m : messages) std::cerr << kind << ": " << m << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Marked Hawkes process simulation, resolvents and law-of-large-numbers checks"};
    app.require_subcommand(1, 1);

    std::string scenario_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    unsigned threads = 0;

    for (const auto& name : hawkes::subcommand_names()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
        sub->add_option("--out", out_dir, "Output directory (overrides the scenario)");
        sub->add_option("--seed", seed, "Master seed (overrides the scenario)");
        sub->add_option("--threads", threads, "Worker threads (default: HAWKES_LLN_THREADS or all cores)")
            ->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return hawkes::kExitError;
    }

    const auto* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    const auto subcommand = *hawkes::parse_subcommand(name);

    hawkes::ScenarioConfig config;
    try {
        config = hawkes::parse_scenario(scenario_path, subcommand);
    } catch (const hawkes::ScenarioError& e) {
        print_error(name, std::string(hawkes::error_kind_name(e.kind())), e.messages());
        return hawkes::kExitError;
    }

    hawkes::RunOptions options;
    if (chosen->count("--out")) options.out_dir = out_dir;
    if (chosen->count("--seed")) options.seed = seed;
    options.threads = chosen->count("--threads") ? threads : default_threads();

    const auto result = hawkes::run(subcommand, config, options);
    std::cout << result.summary.dump() << std::endl;
    if (result.exit_code == hawkes::kExitError) std::cerr << result.summary.value("error", "") << '\n';
    return result.exit_code;
}
