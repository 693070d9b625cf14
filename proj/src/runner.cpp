#include "hawkes/runner.hpp"

#include "hawkes/errors.hpp"
#include "hawkes/format.hpp"
#include "hawkes/lln.hpp"
#include "hawkes/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <system_error>

namespace hawkes {

using nlohmann::json;

namespace {

struct Staged {
    std::vector<std::pair<std::string, std::string>> files;
    json result = json::object();
    bool passed = true;
};

bool wants(const ScenarioConfig& c, std::string_view format) {
    return std::find(c.output.formats.begin(), c.output.formats.end(), format) != c.output.formats.end();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Resolvent horizon: explicit, else the kernel default, stretched to cover
// `cover` and rounded up to whole steps.
double resolvent_horizon(const KernelSpec& spec, const NumericsConfig& n, double cover) {
    double h = n.horizon ? *n.horizon : default_horizon(spec, n.horizon_multiplier);
    h = std::max(h, cover);
    return std::ceil(h / n.dt - 1e-9) * n.dt;
}

ResolventResult config_resolvent(const KernelSpec& spec, const NumericsConfig& n, double cover = 0.0) {
    const auto method = n.method == "direct" ? ResolventMethod::direct : ResolventMethod::neumann;
    return kernel_resolvent(spec, n.dt, resolvent_horizon(spec, n, cover), n.tol, method);
}

HarnessOptions harness_options(const ScenarioConfig& c, std::uint64_t seed, unsigned threads) {
    HarnessOptions o;
    o.T_grid = c.experiment.T_grid;
    o.replications = c.experiment.replications;
    o.seed = seed;
    o.threads = threads;
    o.mean_tolerance = c.experiment.mean_tolerance;
    o.epsilon = c.experiment.epsilon;
    o.max_exceedance = c.experiment.max_exceedance;
    o.min_sign_fraction = c.experiment.min_sign_fraction;
    o.simulation.event_cap = c.experiment.event_cap;
    return o;
}

void stage_simulate(const ScenarioConfig& c, const KernelSpec& spec, std::uint64_t seed, Staged& out) {
    SimulationOptions so;
    so.event_cap = c.experiment.event_cap;
    const double horizon = *c.experiment.horizon;
    EventStream stream = simulate_path(spec, horizon, StreamKey{seed, 0}, so);

    if (wants(c, "csv")) out.files.emplace_back("events.csv", stream.to_csv(spec.marks()));
    if (wants(c, "binary") && spec.marks().is_discrete()) out.files.emplace_back("events.bin", stream.to_binary());
    out.result = {{"events", stream.size()},
                  {"horizon", horizon},
                  {"branching_ratio", spec.branching_ratio()},
                  {"rng", std::string(RngStream::algorithm)}};
    if (wants(c, "json")) out.files.emplace_back("simulate.json", dump(out.result));
}

void stage_resolvent(const ScenarioConfig& c, const KernelSpec& spec, Staged& out) {
    const ResolventResult R = config_resolvent(spec, c.numerics);
    const auto fm = first_moment_R(R);
    out.result = {{"l1_norm", R.l1_norm_truncated},
                  {"tail_bound", R.l1_tail_bound},
                  {"analytic_l1", resolvent_l1_exact(spec.branching_ratio())},
                  {"first_moment", fm.value},
                  {"first_moment_bound", fm.bound},
                  {"neumann_terms", R.neumann_terms_used},
                  {"branching_ratio", spec.branching_ratio()},
                  {"method", c.numerics.method},
                  {"dt", R.R.dt()},
                  {"horizon", R.R.horizon()}};
    if (wants(c, "csv")) out.files.emplace_back("resolvent.csv", R.R.to_csv());
    if (wants(c, "json")) out.files.emplace_back("resolvent.json", dump(out.result));
}

void stage_moments(const ScenarioConfig& c, const KernelSpec& spec, Staged& out) {
    std::vector<double> times = c.experiment.query_times;
    if (times.empty()) times = {1.0, 5.0, 10.0};
    std::sort(times.begin(), times.end());
    const ResolventResult R = config_resolvent(spec, c.numerics, times.back());
    const double qA = spec.marks().probability(build_target_set(c.experiment.target_set, spec.marks()));

    std::string csv = "t,expected_intensity,expected_count\n";
    json rows = json::array();
    for (double t : times) {
        const double el = expected_intensity(spec.base_rate(), R, t);
        const double en = expected_count(spec.base_rate(), qA, R, t);
        csv += format_double(t) + ',' + format_double(el) + ',' + format_double(en) + '\n';
        rows.push_back({{"t", t}, {"expected_intensity", el}, {"expected_count", en}});
    }
    out.result = {{"qA", qA}, {"resolvent_l1", R.l1_norm_truncated}, {"rows", rows}};
    if (wants(c, "csv")) out.files.emplace_back("moments.csv", csv);
    if (wants(c, "json")) out.files.emplace_back("moments.json", dump(out.result));
}

void stage_lln(Subcommand sub, const ScenarioConfig& c, const KernelSpec& spec, std::uint64_t seed,
               unsigned threads, Staged& out) {
    const auto opts = harness_options(c, seed, threads);
    const auto& marks = spec.marks();
    json reports = json::array();
    for (std::size_t i = 0; i < c.experiment.v.size(); ++i) {
        const double v = c.experiment.v[i];
        ConvergenceReport report;
        switch (sub) {
            case Subcommand::lln_count:
                report = verify_count_lln(spec, build_target_set(c.experiment.target_set, marks), v, opts);
                break;
            case Subcommand::lln_compound:
                report = verify_compound_lln(spec, build_target_set(c.experiment.target_set, marks),
                                             build_claim_law(c.experiment.claims.fallback), v, opts);
                break;
            case Subcommand::lln_dphi:
                report = verify_dphi_lln(spec, build_mark_function(c.experiment.phi, marks), v, opts);
                break;
            default:
                report = verify_ruin_lln(spec, c.experiment.premium, c.experiment.initial_capital,
                                         build_claim_laws(c.experiment.claims, marks), v, opts);
                break;
        }
        out.passed = out.passed && report.passed();
        const std::string stem = std::string(subcommand_name(sub)) + "_v" + std::to_string(i);
        if (wants(c, "csv")) out.files.emplace_back(stem + ".csv", report_to_csv(report));
        if (wants(c, "json")) out.files.emplace_back(stem + ".json", dump(report_to_json(report)));
        if (wants(c, "svg") && report.rows.size() >= 2) out.files.emplace_back(stem + ".svg", render_svg(report));
        reports.push_back({{"v", v}, {"limit", report.limit}, {"passed", report.passed()}});
    }
    out.result = {{"reports", reports}};
}

void stage_netprofit(const ScenarioConfig& c, const KernelSpec& spec, Staged& out) {
    const auto claims = mark_claims(spec, build_claim_laws(c.experiment.claims, spec.marks()));
    double mean_claim = 0.0;
    for (const auto& k : claims) mean_claim += k.mean * k.prob;
    // E H(X_1) equals the branching ratio.
    const double eh = spec.branching_ratio();
    const auto np = net_profit_condition(c.experiment.premium, spec.base_rate(), mean_claim, eh);
    const double resolvent_form = mean_claim * spec.base_rate() * (resolvent_l1_exact(eh) + 1.0);
    out.result = {{"premium", c.experiment.premium},
                  {"mean_claim", mean_claim},
                  {"mean_total_excitation", eh},
                  {"threshold", np.threshold},
                  {"threshold_resolvent_form", resolvent_form},
                  {"holds", np.holds},
                  {"drift", ruin_drift(c.experiment.premium, spec.base_rate(), resolvent_l1_exact(eh), claims)}};
    if (wants(c, "json")) out.files.emplace_back("netprofit.json", dump(out.result));
}

// Commits staged files; on failure removes what this run already wrote.
void commit(const std::filesystem::path& dir, const Staged& staged, const RunOptions& options,
            std::vector<std::string>& written) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    try {
        for (std::size_t i = 0; i < staged.files.size(); ++i) {
            const auto& [name, content] = staged.files[i];
            const WriteFault fault = options.fault_at && *options.fault_at == i ? options.fault : WriteFault::none;
            write_file_atomic(dir / name, content, fault);
            written.push_back(name);
        }
    } catch (...) {
        std::error_code ec;
        for (const auto& name : written) fs::remove(dir / name, ec);
        written.clear();
        throw;
    }
}

}  // namespace

std::string config_digest(const ScenarioConfig& config) { return fnv1a_hex(serialize_scenario(config)); }

RunResult run(Subcommand subcommand, const ScenarioConfig& input, const RunOptions& options) {
    ScenarioConfig config = input;
    if (options.seed) config.rng.seed = *options.seed;
    if (options.out_dir) config.output.directory = options.out_dir->string();

    RunResult result;
    result.summary = {{"subcommand", std::string(subcommand_name(subcommand))},
                      {"seed", config.rng.seed},
                      {"config_digest", config_digest(config)}};
    try {
        const KernelSpec spec = build_kernel(config.kernel);
        const unsigned threads = std::max(1u, options.threads);
        Staged staged;
        switch (subcommand) {
            case Subcommand::simulate: stage_simulate(config, spec, config.rng.seed, staged); break;
            case Subcommand::resolvent: stage_resolvent(config, spec, staged); break;
            case Subcommand::moments: stage_moments(config, spec, staged); break;
            case Subcommand::netprofit: stage_netprofit(config, spec, staged); break;
            default: stage_lln(subcommand, config, spec, config.rng.seed, threads, staged); break;
        }
        commit(config.output.directory, staged, options, result.outputs);
        result.exit_code = staged.passed ? kExitPass : kExitCheckFailed;
        result.summary["status"] = staged.passed ? "pass" : "fail";
        result.summary["result"] = staged.result;
    } catch (const std::exception& e) {
        result.exit_code = kExitError;
        result.summary["status"] = "error";
        result.summary["error"] = e.what();
    }
    result.summary["outputs"] = result.outputs;
    return result;
}

}  // namespace hawkes
