#include "hawkes/lln.hpp"

#include "hawkes/errors.hpp"
#include "hawkes/format.hpp"
#include "hawkes/volterra.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace hawkes {

double resolvent_l1_exact(double branching_ratio) {
    if (!(branching_ratio >= 0.0)) throw std::domain_error("branching ratio must be >= 0");
    if (!(branching_ratio < 1.0))
        throw InstabilityError("branching ratio " + format_double(branching_ratio) + " is not < 1");
    return branching_ratio / (1.0 - branching_ratio);
}

double lln_limit_count(double base_rate, double qA, double resolvent_l1, double v) {
    return v * base_rate * qA * (resolvent_l1 + 1.0);
}

double lln_limit_compound(double base_rate, double qA, double resolvent_l1, double mean_claim, double v) {
    return v * base_rate * qA * (resolvent_l1 + 1.0) * mean_claim;
}

double lln_limit_dphi(double base_rate, double resolvent_l1, double phi_mean, double v) {
    return v * base_rate * phi_mean * (resolvent_l1 + 1.0);
}

double ruin_drift(double premium, double base_rate, double resolvent_l1, std::span<const MarkClaim> marks) {
    double expected_claim = 0.0;
    for (const auto& k : marks) expected_claim += k.mean * k.prob;
    return premium - base_rate * (resolvent_l1 + 1.0) * expected_claim;
}

NetProfitCheck net_profit_condition(double premium, double base_rate, double mean_claim,
                                    double mean_total_excitation) {
    if (!(mean_total_excitation >= 0.0)) throw std::domain_error("E H(X_1) must be >= 0");
    if (!(mean_total_excitation < 1.0))
        throw InstabilityError("net-profit condition undefined: E H(X_1) = " + format_double(mean_total_excitation) +
                               " is not < 1");
    NetProfitCheck out;
    out.threshold = mean_claim * base_rate / (1.0 - mean_total_excitation);
    out.holds = premium > out.threshold;
    return out;
}

double LimitSpec::evaluate(double v) const {
    switch (kind) {
        case LimitKind::count:
            return lln_limit_count(base_rate, qA, resolvent_l1, v);
        case LimitKind::compound:
            return lln_limit_compound(base_rate, qA, resolvent_l1, mean_claim, v);
        case LimitKind::mark_functional:
            return lln_limit_dphi(base_rate, resolvent_l1, phi_mean, v);
        case LimitKind::ruin_drift:
            return v * ruin_drift(premium, base_rate, resolvent_l1, marks);
    }
    return 0.0;
}

bool ConvergenceReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.second; });
}

std::optional<double> ConvergenceReport::diagnostic(const std::string& name) const {
    for (const auto& [k, v] : diagnostics)
        if (k == name) return v;
    return std::nullopt;
}

std::optional<bool> ConvergenceReport::check(const std::string& name) const {
    for (const auto& [k, v] : checks)
        if (k == name) return v;
    return std::nullopt;
}

std::uint64_t replicate_stream(std::size_t t_index, std::size_t rep) {
    return (static_cast<std::uint64_t>(t_index) << 32) | static_cast<std::uint64_t>(rep);
}

bool mse_non_increasing(std::span<const ConvergenceRow> rows) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double slack = 2.0 * std::hypot(rows[i - 1].mse_se, rows[i].mse_se);
        if (rows[i].mse > rows[i - 1].mse + slack) return false;
    }
    return true;
}

std::vector<MarkClaim> mark_claims(const KernelSpec& spec, const ClaimLaws& laws) {
    std::vector<MarkClaim> out;
    const auto& marks = spec.marks();
    if (marks.is_discrete()) {
        for (std::uint32_t k = 0; k < marks.size(); ++k) out.push_back({laws.for_mark(k).mean(), marks.prob(k)});
    } else {
        if (!laws.per_mark.empty()) throw std::invalid_argument("per-mark claim laws need a discrete mark space");
        out.push_back({laws.fallback.mean(), 1.0});
    }
    return out;
}

namespace {

// Runs fn(rep) for rep in [0, n) on up to `threads` workers. Each result lands
// in its own slot, so the output does not depend on scheduling.
std::vector<double> run_replicates(std::size_t n, unsigned threads, const std::function<double(std::size_t)>& fn) {
    std::vector<double> results(n, 0.0);
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) results[i] = fn(i);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    results[i] = fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next.store(n);
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return results;
}

ConvergenceRow summarize(double T, double v, double limit, double epsilon, const std::vector<double>& stats) {
    ConvergenceRow row;
    row.T = T;
    row.v = v;
    row.replications = stats.size();
    const double n = static_cast<double>(stats.size());

    double sum = 0.0, sum_sq_err = 0.0;
    std::size_t exceed = 0, negative = 0;
    for (double s : stats) {
        sum += s;
        const double e = s - limit;
        sum_sq_err += e * e;
        if (std::abs(e) > epsilon) ++exceed;
        if (s < 0.0) ++negative;
    }
    row.mean = sum / n;
    row.mse = sum_sq_err / n;
    row.exceedance = static_cast<double>(exceed) / n;
    row.negative_fraction = static_cast<double>(negative) / n;

    double var = 0.0, var_sq = 0.0;
    for (double s : stats) {
        var += (s - row.mean) * (s - row.mean);
        const double e2 = (s - limit) * (s - limit);
        var_sq += (e2 - row.mse) * (e2 - row.mse);
    }
    row.mean_se = std::sqrt(var / (n - 1.0) / n);
    row.mse_se = std::sqrt(var_sq / (n - 1.0) / n);
    return row;
}

void validate(const KernelSpec& spec, double v, const HarnessOptions& options) {
    if (!spec.is_stable())
        throw InstabilityError("LLN harness needs a stable kernel (branching ratio " +
                               format_double(spec.branching_ratio()) + ")");
    if (!(v >= 0.0 && std::isfinite(v))) throw std::domain_error("v must be finite and >= 0");
    if (options.replications < 2) throw std::invalid_argument("LLN harness needs at least 2 replications");
    if (options.T_grid.empty()) throw std::invalid_argument("LLN harness needs a non-empty T grid");
    for (double T : options.T_grid)
        if (!(T > 0.0 && std::isfinite(T))) throw std::invalid_argument("T grid values must be finite and > 0");
    if (options.epsilon && !(*options.epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
}

double default_epsilon(double limit, const HarnessOptions& options) {
    if (options.epsilon) return *options.epsilon;
    return limit == 0.0 ? 0.05 : 0.05 * std::abs(limit);
}

bool mean_within(double mean, double limit, double tol) {
    const double scale = limit == 0.0 ? 1.0 : std::abs(limit);
    return std::abs(mean - limit) <= tol * scale;
}

// Statistic of one replicate given its stream key and horizon Tv.
using Statistic = std::function<double(StreamKey key, double T, double horizon)>;

ConvergenceReport run_harness(const KernelSpec& spec, double v, double limit, const HarnessOptions& options,
                              const Statistic& statistic) {
    std::vector<double> grid = options.T_grid;
    std::sort(grid.begin(), grid.end());

    ConvergenceReport report;
    report.v = v;
    report.limit = limit;
    report.epsilon = default_epsilon(limit, options);
    report.seed = options.seed;
    report.spec_digest = fnv1a_hex(spec.describe());
    for (std::size_t ti = 0; ti < grid.size(); ++ti) {
        const double T = grid[ti];
        auto stats = run_replicates(options.replications, options.threads, [&](std::size_t rep) {
            return statistic(StreamKey{options.seed, replicate_stream(ti, rep)}, T, T * v);
        });
        report.rows.push_back(summarize(T, v, limit, report.epsilon, stats));
    }
    report.mse_non_increasing = mse_non_increasing(report.rows);
    report.diagnostics.emplace_back("branching_ratio", spec.branching_ratio());
    report.diagnostics.emplace_back("resolvent_l1", resolvent_l1_exact(spec.branching_ratio()));
    return report;
}

EventStream path_for(const KernelSpec& spec, StreamKey key, double horizon, const HarnessOptions& options) {
    if (horizon <= 0.0) return EventStream({}, 0.0);
    return simulate_path(spec, horizon, key, options.simulation);
}

void add_mean_check(ConvergenceReport& report, const HarnessOptions& options) {
    report.checks.emplace_back("mean_within_tolerance",
                               mean_within(report.rows.back().mean, report.limit, options.mean_tolerance));
}

}  // namespace

ConvergenceReport verify_count_lln(const KernelSpec& spec, const MarkSet& A, double v, const HarnessOptions& options) {
    validate(spec, v, options);
    const double qA = spec.marks().probability(A);
    const double limit = lln_limit_count(spec.base_rate(), qA, resolvent_l1_exact(spec.branching_ratio()), v);
    auto report = run_harness(spec, v, limit, options, [&](StreamKey key, double T, double horizon) {
        const auto stream = path_for(spec, key, horizon, options);
        return static_cast<double>(count(stream, horizon, A)) / T;
    });
    report.statistic = "count";
    report.mode = "L2";
    report.diagnostics.emplace_back("q_A", qA);
    add_mean_check(report, options);
    report.checks.emplace_back("mse_non_increasing", report.mse_non_increasing);
    return report;
}

ConvergenceReport verify_compound_lln(const KernelSpec& spec, const MarkSet& A, const ClaimLaw& law, double v,
                                      const HarnessOptions& options) {
    validate(spec, v, options);
    const double qA = spec.marks().probability(A);
    const double limit =
        lln_limit_compound(spec.base_rate(), qA, resolvent_l1_exact(spec.branching_ratio()), law.mean(), v);
    auto report = run_harness(spec, v, limit, options, [&](StreamKey key, double T, double horizon) {
        const auto stream = path_for(spec, key, horizon, options);
        RngStream claims(key, Substream::claims);
        return compound_CA(stream, A, law, claims, horizon) / T;
    });
    report.statistic = "compound";
    report.mode = "probability";
    report.diagnostics.emplace_back("q_A", qA);
    report.diagnostics.emplace_back("mean_claim", law.mean());
    add_mean_check(report, options);
    report.checks.emplace_back("exceedance_below_max", report.rows.back().exceedance < options.max_exceedance);
    return report;
}

ConvergenceReport verify_dphi_lln(const KernelSpec& spec, const MarkFunction& phi, double v,
                                  const HarnessOptions& options) {
    validate(spec, v, options);
    const double norm_r = resolvent_l1_exact(spec.branching_ratio());
    const double phi_mean = expected_mark_value(spec, phi);
    const double limit = lln_limit_dphi(spec.base_rate(), norm_r, phi_mean, v);
    auto report = run_harness(spec, v, limit, options, [&](StreamKey key, double T, double horizon) {
        const auto stream = path_for(spec, key, horizon, options);
        return compound_Dphi(stream, phi, horizon) / T;
    });
    report.statistic = "dphi";
    report.mode = "probability";
    report.diagnostics.emplace_back("phi_mean", phi_mean);
    report.diagnostics.emplace_back("integrability", check_integrability_condition(spec, norm_r));
    add_mean_check(report, options);
    report.checks.emplace_back("exceedance_below_max", report.rows.back().exceedance < options.max_exceedance);
    return report;
}

ConvergenceReport verify_ruin_lln(const KernelSpec& spec, double premium, double initial_capital,
                                  const ClaimLaws& laws, double v, const HarnessOptions& options) {
    validate(spec, v, options);
    if (!(premium >= 0.0)) throw std::domain_error("premium rate must be >= 0");
    if (!(initial_capital >= 0.0)) throw std::domain_error("initial capital must be >= 0");
    const double norm_r = resolvent_l1_exact(spec.branching_ratio());
    const auto claims_by_mark = mark_claims(spec, laws);
    const double drift = ruin_drift(premium, spec.base_rate(), norm_r, claims_by_mark);
    const double limit = v * drift;
    auto report = run_harness(spec, v, limit, options, [&](StreamKey key, double T, double horizon) {
        const auto stream = path_for(spec, key, horizon, options);
        RngStream claims(key, Substream::claims);
        const double at[] = {horizon};
        return ruin_path(stream, initial_capital, premium, laws, claims, at).surplus.front() / T;
    });
    report.statistic = "ruin";
    report.mode = "probability";

    double mean_claim = 0.0;
    for (const auto& k : claims_by_mark) mean_claim += k.mean * k.prob;
    const auto np = net_profit_condition(premium, spec.base_rate(), mean_claim, spec.branching_ratio());
    report.diagnostics.emplace_back("drift", drift);
    report.diagnostics.emplace_back("net_profit_threshold", np.threshold);
    report.diagnostics.emplace_back("net_profit_holds", np.holds ? 1.0 : 0.0);
    add_mean_check(report, options);
    if (limit != 0.0) {
        const double negative = report.rows.back().negative_fraction;
        const double agreeing = limit < 0.0 ? negative : 1.0 - negative;
        report.checks.emplace_back("drift_sign_consistent", agreeing >= options.min_sign_fraction);
    }
    return report;
}

}  // namespace hawkes
