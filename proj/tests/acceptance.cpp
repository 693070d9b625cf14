// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include "hawkes/lln.hpp"
#include "hawkes/model.hpp"
#include "hawkes/report.hpp"
#include "hawkes/runner.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes/volterra.hpp"
#include "test_support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <thread>

using namespace hawkes;
using testing_support::Gen;

namespace {

constexpr std::uint64_t kSeed = 1;

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
    std::printf("%s  criterion %2d  %s  [%s]\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

unsigned threads() { return std::max(1u, std::thread::hardware_concurrency()); }

GridFunction exp_grid(double a, double b) {
    return GridFunction::sample([=](double t) { return a * std::exp(-b * t); }, 1e-3, 20.0);
}

HarnessOptions lln_options() {
    HarnessOptions o;
    o.T_grid = {100, 400, 1600};
    o.replications = 200;
    o.seed = kSeed;
    o.threads = threads();
    o.mean_tolerance = 0.05;
    return o;
}

// Partial sums of the Neumann series t^{n-1} e^{-2t} / (n-1)! for F = e^{-2t}.
double neumann_oracle(double t) {
    double term = std::exp(-2.0 * t), sum = 0.0;
    for (int n = 1; n < 400; ++n) {
        sum += term;
        term *= t / n;
        if (term < 1e-300) break;
    }
    return sum;
}

void criterion_1() {
    const auto res = resolvent(exp_grid(1.0, 2.0), 0.5);
    double err = 0.0;
    for (std::size_t i = 0; i < res.R.size(); ++i) err = std::max(err, std::abs(res.R[i] - neumann_oracle(res.R.time(i))));
    const double lo = res.l1_norm_truncated, hi = res.l1_norm_truncated + res.l1_tail_bound;
    const bool bracket = lo - 1e-3 <= 1.0 && 1.0 <= hi + 1e-3;
    report(1, err < 1e-4 && bracket, "resolvent of e^{-2t} equals e^{-t}",
           fmt("max err %.3g < 1e-4; ||R|| in [%.9g, %.9g] brackets 1 within 1e-3", err, lo, hi));
}

void criterion_2() {
    double worst = 0.0;
    for (double rho : {0.25, 0.5, 0.75}) {
        const auto F = exp_grid(2.0 * rho, 2.0);
        const auto res = resolvent(F, rho);
        worst = std::max(worst, (res.R - F - convolve(F, res.R)).max_abs());
    }
    report(2, worst < 1e-7, "resolvent identity residual for ||F|| in {0.25, 0.5, 0.75}",
           fmt("max |R - F - F*R| = %.3g < 1e-7", worst));
}

void criterion_3() {
    const auto res = kernel_resolvent(testing_support::test_kernel(), 1e-3, 20.0);
    const double el = expected_intensity(1.0, res, 1.0), en = expected_count(1.0, 1.0, res, 1.0);
    const double el_err = std::abs(el - (2.0 - std::exp(-1.0)));
    const double en_err = std::abs(en - (1.0 + std::exp(-1.0)));
    report(3, el_err < 1e-5 && en_err < 1e-5, "mean intensity and count closed forms at t = 1",
           fmt("E lambda(1) = %.8f (err %.2g), E N(1) = %.8f (err %.2g), tol 1e-5", el, el_err, en, en_err));
}

void criterion_4() {
    const auto spec = testing_support::test_kernel();
    const auto res = kernel_resolvent(spec, 1e-3, 20.0);
    const std::vector<double> ts{1.0, 5.0, 10.0};
    const int paths = 10000;
    const auto start = std::chrono::steady_clock::now();
    std::vector<double> s(ts.size(), 0.0), s2(ts.size(), 0.0);
    for (int p = 0; p < paths; ++p) {
        const auto stream = simulate_path(spec, 10.0, StreamKey{kSeed, static_cast<std::uint64_t>(p)});
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double n = static_cast<double>(count(stream, ts[i]));
            s[i] += n;
            s2[i] += n * n;
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = secs <= 60.0;
    std::string detail;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double mean = s[i] / paths;
        const double se = std::sqrt((s2[i] - paths * mean * mean) / (paths - 1) / paths);
        const double z = (mean - expected_count(1.0, 1.0, res, ts[i])) / se;
        ok = ok && std::abs(z) < 3.0;
        detail += fmt("t=%g: z=%.2f; ", ts[i], z);
    }
    detail += fmt("%.1f s <= 60 s", secs);
    report(4, ok, "simulated mean N(t) within 3 SE of the Volterra prediction", detail);
}

void criterion_5() {
    KernelSpec spec(2.0, ExcitationFunction::zero(), MarkDistribution::uniform_labels({"a"}));
    const auto stream = simulate_path(spec, 6000.0, StreamKey{kSeed, 0});
    std::vector<double> gaps;
    double prev = 0.0;
    for (const auto& e : stream.events()) {
        if (gaps.size() == 10000) break;
        gaps.push_back(e.time - prev);
        prev = e.time;
    }
    const double p = testing_support::ks_pvalue(gaps, [](double x) { return 1.0 - std::exp(-2.0 * x); });
    const double rate = static_cast<double>(count(stream, 1000.0)) / 1000.0;
    const double band = 3.0 * std::sqrt(2.0 / 1000.0);
    report(5, gaps.size() == 10000 && p > 1e-3 && std::abs(rate - 2.0) < band,
           "Poisson degeneracy with zero excitation",
           fmt("KS p = %.3g > 1e-3 over %g gaps; N(1000)/1000 = %.4f, |diff| < %.4f", p,
               static_cast<double>(gaps.size()), rate, band));
}

std::string rows_detail(const ConvergenceReport& r) {
    std::string d = fmt("limit %.6g; ", r.limit);
    for (const auto& row : r.rows) d += fmt("T=%g mean %.4f mse %.3g exc %.3f; ", row.T, row.mean, row.mse, row.exceedance);
    return d;
}

void criterion_6() {
    const auto r = verify_count_lln(testing_support::test_kernel(), MarkSet::all(), 1.0, lln_options());
    const bool ok = r.limit == 2.0 && r.check("mean_within_tolerance") == true && r.check("mse_non_increasing") == true;
    report(6, ok, "count LLN: mean within 5% of 2.0 at T=1600, MSE non-increasing", rows_detail(r));
}

void criterion_7() {
    auto o = lln_options();
    o.epsilon = 0.2;
    o.max_exceedance = 0.10;
    const auto r =
        verify_compound_lln(testing_support::test_kernel(), MarkSet::all(), ClaimLaw::exponential(2.0), 1.0, o);
    const bool ok = std::abs(r.limit - 4.0) < 1e-12 && r.check("mean_within_tolerance") == true &&
                    r.check("exceedance_below_max") == true;
    report(7, ok, "compound LLN: mean within 5% of 4.0, exceedance at eps=0.2 below 10%", rows_detail(r));
}

void criterion_8() {
    KernelSpec spec(1.0, ExcitationFunction::exponential(1.0, 2.0), MarkDistribution::uniform_labels({"1", "2"}));
    const auto r = verify_dphi_lln(spec, MarkFunction::identity(), 1.0, lln_options());
    // (1 + ||R||)^2 int H^2 dQ with ||R|| = 1 and H = 1/2 on both marks.
    const double closed = 4.0 * 0.25;
    const double integ = r.diagnostic("integrability").value_or(NAN);
    const bool ok = std::abs(r.limit - 3.0) < 1e-12 && r.check("mean_within_tolerance") == true &&
                    std::abs(integ - closed) < 1e-6;
    report(8, ok, "mark-functional LLN: mean within 5% of 3.0; integrability value",
           rows_detail(r) + fmt("integrability %.12g vs %.12g", integ, closed));
}

void criterion_9() {
    ClaimLaws laws;
    laws.fallback = ClaimLaw::exponential(1.0);
    const auto spec = testing_support::test_kernel();
    const auto profit = verify_ruin_lln(spec, 3.0, 0.0, laws, 1.0, lln_options());
    const auto ruin = verify_ruin_lln(spec, 1.0, 0.0, laws, 1.0, lln_options());
    const double negative = ruin.rows.back().negative_fraction;
    const bool ok = std::abs(profit.limit - 1.0) < 1e-12 && profit.check("mean_within_tolerance") == true &&
                    ruin.limit < 0.0 && negative >= 0.95;
    report(9, ok, "ruin drift: R_T/T within 5% of 1.0 (c=3); negative in >= 95% of replicates (c=1)",
           rows_detail(profit) + fmt("c=1: drift %.4g, negative fraction %.3f", ruin.limit, negative));
}

void criterion_10() {
    Gen gen(kSeed);
    double worst_eh = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t k = static_cast<std::size_t>(gen.integer(1, 5));
        std::vector<std::string> labels;
        std::vector<double> values, g;
        for (std::size_t i = 0; i < k; ++i) {
            labels.push_back("x" + std::to_string(i));
            values.push_back(gen.uniform(0.0, 3.0));
            g.push_back(gen.uniform(0.0, 2.0));
        }
        const auto q = MarkDistribution::discrete(labels, values, gen.simplex(k));
        const double gbar = q.expectation(MarkFunction::table(g));
        const double rho = gen.uniform(0.05, 0.95);
        ExcitationFunction f;
        if (trial % 3 == 0) {
            const double beta = gen.uniform(0.5, 3.0);
            f = ExcitationFunction::exponential(rho * beta / gbar, beta, MarkFunction::table(g));
        } else if (trial % 3 == 1) {
            const double scale = gen.uniform(0.5, 2.0), shape = gen.uniform(0.5, 3.0);
            f = ExcitationFunction::separable(TimeProfile::power_law(rho * shape / (scale * gbar), scale, shape),
                                              MarkFunction::table(g));
        } else {
            const double rate = gen.uniform(0.5, 3.0);
            f = ExcitationFunction::separable(TimeProfile::erlang(rho * rate * rate / gbar, rate), MarkFunction::table(g));
        }
        KernelSpec spec(1.0, f, q);
        double eh = 0.0;
        for (std::uint32_t i = 0; i < q.size(); ++i) eh += q.prob(i) * mark_total_excitation(spec, q.mark(i));
        worst_eh = std::max(worst_eh, std::abs(eh - spec.branching_ratio()));
    }

    double worst_np = 0.0;
    bool exact = true;
    for (int trial = 0; trial < 1000; ++trial) {
        const double rho = gen.uniform(0.0, 0.99), m = gen.uniform(0.0, 5.0), mu = gen.uniform(0.0, 5.0);
        const double qA = gen.uniform(0.0, 1.0), v = gen.uniform(0.0, 5.0);
        const double r = resolvent_l1_exact(rho);
        const double a = mu * m * (r + 1.0), b = mu * m / (1.0 - rho);
        worst_np = std::max(worst_np, std::abs(a - b));
        exact = exact && net_profit_condition(0.0, m, mu, rho).threshold == b;
        const double nu = lln_limit_count(m, qA, r, v);
        exact = exact && lln_limit_compound(m, qA, r, mu, v) == nu * mu;
        exact = exact && lln_limit_dphi(m, r, qA, v) == lln_limit_count(m, qA, r, v);
    }
    report(10, worst_eh < 1e-10 && worst_np < 1e-10 && exact, "identity suite",
           fmt("max |EH - ||F||| = %.3g; max threshold gap = %.3g; nu/upsilon/psi exact = %g", worst_eh, worst_np,
               exact ? 1.0 : 0.0));
}

void criterion_11() {
    namespace fs = std::filesystem;
    ScenarioConfig c;
    c.kernel.base_rate = 1.0;
    c.kernel.excitation.type = "exponential";
    c.kernel.excitation.alpha = 1.0;
    c.kernel.excitation.beta = 2.0;
    c.kernel.marks.points = {{"1", std::nullopt, 0.5}, {"2", std::nullopt, 0.5}};
    c.experiment.horizon = 200.0;
    c.experiment.T_grid = {50, 100, 200};
    c.experiment.v = {0.5, 1.0};
    c.experiment.replications = 50;
    c.experiment.claims.fallback = {"exponential", 0.0, 2.0};
    c.experiment.premium = 3.0;
    c.experiment.phi.type = "identity";
    c.rng.seed = kSeed;
    c.output.formats = {"csv", "json", "svg", "binary"};

    bool ok = true;
    std::size_t compared = 0;
    for (auto sub : {Subcommand::simulate, Subcommand::resolvent, Subcommand::moments, Subcommand::lln_count,
                     Subcommand::lln_compound, Subcommand::lln_dphi, Subcommand::ruin, Subcommand::netprofit}) {
        const auto a = testing_support::fresh_dir("accept_a");
        const auto b = testing_support::fresh_dir("accept_b");
        const auto ra = run(sub, c, {.out_dir = a, .threads = 1});
        const auto rb = run(sub, c, {.out_dir = b, .threads = threads()});
        ok = ok && ra.exit_code != kExitError && ra.outputs == rb.outputs && !ra.outputs.empty();
        for (const auto& name : ra.outputs) {
            ok = ok && read_file(a / name) == read_file(b / name);
            ++compared;
        }
        fs::remove_all(a);
        fs::remove_all(b);
    }
    report(11, ok, "same seed gives byte-identical outputs", fmt("%g files compared across all subcommands",
                                                                 static_cast<double>(compared)));
}

}  // namespace

int main() {
    const std::vector<std::function<void()>> criteria{criterion_1, criterion_2, criterion_3, criterion_4,
                                                      criterion_5, criterion_6, criterion_7, criterion_8,
                                                      criterion_9, criterion_10, criterion_11};
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        try {
            criteria[i]();
        } catch (const std::exception& e) {
            report(static_cast<int>(i + 1), false, "threw", e.what());
        }
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
