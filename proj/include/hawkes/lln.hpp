#pragma once

#include "hawkes/model.hpp"
#include "hawkes/simulate.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hawkes {

// ||R||_{L1} = ||F|| / (1 - ||F||). Throws InstabilityError for ||F|| >= 1.
double resolvent_l1_exact(double branching_ratio);

// nu(v) = v m Q(A) (||R|| + 1).
double lln_limit_count(double base_rate, double qA, double resolvent_l1, double v);

// upsilon(v) = v m Q(A) (||R|| + 1) E Z.
double lln_limit_compound(double base_rate, double qA, double resolvent_l1, double mean_claim, double v);

// psi(v) = phi_Q v m (||R|| + 1).
double lln_limit_dphi(double base_rate, double resolvent_l1, double phi_mean, double v);

struct MarkClaim {
    double mean = 0.0;  // mu_k = E Z^(k)
    double prob = 0.0;  // Q({x_k})
};

// c - m (||R|| + 1) sum_k mu_k Q({x_k}); the limit of R_{Tv} / (Tv).
double ruin_drift(double premium, double base_rate, double resolvent_l1, std::span<const MarkClaim> marks);

struct NetProfitCheck {
    bool holds = false;
    double threshold = 0.0;
};

// threshold = E Z m / (1 - E H(X_1)); holds iff c > threshold.
// Throws InstabilityError for EH >= 1.
NetProfitCheck net_profit_condition(double premium, double base_rate, double mean_claim, double mean_total_excitation);

enum class LimitKind { count, compound, mark_functional, ruin_drift };

/// Parameters of one of the four deterministic limits; evaluate(v) is linear
/// in v.
struct LimitSpec {
    LimitKind kind = LimitKind::count;
    double base_rate = 0.0;
    double qA = 1.0;
    double resolvent_l1 = 0.0;
    double mean_claim = 1.0;
    double phi_mean = 1.0;
    double premium = 0.0;
    std::vector<MarkClaim> marks;

    double evaluate(double v) const;
};

struct ConvergenceRow {
    double T = 0.0;
    double v = 0.0;
    double mean = 0.0;        // empirical mean of the scaled statistic
    double mean_se = 0.0;
    double mse = 0.0;         // empirical mean of (statistic - limit)^2
    double mse_se = 0.0;
    double exceedance = 0.0;  // fraction with |statistic - limit| > epsilon
    double negative_fraction = 0.0;
    std::size_t replications = 0;
};

/// Empirical convergence of a scaled statistic to its limit over a grid of
/// T. `checks` holds named pass/fail flags in a fixed order; `diagnostics`
/// holds named scalar side results (branching ratio, integrability value...).
struct ConvergenceReport {
    std::string statistic;
    std::string mode;  // "L2" or "probability"
    double v = 0.0;
    double limit = 0.0;
    double epsilon = 0.0;
    std::vector<ConvergenceRow> rows;
    bool mse_non_increasing = true;
    std::vector<std::pair<std::string, bool>> checks;
    std::vector<std::pair<std::string, double>> diagnostics;
    std::uint64_t seed = 0;
    std::string spec_digest;

    bool passed() const;
    std::optional<double> diagnostic(const std::string& name) const;
    std::optional<bool> check(const std::string& name) const;
};

struct HarnessOptions {
    std::vector<double> T_grid;
    std::size_t replications = 200;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    // Relative tolerance on the mean at the largest T (absolute if limit is 0).
    double mean_tolerance = 0.05;
    // Exceedance threshold; defaults to 0.05 |limit|, or 0.05 when limit is 0.
    std::optional<double> epsilon;
    double max_exceedance = 0.10;
    // Ruin: minimum fraction of replicates whose R_T/T has the drift's sign.
    double min_sign_fraction = 0.95;
    SimulationOptions simulation;
};

// Stream index for replicate `rep` at grid position `t_index`.
std::uint64_t replicate_stream(std::size_t t_index, std::size_t rep);

// MSE non-increasing along rows, with 2 combined standard errors of slack.
bool mse_non_increasing(std::span<const ConvergenceRow> rows);

ConvergenceReport verify_count_lln(const KernelSpec& spec, const MarkSet& A, double v, const HarnessOptions& options);

ConvergenceReport verify_compound_lln(const KernelSpec& spec, const MarkSet& A, const ClaimLaw& law, double v,
                                      const HarnessOptions& options);

ConvergenceReport verify_dphi_lln(const KernelSpec& spec, const MarkFunction& phi, double v,
                                  const HarnessOptions& options);

ConvergenceReport verify_ruin_lln(const KernelSpec& spec, double premium, double initial_capital,
                                  const ClaimLaws& laws, double v, const HarnessOptions& options);

// Per-mark (mu_k, Q({x_k})) pairs for a discrete kernel; a single pair with
// the fallback mean for continuous marks.
std::vector<MarkClaim> mark_claims(const KernelSpec& spec, const ClaimLaws& laws);

}  // namespace hawkes
