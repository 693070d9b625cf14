#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace hawkes {

class KernelSpec;

/// Samples of a function at 0, dt, 2 dt, ..., horizon.
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(double dt, std::vector<double> values);

    // Samples fn on [0, horizon]; horizon must be a whole number of steps
    // (relative slack 1e-9).
    static GridFunction sample(const std::function<double(double)>& fn, double dt, double horizon);
    static GridFunction zeros(double dt, double horizon);

    double dt() const noexcept { return dt_; }
    double horizon() const noexcept { return dt_ * static_cast<double>(values_.empty() ? 0 : values_.size() - 1); }
    std::size_t size() const noexcept { return values_.size(); }
    double time(std::size_t i) const noexcept { return dt_ * static_cast<double>(i); }

    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const noexcept { return values_; }

    bool same_grid(const GridFunction& other) const noexcept;

    // Composite trapezoid over the whole grid.
    double integral() const;
    // Composite trapezoid of t * value(t).
    double first_moment() const;
    double max_abs() const;

    // "t,value" header then one row per node.
    std::string to_csv() const;

private:
    double dt_ = 0.0;
    std::vector<double> values_;
};

// (f * g)(t) = int_0^t f(t - s) g(s) ds by the composite trapezoid rule at
// every node; node 0 is 0. Throws GridMismatchError for different grids.
GridFunction convolve(const GridFunction& f, const GridFunction& g);

GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);

enum class ResolventMethod {
    neumann,  // R = sum_n F_n, F_{n+1} = F_n * F
    direct,   // forward substitution on R = F + F * R
};

struct ResolventResult {
    GridFunction R;
    // Trapezoid integral of R over the grid.
    double l1_norm_truncated = 0.0;
    // Analytic bound on the omitted Neumann terms, ||F||^(n+1) / (1 - ||F||).
    // Zero for the direct method.
    double l1_tail_bound = 0.0;
    // Trapezoid integral of t R(t) over the grid.
    double first_moment = 0.0;
    int neumann_terms_used = 0;

    // Inputs retained for the first-moment bound.
    double branching_ratio = 0.0;
    double kernel_first_moment = 0.0;
};

inline constexpr double kDefaultResolventTol = 1e-8;
inline constexpr double kDefaultGridStep = 1e-3;
inline constexpr double kDefaultHorizonMultiplier = 40.0;

/// Resolvent of the marginal excitation: the solution R of R = F + F * R,
/// i.e. R = -r where r is the resolvent of -F. With the Neumann method the
/// series is truncated once the analytic tail ||F||^(n+1)/(1-||F||) drops
/// below tol; the direct method solves the trapezoid discretisation node by
/// node, which requires F(0) dt < 1.
///
/// Throws InstabilityError for branching_ratio >= 1 and std::domain_error for
/// tol <= 0.
ResolventResult resolvent(const GridFunction& F, double branching_ratio, double tol = kDefaultResolventTol,
                          ResolventMethod method = ResolventMethod::neumann);

// Samples F for the kernel on [0, horizon] with step dt.
GridFunction marginal_excitation_grid(const KernelSpec& spec, double dt, double horizon);

// Default resolvent horizon: multiplier times the profile's time scale, i.e.
// 1/beta (exponential), scale (power law) or 1/rate (Erlang); the multiplier
// itself for custom profiles.
double default_horizon(const KernelSpec& spec, double multiplier = kDefaultHorizonMultiplier);

ResolventResult kernel_resolvent(const KernelSpec& spec, double dt = kDefaultGridStep, double horizon = 0.0,
                                 double tol = kDefaultResolventTol,
                                 ResolventMethod method = ResolventMethod::neumann);

// E lambda(t) = m (1 + int_0^t R).
double expected_intensity(double base_rate, const ResolventResult& R, double t);

// E N(t, A) = Q(A) m (t + int_0^t (t - u) R(u) du).
double expected_count(double base_rate, double qA, const ResolventResult& R, double t);

struct FirstMomentCheck {
    double value = 0.0;
    // int t F(t) dt / (1 - ||F||)^2.
    double bound = 0.0;
};

FirstMomentCheck first_moment_R(const ResolventResult& R);

// int_X [int_0^inf (f(u,x) + int_0^u R(u-r) f(r,x) dr) du]^2 Q(dx), which for
// separable excitations is (1 + ||R||)^2 int H(x)^2 Q(dx).
double check_integrability_condition(const KernelSpec& spec, double resolvent_l1);
double check_integrability_condition(const KernelSpec& spec, const ResolventResult& R);

}  // namespace hawkes
