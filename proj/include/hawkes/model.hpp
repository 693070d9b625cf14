#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hawkes {

class RngStream;

// Default node count for expectations over continuous mark laws.
inline constexpr std::size_t kDefaultQuadratureNodes = 1024;

// Effective support of a continuous mark law, as quantile levels.
inline constexpr double kSupportQuantileLow = 1e-8;
inline constexpr double kSupportQuantileHigh = 1.0 - 1e-8;

// A realised mark. For discrete mark spaces `index` names the point and
// `value` is its numeric coordinate; for continuous laws only `value` is used.
struct Mark {
    std::uint32_t index = 0;
    double value = 0.0;

    friend bool operator==(const Mark&, const Mark&) = default;
};

// Bounded real function of a mark: the modulation g in f(t,x) = phi(t) g(x)
// and the test functions phi used by D^phi.
class MarkFunction {
public:
    struct Constant { double value = 1.0; };
    struct Identity {};
    struct Power { double exponent = 1.0; };
    // exp(-rate * x); bounded by 1 on non-negative marks.
    struct ExpDecay { double rate = 0.0; };
    // One value per discrete mark index.
    struct Table { std::vector<double> values; };
    // 1 on [low, high], 0 elsewhere.
    struct Indicator { double low = 0.0; double high = 0.0; };

    using Variant = std::variant<Constant, Identity, Power, ExpDecay, Table, Indicator>;

    MarkFunction() : impl_(Constant{1.0}) {}
    explicit MarkFunction(Variant impl) : impl_(std::move(impl)) {}

    static MarkFunction constant(double value) { return MarkFunction(Constant{value}); }
    static MarkFunction identity() { return MarkFunction(Identity{}); }
    static MarkFunction power(double exponent) { return MarkFunction(Power{exponent}); }
    static MarkFunction exp_decay(double rate) { return MarkFunction(ExpDecay{rate}); }
    static MarkFunction table(std::vector<double> values) { return MarkFunction(Table{std::move(values)}); }
    static MarkFunction indicator(double low, double high) { return MarkFunction(Indicator{low, high}); }

    double operator()(const Mark& x) const;

    const Variant& variant() const noexcept { return impl_; }
    std::string describe() const;

private:
    Variant impl_;
};

// A subset A of the mark space: everything, a finite set of discrete labels,
// or a closed interval of mark values.
class MarkSet {
public:
    struct All {};
    struct Labels { std::vector<std::uint32_t> indices; };
    struct Interval { double low = 0.0; double high = 0.0; };
    using Variant = std::variant<All, Labels, Interval>;

    MarkSet() : impl_(All{}) {}
    explicit MarkSet(Variant impl);

    static MarkSet all() { return MarkSet(); }
    static MarkSet labels(std::vector<std::uint32_t> indices) { return MarkSet(Labels{std::move(indices)}); }
    static MarkSet interval(double low, double high) { return MarkSet(Interval{low, high}); }

    bool contains(const Mark& x) const;
    bool is_all() const noexcept { return std::holds_alternative<All>(impl_); }
    const Variant& variant() const noexcept { return impl_; }

private:
    Variant impl_;
};

/// The mark law Q. Discrete laws on finitely many labelled points are handled
/// exactly; the continuous families use inverse-CDF sampling and
/// Gauss-Legendre quadrature over the quantile range
/// [kSupportQuantileLow, kSupportQuantileHigh], normalised by the quadrature
/// mass so that constants integrate exactly.
class MarkDistribution {
public:
    struct Discrete {
        std::vector<std::string> labels;
        std::vector<double> values;
        std::vector<double> probs;
    };
    struct Uniform { double low = 0.0; double high = 1.0; };
    struct Exponential { double rate = 1.0; };
    using Variant = std::variant<Discrete, Uniform, Exponential>;

    static MarkDistribution discrete(std::vector<std::string> labels, std::vector<double> values,
                                     std::vector<double> probs);
    // Uniform probabilities over the given labels; values parsed from the
    // labels when numeric, else 1, 2, ...
    static MarkDistribution uniform_labels(std::vector<std::string> labels);
    static MarkDistribution uniform(double low, double high);
    static MarkDistribution exponential(double rate);

    bool is_discrete() const noexcept { return std::holds_alternative<Discrete>(impl_); }
    const Variant& variant() const noexcept { return impl_; }

    // Discrete accessors; size() is 0 for continuous laws.
    std::size_t size() const noexcept;
    const std::string& label(std::uint32_t index) const;
    double value(std::uint32_t index) const;
    double prob(std::uint32_t index) const;
    std::optional<std::uint32_t> find(const std::string& label) const;
    Mark mark(std::uint32_t index) const;

    Mark sample(RngStream& rng) const;

    double expectation(const std::function<double(const Mark&)>& fn,
                       std::size_t nodes = kDefaultQuadratureNodes) const;
    double expectation(const MarkFunction& fn, std::size_t nodes = kDefaultQuadratureNodes) const;

    // Q(A).
    double probability(const MarkSet& set) const;

    // sup over the support; +inf when unbounded.
    double supremum(const MarkFunction& fn) const;
    // inf over the support; used to reject negative modulations.
    double infimum(const MarkFunction& fn) const;

    double cdf(double x) const;
    double quantile(double p) const;
    std::pair<double, double> effective_support() const;

    std::string describe() const;

private:
    explicit MarkDistribution(Variant impl);

    Variant impl_;
    std::vector<double> cumulative_;
};

// Non-negative time profile phi(t) of a separable excitation together with a
// non-increasing envelope dominating it on [t, inf).
class TimeProfile {
public:
    // amplitude * (1 + t/scale)^-(1+shape); first moment finite iff shape > 1.
    struct PowerLaw { double amplitude = 0.0; double scale = 1.0; double shape = 2.0; };
    // amplitude * t * exp(-rate t); rises then decays.
    struct Erlang { double amplitude = 0.0; double rate = 1.0; };
    struct Custom {
        std::string name;
        std::function<double(double)> value;
        std::function<double(double)> envelope;
        double l1 = 0.0;
        double first_moment = 0.0;
    };
    using Variant = std::variant<PowerLaw, Erlang, Custom>;

    explicit TimeProfile(Variant impl);

    static TimeProfile power_law(double amplitude, double scale, double shape) {
        return TimeProfile(PowerLaw{amplitude, scale, shape});
    }
    static TimeProfile erlang(double amplitude, double rate) { return TimeProfile(Erlang{amplitude, rate}); }

    double value(double t) const;
    double envelope(double t) const;
    double l1() const;
    double first_moment() const;
    const Variant& variant() const noexcept { return impl_; }
    std::string describe() const;

private:
    Variant impl_;
};

/// Excitation f(t, x). Only separable families phi(t) g(x) are supported; the
/// exponential family phi(t) = alpha exp(-beta t) is kept separate because the
/// simulator and the default grids special-case it.
class ExcitationFunction {
public:
    struct Zero {};
    struct Exponential {
        double alpha = 0.0;
        double beta = 1.0;
        MarkFunction modulation;
    };
    struct Separable {
        TimeProfile profile;
        MarkFunction modulation;
    };
    using Variant = std::variant<Zero, Exponential, Separable>;

    ExcitationFunction() : impl_(Zero{}) {}
    explicit ExcitationFunction(Variant impl);

    static ExcitationFunction zero() { return ExcitationFunction(); }
    static ExcitationFunction exponential(double alpha, double beta,
                                          MarkFunction modulation = MarkFunction::constant(1.0)) {
        return ExcitationFunction(Exponential{alpha, beta, std::move(modulation)});
    }
    static ExcitationFunction separable(TimeProfile profile,
                                        MarkFunction modulation = MarkFunction::constant(1.0)) {
        return ExcitationFunction(Separable{std::move(profile), std::move(modulation)});
    }

    bool is_zero() const noexcept { return std::holds_alternative<Zero>(impl_); }
    const Exponential* as_exponential() const noexcept { return std::get_if<Exponential>(&impl_); }
    const Variant& variant() const noexcept { return impl_; }

    // phi(t), its dominating envelope, and the profile's integrals.
    double profile(double t) const;
    double envelope(double t) const;
    double profile_l1() const;
    double profile_first_moment() const;
    // g(x); 0 for the zero excitation.
    double modulation(const Mark& x) const;
    const MarkFunction* modulation_function() const noexcept;

    double operator()(double t, const Mark& x) const { return profile(t) * modulation(x); }

    std::string describe() const;

private:
    Variant impl_;
};

/// Full model (m, f, Q). Immutable after construction; construction checks
/// m >= 0, a non-negative bounded modulation, finiteness of
/// int ||f(., x)||_{L1}^2 Q(dx), and stability unless allow_unstable is set.
class KernelSpec {
public:
    KernelSpec(double base_rate, ExcitationFunction excitation, MarkDistribution marks,
               bool allow_unstable = false);

    double base_rate() const noexcept { return base_rate_; }
    const ExcitationFunction& excitation() const noexcept { return excitation_; }
    const MarkDistribution& marks() const noexcept { return marks_; }
    bool allow_unstable() const noexcept { return allow_unstable_; }

    // Integrals of the modulation g under Q.
    double modulation_mean() const noexcept { return g_mean_; }
    double modulation_second_moment() const noexcept { return g_second_moment_; }
    double modulation_sup() const noexcept { return g_sup_; }

    // int ||f(., x)||_{L1}^2 Q(dx); finite by construction.
    double squared_l1_moment() const noexcept { return squared_l1_moment_; }

    double branching_ratio() const noexcept { return branching_ratio_; }
    bool is_stable() const noexcept { return branching_ratio_ < 1.0; }

    // Canonical one-line description, stable across runs; used for digests.
    std::string describe() const;

private:
    double base_rate_;
    ExcitationFunction excitation_;
    MarkDistribution marks_;
    bool allow_unstable_;
    double g_mean_ = 0.0;
    double g_second_moment_ = 0.0;
    double g_sup_ = 0.0;
    double squared_l1_moment_ = 0.0;
    double branching_ratio_ = 0.0;
};

struct StabilityCheck {
    bool stable = false;
    double norm = 0.0;
};

// F(t) = int f(t, x) Q(dx). Throws std::domain_error for t < 0.
double marginal_excitation(const KernelSpec& spec, double t);

// ||F||_{L1}: mean number of direct offspring per event.
double branching_ratio(const KernelSpec& spec);

// Stable iff ||F||_{L1} < 1 strictly.
StabilityCheck check_stability(const KernelSpec& spec);

// H(x) = int_0^inf f(t, x) dt.
double mark_total_excitation(const KernelSpec& spec, const Mark& x);

// phi_Q = int phi dQ.
double expected_mark_value(const KernelSpec& spec, const MarkFunction& phi,
                           std::size_t nodes = kDefaultQuadratureNodes);

// int_0^inf t F(t) dt.
double marginal_first_moment(const KernelSpec& spec);

}  // namespace hawkes
