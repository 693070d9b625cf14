#include "hawkes/model.hpp"

#include "hawkes/errors.hpp"
#include "hawkes/format.hpp"
#include "hawkes/quadrature.hpp"
#include "hawkes/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace hawkes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const QuadratureRule& unit_rule(std::size_t n) {
    static const QuadratureRule default_rule = gauss_legendre(kDefaultQuadratureNodes, 0.0, 1.0);
    if (n == kDefaultQuadratureNodes) return default_rule;
    thread_local QuadratureRule other;
    if (other.nodes.size() != n) other = gauss_legendre(n, 0.0, 1.0);
    return other;
}

std::pair<double, double> minmax2(double a, double b) { return {std::min(a, b), std::max(a, b)}; }

bool parse_number(const std::string& s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && std::isfinite(out);
}

}  // namespace

// ---------------------------------------------------------------------------
// MarkFunction

double MarkFunction::operator()(const Mark& x) const {
    return std::visit(
        Overloaded{
            [](const Constant& c) { return c.value; },
            [&](const Identity&) { return x.value; },
            [&](const Power& p) { return std::pow(x.value, p.exponent); },
            [&](const ExpDecay& e) { return std::exp(-e.rate * x.value); },
            [&](const Table& t) {
                if (x.index >= t.values.size())
                    throw std::out_of_range("mark function table has no entry for mark index " +
                                            std::to_string(x.index));
                return t.values[x.index];
            },
            [&](const Indicator& i) { return (x.value >= i.low && x.value <= i.high) ? 1.0 : 0.0; },
        },
        impl_);
}

std::string MarkFunction::describe() const {
    return std::visit(
        Overloaded{
            [](const Constant& c) { return "constant(" + format_double(c.value) + ")"; },
            [](const Identity&) { return std::string("identity"); },
            [](const Power& p) { return "power(" + format_double(p.exponent) + ")"; },
            [](const ExpDecay& e) { return "exp_decay(" + format_double(e.rate) + ")"; },
            [](const Table& t) {
                std::string s = "table(";
                for (std::size_t i = 0; i < t.values.size(); ++i) {
                    if (i) s += ',';
                    s += format_double(t.values[i]);
                }
                return s + ")";
            },
            [](const Indicator& i) {
                return "indicator(" + format_double(i.low) + "," + format_double(i.high) + ")";
            },
        },
        impl_);
}

// ---------------------------------------------------------------------------
// MarkSet

MarkSet::MarkSet(Variant impl) : impl_(std::move(impl)) {
    if (auto* labels = std::get_if<Labels>(&impl_)) {
        std::sort(labels->indices.begin(), labels->indices.end());
        labels->indices.erase(std::unique(labels->indices.begin(), labels->indices.end()),
                              labels->indices.end());
    } else if (auto* iv = std::get_if<Interval>(&impl_)) {
        if (!(iv->low <= iv->high)) throw std::invalid_argument("mark interval requires low <= high");
    }
}

bool MarkSet::contains(const Mark& x) const {
    return std::visit(Overloaded{
                          [](const All&) { return true; },
                          [&](const Labels& l) {
                              return std::binary_search(l.indices.begin(), l.indices.end(), x.index);
                          },
                          [&](const Interval& i) { return x.value >= i.low && x.value <= i.high; },
                      },
                      impl_);
}

// ---------------------------------------------------------------------------
// MarkDistribution

MarkDistribution::MarkDistribution(Variant impl) : impl_(std::move(impl)) {
    if (auto* d = std::get_if<Discrete>(&impl_)) {
        cumulative_.resize(d->probs.size());
        std::partial_sum(d->probs.begin(), d->probs.end(), cumulative_.begin());
    }
}

MarkDistribution MarkDistribution::discrete(std::vector<std::string> labels, std::vector<double> values,
                                            std::vector<double> probs) {
    if (labels.empty()) throw std::invalid_argument("discrete mark law needs at least one point");
    if (labels.size() != probs.size() || labels.size() != values.size())
        throw std::invalid_argument("discrete mark law: labels, values and probs differ in length");
    std::set<std::string> seen;
    for (const auto& l : labels)
        if (!seen.insert(l).second) throw std::invalid_argument("duplicate mark label '" + l + "'");
    double total = 0.0;
    for (double p : probs) {
        if (!std::isfinite(p) || p < 0.0)
            throw std::invalid_argument("mark probabilities must be finite and non-negative");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("mark probabilities sum to " + format_double(total) + ", not 1");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("mark values must be finite");
    return MarkDistribution(Discrete{std::move(labels), std::move(values), std::move(probs)});
}

MarkDistribution MarkDistribution::uniform_labels(std::vector<std::string> labels) {
    std::vector<double> values(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (!parse_number(labels[i], values[i])) values[i] = static_cast<double>(i + 1);
    std::vector<double> probs(labels.size(), labels.empty() ? 0.0 : 1.0 / static_cast<double>(labels.size()));
    return discrete(std::move(labels), std::move(values), std::move(probs));
}

MarkDistribution MarkDistribution::uniform(double low, double high) {
    if (!(std::isfinite(low) && std::isfinite(high) && low < high))
        throw std::invalid_argument("uniform mark law requires finite low < high");
    return MarkDistribution(Uniform{low, high});
}

MarkDistribution MarkDistribution::exponential(double rate) {
    if (!(std::isfinite(rate) && rate > 0.0)) throw std::invalid_argument("exponential mark law requires rate > 0");
    return MarkDistribution(Exponential{rate});
}

std::size_t MarkDistribution::size() const noexcept {
    if (auto* d = std::get_if<Discrete>(&impl_)) return d->labels.size();
    return 0;
}

const std::string& MarkDistribution::label(std::uint32_t index) const {
    return std::get<Discrete>(impl_).labels.at(index);
}

double MarkDistribution::value(std::uint32_t index) const { return std::get<Discrete>(impl_).values.at(index); }

double MarkDistribution::prob(std::uint32_t index) const { return std::get<Discrete>(impl_).probs.at(index); }

std::optional<std::uint32_t> MarkDistribution::find(const std::string& label) const {
    auto* d = std::get_if<Discrete>(&impl_);
    if (!d) return std::nullopt;
    auto it = std::find(d->labels.begin(), d->labels.end(), label);
    if (it == d->labels.end()) return std::nullopt;
    return static_cast<std::uint32_t>(it - d->labels.begin());
}

Mark MarkDistribution::mark(std::uint32_t index) const { return Mark{index, value(index)}; }

Mark MarkDistribution::sample(RngStream& rng) const {
    const double u = rng.uniform();
    return std::visit(Overloaded{
                          [&](const Discrete& d) {
                              auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
                              auto idx = static_cast<std::uint32_t>(it - cumulative_.begin());
                              // Round-off may leave the last cumulative just below 1.
                              if (idx >= d.labels.size()) idx = static_cast<std::uint32_t>(d.labels.size() - 1);
                              while (d.probs[idx] == 0.0 && idx > 0) --idx;
                              return Mark{idx, d.values[idx]};
                          },
                          [&](const Uniform& un) { return Mark{0, un.low + (un.high - un.low) * u}; },
                          [&](const Exponential& e) { return Mark{0, -std::log(u) / e.rate}; },
                      },
                      impl_);
}

double MarkDistribution::expectation(const std::function<double(const Mark&)>& fn, std::size_t nodes) const {
    if (auto* d = std::get_if<Discrete>(&impl_)) {
        double sum = 0.0;
        for (std::size_t i = 0; i < d->labels.size(); ++i)
            if (d->probs[i] > 0.0) sum += d->probs[i] * fn(Mark{static_cast<std::uint32_t>(i), d->values[i]});
        return sum;
    }
    const auto [lo, hi] = effective_support();
    const QuadratureRule& rule = unit_rule(nodes);
    const double width = hi - lo;
    double num = 0.0;
    double mass = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double x = lo + width * rule.nodes[i];
        double density = 0.0;
        if (auto* u = std::get_if<Uniform>(&impl_))
            density = 1.0 / (u->high - u->low);
        else
            density = std::get<Exponential>(impl_).rate * std::exp(-std::get<Exponential>(impl_).rate * x);
        const double w = rule.weights[i] * width * density;
        num += w * fn(Mark{0, x});
        mass += w;
    }
    return num / mass;
}

double MarkDistribution::expectation(const MarkFunction& fn, std::size_t nodes) const {
    if (!is_discrete()) {
        if (auto* ind = std::get_if<MarkFunction::Indicator>(&fn.variant()))
            return probability(MarkSet::interval(ind->low, ind->high));
        if (std::holds_alternative<MarkFunction::Table>(fn.variant()))
            throw std::invalid_argument("table mark functions need a discrete mark law");
    }
    return expectation([&fn](const Mark& x) { return fn(x); }, nodes);
}

double MarkDistribution::probability(const MarkSet& set) const {
    return std::visit(
        Overloaded{
            [](const MarkSet::All&) { return 1.0; },
            [&](const MarkSet::Labels& l) {
                auto* d = std::get_if<Discrete>(&impl_);
                if (!d) throw std::invalid_argument("label sets need a discrete mark law");
                double p = 0.0;
                for (auto idx : l.indices) {
                    if (idx >= d->probs.size())
                        throw std::out_of_range("mark index " + std::to_string(idx) + " not in mark space");
                    p += d->probs[idx];
                }
                return p;
            },
            [&](const MarkSet::Interval& iv) {
                if (auto* d = std::get_if<Discrete>(&impl_)) {
                    double p = 0.0;
                    for (std::size_t i = 0; i < d->values.size(); ++i)
                        if (d->values[i] >= iv.low && d->values[i] <= iv.high) p += d->probs[i];
                    return p;
                }
                return cdf(iv.high) - cdf(iv.low);
            },
        },
        set.variant());
}

namespace {

// (inf, sup) of fn over a continuous support [lo, hi] (hi may be +inf).
std::pair<double, double> continuous_bounds(const MarkFunction& fn, double lo, double hi) {
    return std::visit(
        Overloaded{
            [](const MarkFunction::Constant& c) { return std::pair{c.value, c.value}; },
            [&](const MarkFunction::Identity&) { return std::pair{lo, hi}; },
            [&](const MarkFunction::Power& p) -> std::pair<double, double> {
                if (lo < 0.0) throw std::invalid_argument("power mark function needs non-negative marks");
                double at_hi = 0.0;
                if (std::isinf(hi))
                    at_hi = p.exponent > 0.0 ? kInf : (p.exponent < 0.0 ? 0.0 : 1.0);
                else
                    at_hi = std::pow(hi, p.exponent);
                return minmax2(std::pow(lo, p.exponent), at_hi);
            },
            [&](const MarkFunction::ExpDecay& e) -> std::pair<double, double> {
                const double at_lo = std::exp(-e.rate * lo);
                double at_hi = 0.0;
                if (std::isinf(hi))
                    at_hi = e.rate > 0.0 ? 0.0 : (e.rate < 0.0 ? kInf : 1.0);
                else
                    at_hi = std::exp(-e.rate * hi);
                return minmax2(at_lo, at_hi);
            },
            [](const MarkFunction::Table&) -> std::pair<double, double> {
                throw std::invalid_argument("table mark functions need a discrete mark law");
            },
            [&](const MarkFunction::Indicator& i) -> std::pair<double, double> {
                const bool overlaps = i.high >= lo && i.low <= hi;
                const bool covers = i.low <= lo && i.high >= hi;
                return {covers ? 1.0 : 0.0, overlaps ? 1.0 : 0.0};
            },
        },
        fn.variant());
}

}  // namespace

double MarkDistribution::supremum(const MarkFunction& fn) const {
    return std::visit(Overloaded{
                          [&](const Discrete& d) {
                              double s = -kInf;
                              for (std::size_t i = 0; i < d.values.size(); ++i)
                                  s = std::max(s, fn(Mark{static_cast<std::uint32_t>(i), d.values[i]}));
                              return s;
                          },
                          [&](const Uniform& u) { return continuous_bounds(fn, u.low, u.high).second; },
                          [&](const Exponential&) { return continuous_bounds(fn, 0.0, kInf).second; },
                      },
                      impl_);
}

double MarkDistribution::infimum(const MarkFunction& fn) const {
    return std::visit(Overloaded{
                          [&](const Discrete& d) {
                              double s = kInf;
                              for (std::size_t i = 0; i < d.values.size(); ++i)
                                  s = std::min(s, fn(Mark{static_cast<std::uint32_t>(i), d.values[i]}));
                              return s;
                          },
                          [&](const Uniform& u) { return continuous_bounds(fn, u.low, u.high).first; },
                          [&](const Exponential&) { return continuous_bounds(fn, 0.0, kInf).first; },
                      },
                      impl_);
}

double MarkDistribution::cdf(double x) const {
    return std::visit(Overloaded{
                          [&](const Discrete& d) {
                              double p = 0.0;
                              for (std::size_t i = 0; i < d.values.size(); ++i)
                                  if (d.values[i] <= x) p += d.probs[i];
                              return p;
                          },
                          [&](const Uniform& u) { return std::clamp((x - u.low) / (u.high - u.low), 0.0, 1.0); },
                          [&](const Exponential& e) { return x <= 0.0 ? 0.0 : -std::expm1(-e.rate * x); },
                      },
                      impl_);
}

double MarkDistribution::quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("quantile level must lie in [0, 1]");
    return std::visit(Overloaded{
                          [&](const Discrete& d) {
                              std::vector<std::size_t> order(d.values.size());
                              std::iota(order.begin(), order.end(), std::size_t{0});
                              std::sort(order.begin(), order.end(),
                                        [&](auto a, auto b) { return d.values[a] < d.values[b]; });
                              double acc = 0.0;
                              for (auto i : order) {
                                  acc += d.probs[i];
                                  if (acc >= p) return d.values[i];
                              }
                              return d.values[order.back()];
                          },
                          [&](const Uniform& u) { return u.low + (u.high - u.low) * p; },
                          [&](const Exponential& e) { return -std::log1p(-p) / e.rate; },
                      },
                      impl_);
}

std::pair<double, double> MarkDistribution::effective_support() const {
    if (auto* u = std::get_if<Uniform>(&impl_)) return {u->low, u->high};
    return {quantile(kSupportQuantileLow), quantile(kSupportQuantileHigh)};
}

std::string MarkDistribution::describe() const {
    return std::visit(Overloaded{
                          [](const Discrete& d) {
                              std::string s = "discrete(";
                              for (std::size_t i = 0; i < d.labels.size(); ++i) {
                                  if (i) s += ',';
                                  s += d.labels[i] + ":" + format_double(d.values[i]) + "@" +
                                       format_double(d.probs[i]);
                              }
                              return s + ")";
                          },
                          [](const Uniform& u) {
                              return "uniform(" + format_double(u.low) + "," + format_double(u.high) + ")";
                          },
                          [](const Exponential& e) { return "exponential(" + format_double(e.rate) + ")"; },
                      },
                      impl_);
}

// ---------------------------------------------------------------------------
// TimeProfile

TimeProfile::TimeProfile(Variant impl) : impl_(std::move(impl)) {
    std::visit(Overloaded{
                   [](const PowerLaw& p) {
                       if (!(p.amplitude >= 0.0 && std::isfinite(p.amplitude) && p.scale > 0.0 &&
                             std::isfinite(p.scale) && p.shape > 0.0 && std::isfinite(p.shape)))
                           throw std::invalid_argument("power-law profile requires amplitude >= 0, scale > 0, shape > 0");
                   },
                   [](const Erlang& e) {
                       if (!(e.amplitude >= 0.0 && std::isfinite(e.amplitude) && e.rate > 0.0 &&
                             std::isfinite(e.rate)))
                           throw std::invalid_argument("erlang profile requires amplitude >= 0, rate > 0");
                   },
                   [](const Custom& c) {
                       if (!c.value || !c.envelope)
                           throw std::invalid_argument("custom profile needs value and envelope functions");
                       if (!(c.l1 >= 0.0 && std::isfinite(c.l1)))
                           throw std::invalid_argument("custom profile needs a finite L1 norm");
                   },
               },
               impl_);
}

double TimeProfile::value(double t) const {
    return std::visit(Overloaded{
                          [&](const PowerLaw& p) { return p.amplitude * std::pow(1.0 + t / p.scale, -(1.0 + p.shape)); },
                          [&](const Erlang& e) { return e.amplitude * t * std::exp(-e.rate * t); },
                          [&](const Custom& c) { return c.value(t); },
                      },
                      impl_);
}

double TimeProfile::envelope(double t) const {
    return std::visit(Overloaded{
                          [&](const PowerLaw&) { return value(t); },
                          [&](const Erlang& e) { return value(std::max(t, 1.0 / e.rate)); },
                          [&](const Custom& c) { return c.envelope(t); },
                      },
                      impl_);
}

double TimeProfile::l1() const {
    return std::visit(Overloaded{
                          [](const PowerLaw& p) { return p.amplitude * p.scale / p.shape; },
                          [](const Erlang& e) { return e.amplitude / (e.rate * e.rate); },
                          [](const Custom& c) { return c.l1; },
                      },
                      impl_);
}

double TimeProfile::first_moment() const {
    return std::visit(Overloaded{
                          [](const PowerLaw& p) {
                              if (p.shape <= 1.0) return p.amplitude > 0.0 ? kInf : 0.0;
                              return p.amplitude * p.scale * p.scale / (p.shape * (p.shape - 1.0));
                          },
                          [](const Erlang& e) { return 2.0 * e.amplitude / (e.rate * e.rate * e.rate); },
                          [](const Custom& c) { return c.first_moment; },
                      },
                      impl_);
}

std::string TimeProfile::describe() const {
    return std::visit(Overloaded{
                          [](const PowerLaw& p) {
                              return "power_law(amplitude=" + format_double(p.amplitude) +
                                     ",scale=" + format_double(p.scale) + ",shape=" + format_double(p.shape) + ")";
                          },
                          [](const Erlang& e) {
                              return "erlang(amplitude=" + format_double(e.amplitude) +
                                     ",rate=" + format_double(e.rate) + ")";
                          },
                          [](const Custom& c) { return "custom(" + c.name + ")"; },
                      },
                      impl_);
}

// ---------------------------------------------------------------------------
// ExcitationFunction

ExcitationFunction::ExcitationFunction(Variant impl) : impl_(std::move(impl)) {
    if (auto* e = std::get_if<Exponential>(&impl_)) {
        if (!(e->alpha >= 0.0 && std::isfinite(e->alpha)))
            throw std::invalid_argument("exponential excitation requires alpha >= 0");
        if (!(e->beta > 0.0 && std::isfinite(e->beta)))
            throw std::invalid_argument("exponential excitation requires beta > 0");
    }
}

double ExcitationFunction::profile(double t) const {
    return std::visit(Overloaded{
                          [](const Zero&) { return 0.0; },
                          [&](const Exponential& e) { return e.alpha * std::exp(-e.beta * t); },
                          [&](const Separable& s) { return s.profile.value(t); },
                      },
                      impl_);
}

double ExcitationFunction::envelope(double t) const {
    return std::visit(Overloaded{
                          [](const Zero&) { return 0.0; },
                          [&](const Exponential& e) { return e.alpha * std::exp(-e.beta * t); },
                          [&](const Separable& s) { return s.profile.envelope(t); },
                      },
                      impl_);
}

double ExcitationFunction::profile_l1() const {
    return std::visit(Overloaded{
                          [](const Zero&) { return 0.0; },
                          [](const Exponential& e) { return e.alpha / e.beta; },
                          [](const Separable& s) { return s.profile.l1(); },
                      },
                      impl_);
}

double ExcitationFunction::profile_first_moment() const {
    return std::visit(Overloaded{
                          [](const Zero&) { return 0.0; },
                          [](const Exponential& e) { return e.alpha / (e.beta * e.beta); },
                          [](const Separable& s) { return s.profile.first_moment(); },
                      },
                      impl_);
}

double ExcitationFunction::modulation(const Mark& x) const {
    const MarkFunction* g = modulation_function();
    return g ? (*g)(x) : 0.0;
}

const MarkFunction* ExcitationFunction::modulation_function() const noexcept {
    if (auto* e = std::get_if<Exponential>(&impl_)) return &e->modulation;
    if (auto* s = std::get_if<Separable>(&impl_)) return &s->modulation;
    return nullptr;
}

std::string ExcitationFunction::describe() const {
    return std::visit(Overloaded{
                          [](const Zero&) { return std::string("zero"); },
                          [](const Exponential& e) {
                              return "exponential(alpha=" + format_double(e.alpha) + ",beta=" +
                                     format_double(e.beta) + ",g=" + e.modulation.describe() + ")";
                          },
                          [](const Separable& s) {
                              return "separable(" + s.profile.describe() + ",g=" + s.modulation.describe() + ")";
                          },
                      },
                      impl_);
}

// ---------------------------------------------------------------------------
// KernelSpec

KernelSpec::KernelSpec(double base_rate, ExcitationFunction excitation, MarkDistribution marks,
                       bool allow_unstable)
    : base_rate_(base_rate),
      excitation_(std::move(excitation)),
      marks_(std::move(marks)),
      allow_unstable_(allow_unstable) {
    if (!(std::isfinite(base_rate_) && base_rate_ >= 0.0))
        throw std::invalid_argument("base rate m must be finite and >= 0");

    if (const MarkFunction* g = excitation_.modulation_function()) {
        if (auto* table = std::get_if<MarkFunction::Table>(&g->variant());
            table && table->values.size() != marks_.size())
            throw std::invalid_argument("modulation table has " + std::to_string(table->values.size()) +
                                        " entries for " + std::to_string(marks_.size()) + " marks");
        const double inf = marks_.infimum(*g);
        if (!(inf >= 0.0)) throw std::invalid_argument("mark modulation g must be non-negative");
        g_sup_ = marks_.supremum(*g);
        if (!std::isfinite(g_sup_)) throw std::invalid_argument("mark modulation g must be bounded on the mark space");
        g_mean_ = marks_.expectation(*g);
        g_second_moment_ = marks_.expectation([g](const Mark& x) {
            const double v = (*g)(x);
            return v * v;
        });
    }

    const double l1 = excitation_.profile_l1();
    const double sup_profile = excitation_.envelope(0.0);
    if (!std::isfinite(sup_profile)) throw std::invalid_argument("excitation time profile must be bounded");
    squared_l1_moment_ = l1 * l1 * g_second_moment_;
    if (!std::isfinite(squared_l1_moment_))
        throw std::invalid_argument("excitation violates int ||f(.,x)||_L1^2 Q(dx) < inf");
    branching_ratio_ = l1 * g_mean_;

    if (!allow_unstable_ && !(branching_ratio_ < 1.0))
        throw InstabilityError("kernel is unstable: branching ratio " + format_double(branching_ratio_) +
                               " is not < 1");
}

std::string KernelSpec::describe() const {
    return "m=" + format_double(base_rate_) + ";f=" + excitation_.describe() + ";Q=" + marks_.describe() +
           (allow_unstable_ ? ";allow_unstable" : "");
}

// ---------------------------------------------------------------------------
// Free operations

double marginal_excitation(const KernelSpec& spec, double t) {
    if (!(t >= 0.0)) throw std::domain_error("marginal_excitation: t must be >= 0");
    if (spec.excitation().is_zero()) return 0.0;
    return spec.excitation().profile(t) * spec.modulation_mean();
}

double branching_ratio(const KernelSpec& spec) { return spec.branching_ratio(); }

StabilityCheck check_stability(const KernelSpec& spec) {
    return StabilityCheck{spec.branching_ratio() < 1.0, spec.branching_ratio()};
}

double mark_total_excitation(const KernelSpec& spec, const Mark& x) {
    if (spec.excitation().is_zero()) return 0.0;
    return spec.excitation().profile_l1() * spec.excitation().modulation(x);
}

double expected_mark_value(const KernelSpec& spec, const MarkFunction& phi, std::size_t nodes) {
    return spec.marks().expectation(phi, nodes);
}

double marginal_first_moment(const KernelSpec& spec) {
    if (spec.excitation().is_zero()) return 0.0;
    return spec.excitation().profile_first_moment() * spec.modulation_mean();
}

}  // namespace hawkes
