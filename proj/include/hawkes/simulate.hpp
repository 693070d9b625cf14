#pragma once

#include "hawkes/model.hpp"
#include "hawkes/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hawkes {

struct Event {
    double time = 0.0;
    Mark mark;

    friend bool operator==(const Event&, const Event&) = default;
};

/// A realisation of N on (0, horizon]: strictly increasing event times, each
/// with its mark.
class EventStream {
public:
    EventStream() = default;
    EventStream(std::vector<Event> events, double horizon);

    const std::vector<Event>& events() const noexcept { return events_; }
    double horizon() const noexcept { return horizon_; }
    std::size_t size() const noexcept { return events_.size(); }
    bool empty() const noexcept { return events_.empty(); }

    // "time,mark" rows; discrete marks print their label, continuous marks
    // their value.
    std::string to_csv(const MarkDistribution& marks) const;

    // Little-endian: u64 event count, then per event an f64 time and a u32
    // mark index. Discrete mark spaces only; the horizon is not stored.
    std::string to_binary() const;
    static EventStream from_binary(std::string_view bytes, const MarkDistribution& marks, double horizon);

    friend bool operator==(const EventStream&, const EventStream&) = default;

private:
    std::vector<Event> events_;
    double horizon_ = 0.0;
};

inline constexpr std::size_t kDefaultEventCap = 10'000'000;

struct SimulationOptions {
    std::size_t event_cap = kDefaultEventCap;
};

// Thrown when a path exceeds the event cap; carries the path up to that point.
class PartialPathError : public std::runtime_error {
public:
    PartialPathError(const std::string& what, EventStream partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const EventStream& partial() const noexcept { return partial_; }

private:
    EventStream partial_;
};

/// Ogata thinning. The dominating rate after each proposal at time t is
/// lambda(t+), built from the non-increasing envelope of the time profile, so
/// every candidate in (t, t + w] is dominated. Exponential kernels keep the
/// excitation sum by the decay recursion; other profiles sum over the
/// history. Times and acceptance draws use the arrivals substream, marks the
/// marks substream.
EventStream simulate_path(const KernelSpec& spec, double horizon, StreamKey key,
                          const SimulationOptions& options = {});

// m + sum_{T_i < t} f(t - T_i, X_i). Events at exactly t are excluded.
double intensity_at(const KernelSpec& spec, const EventStream& stream, double t);

// N(t, A).
std::size_t count(const EventStream& stream, double t, const MarkSet& A = MarkSet::all());

/// Claim size law; each variant has a closed-form mean.
class ClaimLaw {
public:
    struct Constant { double value = 0.0; };
    struct Exponential { double mean = 1.0; };
    struct LogNormal { double mu = 0.0; double sigma = 1.0; };
    using Variant = std::variant<Constant, Exponential, LogNormal>;

    ClaimLaw() : impl_(Constant{0.0}) {}
    explicit ClaimLaw(Variant impl);

    static ClaimLaw constant(double value) { return ClaimLaw(Constant{value}); }
    static ClaimLaw exponential(double mean) { return ClaimLaw(Exponential{mean}); }
    static ClaimLaw lognormal(double mu, double sigma) { return ClaimLaw(LogNormal{mu, sigma}); }

    double mean() const;
    double sample(RngStream& rng) const;
    const Variant& variant() const noexcept { return impl_; }

private:
    Variant impl_;
};

// Claim laws keyed by discrete mark index, with a fallback for the rest.
struct ClaimLaws {
    ClaimLaw fallback;
    std::map<std::uint32_t, ClaimLaw> per_mark;

    const ClaimLaw& for_mark(std::uint32_t index) const;
};

// C^A_t: sum of N(t, A) i.i.d. draws from law.
double compound_CA(const EventStream& stream, const MarkSet& A, const ClaimLaw& law, RngStream& rng, double t);

// D^phi_t = sum_{T_n <= t} phi(X_n).
double compound_Dphi(const EventStream& stream, const MarkFunction& phi, double t);

struct RuinPath {
    std::vector<double> surplus;
    std::optional<double> ruin_time;
};

/// Surplus r + c t - (claims up to t) at each query time, one claim per event
/// drawn from the law of the event's mark. ruin_time is the first event time
/// not after the last query time at which the surplus drops below zero.
RuinPath ruin_path(const EventStream& stream, double r, double c, const ClaimLaws& laws, RngStream& rng,
                   std::span<const double> times);

}  // namespace hawkes
