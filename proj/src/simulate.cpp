#include "hawkes/simulate.hpp"

#include "hawkes/format.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

namespace hawkes {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class U>
void put_le(std::string& out, U value) {
    for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
}

template <class U>
U get_le(std::string_view bytes, std::size_t offset) {
    U value = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i)
        value |= static_cast<U>(static_cast<unsigned char>(bytes[offset + i])) << (8 * i);
    return value;
}

void check_cap(std::vector<Event>& events, const SimulationOptions& options, double horizon) {
    if (events.size() <= options.event_cap) return;
    const std::string what =
        "event cap of " + std::to_string(options.event_cap) + " exceeded at t = " + format_double(events.back().time);
    events.pop_back();
    throw PartialPathError(what, EventStream(std::move(events), horizon));
}

}  // namespace

// ---------------------------------------------------------------------------
// EventStream

EventStream::EventStream(std::vector<Event> events, double horizon) : events_(std::move(events)), horizon_(horizon) {
    if (!(horizon_ >= 0.0 && std::isfinite(horizon_))) throw std::invalid_argument("event stream horizon must be >= 0");
    double prev = 0.0;
    for (const auto& e : events_) {
        if (!(e.time > prev)) throw std::invalid_argument("event times must be positive and strictly increasing");
        if (e.time > horizon_) throw std::invalid_argument("event time beyond the stream horizon");
        prev = e.time;
    }
}

std::string EventStream::to_csv(const MarkDistribution& marks) const {
    std::string out = "time,mark\n";
    for (const auto& e : events_) {
        out += format_double(e.time);
        out += ',';
        out += marks.is_discrete() ? csv_field(marks.label(e.mark.index)) : format_double(e.mark.value);
        out += '\n';
    }
    return out;
}

std::string EventStream::to_binary() const {
    std::string out;
    out.reserve(8 + events_.size() * 12);
    put_le<std::uint64_t>(out, events_.size());
    for (const auto& e : events_) {
        put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(e.time));
        put_le<std::uint32_t>(out, e.mark.index);
    }
    return out;
}

EventStream EventStream::from_binary(std::string_view bytes, const MarkDistribution& marks, double horizon) {
    if (!marks.is_discrete()) throw std::invalid_argument("binary event streams need a discrete mark space");
    if (bytes.size() < 8) throw std::invalid_argument("binary event stream: missing length prefix");
    const auto n = get_le<std::uint64_t>(bytes, 0);
    if ((bytes.size() - 8) / 12 < n || bytes.size() != 8 + n * 12)
        throw std::invalid_argument("binary event stream: length prefix does not match payload");
    std::vector<Event> events;
    events.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        const std::size_t off = 8 + i * 12;
        const double t = std::bit_cast<double>(get_le<std::uint64_t>(bytes, off));
        const auto idx = get_le<std::uint32_t>(bytes, off + 8);
        if (idx >= marks.size()) throw std::invalid_argument("binary event stream: mark index out of range");
        events.push_back(Event{t, marks.mark(idx)});
    }
    return EventStream(std::move(events), horizon);
}

// ---------------------------------------------------------------------------
// Simulation

EventStream simulate_path(const KernelSpec& spec, double horizon, StreamKey key, const SimulationOptions& options) {
    if (!(horizon > 0.0 && std::isfinite(horizon))) throw std::domain_error("simulate_path: horizon must be > 0");

    RngStream arrivals(key, Substream::arrivals);
    RngStream mark_rng(key, Substream::marks);
    const double m = spec.base_rate();
    const ExcitationFunction& f = spec.excitation();
    std::vector<Event> events;
    double t = 0.0;

    auto accept = [&](double at) -> const Event& {
        events.push_back(Event{at, spec.marks().sample(mark_rng)});
        check_cap(events, options, horizon);
        return events.back();
    };

    if (const auto* e = f.as_exponential()) {
        // s is the excitation sum at t+, decayed exactly between proposals.
        double s = 0.0;
        for (;;) {
            const double bound = m + s;
            if (!(bound > 0.0)) break;
            const double w = arrivals.exponential(bound);
            t += w;
            if (t > horizon) break;
            s *= std::exp(-e->beta * w);
            const double lambda = m + s;
            if (arrivals.uniform() * bound <= lambda && (events.empty() || t > events.back().time)) {
                const Event& ev = accept(t);
                s += e->alpha * e->modulation(ev.mark);
            }
        }
    } else {
        std::vector<double> weights;  // g(X_i) per accepted event
        for (;;) {
            double bound = m;
            for (std::size_t i = 0; i < events.size(); ++i) bound += weights[i] * f.envelope(t - events[i].time);
            if (!(bound > 0.0)) break;
            const double w = arrivals.exponential(bound);
            t += w;
            if (t > horizon) break;
            double lambda = m;
            for (std::size_t i = 0; i < events.size(); ++i) lambda += weights[i] * f.profile(t - events[i].time);
            if (arrivals.uniform() * bound <= lambda && (events.empty() || t > events.back().time)) {
                const Event& ev = accept(t);
                weights.push_back(f.modulation(ev.mark));
            }
        }
    }
    return EventStream(std::move(events), horizon);
}

double intensity_at(const KernelSpec& spec, const EventStream& stream, double t) {
    double lambda = spec.base_rate();
    const ExcitationFunction& f = spec.excitation();
    if (f.is_zero()) return lambda;
    for (const auto& e : stream.events()) {
        if (!(e.time < t)) break;
        lambda += f(t - e.time, e.mark);
    }
    return lambda;
}

std::size_t count(const EventStream& stream, double t, const MarkSet& A) {
    std::size_t n = 0;
    for (const auto& e : stream.events()) {
        if (e.time > t) break;
        if (A.contains(e.mark)) ++n;
    }
    return n;
}

// ---------------------------------------------------------------------------
// Claims

ClaimLaw::ClaimLaw(Variant impl) : impl_(std::move(impl)) {
    if (auto* c = std::get_if<Constant>(&impl_)) {
        if (!(c->value >= 0.0 && std::isfinite(c->value))) throw std::invalid_argument("constant claim must be >= 0");
    } else if (auto* e = std::get_if<Exponential>(&impl_)) {
        if (!(e->mean > 0.0 && std::isfinite(e->mean))) throw std::invalid_argument("exponential claim mean must be > 0");
    } else {
        const auto& l = std::get<LogNormal>(impl_);
        if (!(std::isfinite(l.mu) && l.sigma >= 0.0 && std::isfinite(l.sigma)))
            throw std::invalid_argument("lognormal claim needs finite mu and sigma >= 0");
    }
}

double ClaimLaw::mean() const {
    if (auto* c = std::get_if<Constant>(&impl_)) return c->value;
    if (auto* e = std::get_if<Exponential>(&impl_)) return e->mean;
    const auto& l = std::get<LogNormal>(impl_);
    return std::exp(l.mu + 0.5 * l.sigma * l.sigma);
}

double ClaimLaw::sample(RngStream& rng) const {
    if (auto* c = std::get_if<Constant>(&impl_)) return c->value;
    if (auto* e = std::get_if<Exponential>(&impl_)) return -e->mean * std::log(rng.uniform());
    const auto& l = std::get<LogNormal>(impl_);
    return std::exp(l.mu + l.sigma * rng.normal());
}

const ClaimLaw& ClaimLaws::for_mark(std::uint32_t index) const {
    auto it = per_mark.find(index);
    return it == per_mark.end() ? fallback : it->second;
}

double compound_CA(const EventStream& stream, const MarkSet& A, const ClaimLaw& law, RngStream& rng, double t) {
    const std::size_t n = count(stream, t, A);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += law.sample(rng);
    return total;
}

double compound_Dphi(const EventStream& stream, const MarkFunction& phi, double t) {
    double total = 0.0;
    for (const auto& e : stream.events()) {
        if (e.time > t) break;
        total += phi(e.mark);
    }
    return total;
}

RuinPath ruin_path(const EventStream& stream, double r, double c, const ClaimLaws& laws, RngStream& rng,
                   std::span<const double> times) {
    if (!(r >= 0.0)) throw std::domain_error("ruin_path: initial capital must be >= 0");
    if (!(c >= 0.0)) throw std::domain_error("ruin_path: premium rate must be >= 0");
    const double last_query =
        times.empty() ? stream.horizon() : *std::max_element(times.begin(), times.end());

    // Cumulative claims after each event, in event order.
    const auto& events = stream.events();
    std::vector<double> cumulative;
    cumulative.reserve(events.size());
    RuinPath out;
    double claims = 0.0;
    for (const auto& e : events) {
        claims += laws.for_mark(e.mark.index).sample(rng);
        cumulative.push_back(claims);
        if (!out.ruin_time && e.time <= last_query && r + c * e.time - claims < 0.0) out.ruin_time = e.time;
    }

    out.surplus.reserve(times.size());
    for (double t : times) {
        auto it = std::upper_bound(events.begin(), events.end(), t,
                                   [](double x, const Event& e) { return x < e.time; });
        const auto k = static_cast<std::size_t>(it - events.begin());
        const double paid = k == 0 ? 0.0 : cumulative[k - 1];
        out.surplus.push_back(r + c * t - paid);
    }
    return out;
}

}  // namespace hawkes
