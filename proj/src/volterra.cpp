#include "hawkes/volterra.hpp"

#include "hawkes/errors.hpp"
#include "hawkes/format.hpp"
#include "hawkes/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hawkes {

namespace {

// sum_{k=0}^{len-1} a[k] * b[k] with four interleaved partial sums; the
// summation order is fixed so results do not depend on the build.
double dot(const double* a, const double* b, std::size_t len) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t k = 0;
    for (; k + 4 <= len; k += 4) {
        s0 += a[k] * b[k];
        s1 += a[k + 1] * b[k + 1];
        s2 += a[k + 2] * b[k + 2];
        s3 += a[k + 3] * b[k + 3];
    }
    for (; k < len; ++k) s0 += a[k] * b[k];
    return (s0 + s1) + (s2 + s3);
}

void require_same_grid(const GridFunction& a, const GridFunction& b) {
    if (!a.same_grid(b))
        throw GridMismatchError("grid functions differ in step or span (dt " + format_double(a.dt()) + " vs " +
                                format_double(b.dt()) + ", nodes " + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
}

void require_on_grid(const GridFunction& g, double t, const char* what) {
    const double slack = 1e-9 * std::max(1.0, g.horizon());
    if (!(t >= 0.0 && t <= g.horizon() + slack))
        throw std::domain_error(std::string(what) + ": t = " + format_double(t) + " outside [0, " +
                                format_double(g.horizon()) + "]");
}

// Node index i and offset h in [0, dt) with t = i dt + h.
std::pair<std::size_t, double> locate(const GridFunction& g, double t) {
    const double pos = t / g.dt();
    auto i = static_cast<std::size_t>(std::floor(pos + 1e-9));
    if (i >= g.size() - 1) return {g.size() - 1, 0.0};
    double h = t - g.time(i);
    if (h < 0.0) h = 0.0;
    return {i, h};
}

// Linear interpolation of g at time(i) + h.
double interpolate(const GridFunction& g, std::size_t i, double h) {
    if (h == 0.0 || i + 1 >= g.size()) return g[i];
    const double w = h / g.dt();
    return g[i] + w * (g[i + 1] - g[i]);
}

}  // namespace

// ---------------------------------------------------------------------------
// GridFunction

GridFunction::GridFunction(double dt, std::vector<double> values) : dt_(dt), values_(std::move(values)) {
    if (!(dt_ > 0.0 && std::isfinite(dt_))) throw std::invalid_argument("grid step dt must be finite and > 0");
    if (values_.empty()) throw std::invalid_argument("grid function needs at least one node");
    for (double v : values_)
        if (!std::isfinite(v)) throw std::invalid_argument("grid function values must be finite");
}

GridFunction GridFunction::sample(const std::function<double(double)>& fn, double dt, double horizon) {
    if (!(dt > 0.0 && std::isfinite(dt))) throw std::invalid_argument("grid step dt must be finite and > 0");
    if (!(horizon >= 0.0 && std::isfinite(horizon))) throw std::invalid_argument("grid horizon must be >= 0");
    const double steps = horizon / dt;
    const double rounded = std::round(steps);
    if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps))
        throw std::invalid_argument("grid horizon " + format_double(horizon) + " is not a multiple of dt " +
                                    format_double(dt));
    const auto n = static_cast<std::size_t>(rounded) + 1;
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = fn(dt * static_cast<double>(i));
    return GridFunction(dt, std::move(values));
}

GridFunction GridFunction::zeros(double dt, double horizon) {
    return sample([](double) { return 0.0; }, dt, horizon);
}

bool GridFunction::same_grid(const GridFunction& other) const noexcept {
    return values_.size() == other.values_.size() && std::abs(dt_ - other.dt_) <= 1e-12 * dt_;
}

double GridFunction::integral() const {
    if (values_.size() < 2) return 0.0;
    double s = 0.5 * (values_.front() + values_.back());
    for (std::size_t i = 1; i + 1 < values_.size(); ++i) s += values_[i];
    return s * dt_;
}

double GridFunction::first_moment() const {
    if (values_.size() < 2) return 0.0;
    double s = 0.5 * time(values_.size() - 1) * values_.back();
    for (std::size_t i = 1; i + 1 < values_.size(); ++i) s += time(i) * values_[i];
    return s * dt_;
}

double GridFunction::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

std::string GridFunction::to_csv() const {
    std::string out = "t,value\n";
    out.reserve(values_.size() * 24);
    for (std::size_t i = 0; i < values_.size(); ++i) {
        out += format_double(time(i));
        out += ',';
        out += format_double(values_[i]);
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Grid arithmetic

GridFunction convolve(const GridFunction& f, const GridFunction& g) {
    require_same_grid(f, g);
    const std::size_t n = f.size();
    const double dt = f.dt();
    // f reversed, so that f[i - k] for k = 0..i is the contiguous run
    // rev[n-1-i .. n-1].
    std::vector<double> rev(f.values().rbegin(), f.values().rend());
    std::vector<double> out(n, 0.0);
    const double* gv = g.values().data();
    for (std::size_t i = 1; i < n; ++i) {
        const double full = dot(rev.data() + (n - 1 - i), gv, i + 1);
        out[i] = dt * (full - 0.5 * (f[i] * g[0] + f[0] * g[i]));
    }
    return GridFunction(dt, std::move(out));
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b);
    std::vector<double> v(a.values());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += b[i];
    return GridFunction(a.dt(), std::move(v));
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b);
    std::vector<double> v(a.values());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= b[i];
    return GridFunction(a.dt(), std::move(v));
}

// ---------------------------------------------------------------------------
// Resolvent

namespace {

GridFunction neumann_resolvent(const GridFunction& F, double rho, double tol, int& terms, double& tail) {
    GridFunction sum = F;
    GridFunction term = F;
    terms = 1;
    auto tail_after = [rho](int n) { return std::pow(rho, n + 1) / (1.0 - rho); };
    while (tail_after(terms) >= tol) {
        term = convolve(term, F);
        sum = sum + term;
        ++terms;
    }
    tail = tail_after(terms);
    return sum;
}

GridFunction direct_resolvent(const GridFunction& F) {
    const std::size_t n = F.size();
    const double dt = F.dt();
    if (!(F[0] * dt < 1.0))
        throw std::domain_error("direct resolvent needs F(0) dt < 1 (F(0) = " + format_double(F[0]) +
                                ", dt = " + format_double(dt) + ")");
    const double denom = 1.0 - 0.5 * dt * F[0];
    std::vector<double> rev(F.values().rbegin(), F.values().rend());
    std::vector<double> R(n, 0.0);
    R[0] = F[0];
    for (std::size_t i = 1; i < n; ++i) {
        // sum_{k=1}^{i-1} F[i-k] R[k]
        const double interior = i > 1 ? dot(rev.data() + (n - i), R.data() + 1, i - 1) : 0.0;
        const double s = 0.5 * F[i] * R[0] + interior;
        R[i] = (F[i] + dt * s) / denom;
    }
    return GridFunction(dt, std::move(R));
}

}  // namespace

ResolventResult resolvent(const GridFunction& F, double branching_ratio, double tol, ResolventMethod method) {
    if (!(branching_ratio >= 0.0))
        throw std::domain_error("resolvent: branching ratio must be >= 0");
    if (!(branching_ratio < 1.0))
        throw InstabilityError("resolvent: branching ratio " + format_double(branching_ratio) + " is not < 1");
    if (!(tol > 0.0)) throw std::domain_error("resolvent: tol must be > 0");
    for (double v : F.values())
        if (v < 0.0) throw std::invalid_argument("resolvent: F must be non-negative");

    ResolventResult out;
    out.branching_ratio = branching_ratio;
    out.kernel_first_moment = F.first_moment();
    if (method == ResolventMethod::neumann) {
        out.R = neumann_resolvent(F, branching_ratio, tol, out.neumann_terms_used, out.l1_tail_bound);
    } else {
        out.R = direct_resolvent(F);
    }
    out.l1_norm_truncated = out.R.integral();
    out.first_moment = out.R.first_moment();
    return out;
}

GridFunction marginal_excitation_grid(const KernelSpec& spec, double dt, double horizon) {
    return GridFunction::sample([&spec](double t) { return marginal_excitation(spec, t); }, dt, horizon);
}

double default_horizon(const KernelSpec& spec, double multiplier) {
    if (!(multiplier > 0.0)) throw std::invalid_argument("horizon multiplier must be > 0");
    const auto& f = spec.excitation();
    if (auto* e = f.as_exponential()) return multiplier / e->beta;
    if (auto* s = std::get_if<ExcitationFunction::Separable>(&f.variant())) {
        if (auto* p = std::get_if<TimeProfile::PowerLaw>(&s->profile.variant())) return multiplier * p->scale;
        if (auto* e = std::get_if<TimeProfile::Erlang>(&s->profile.variant())) return multiplier / e->rate;
    }
    return multiplier;
}

ResolventResult kernel_resolvent(const KernelSpec& spec, double dt, double horizon, double tol,
                                 ResolventMethod method) {
    if (!spec.is_stable())
        throw InstabilityError("resolvent needs a stable kernel (branching ratio " +
                               format_double(spec.branching_ratio()) + ")");
    if (horizon <= 0.0) {
        // Round the default span up to a whole number of steps.
        horizon = std::ceil(default_horizon(spec) / dt - 1e-9) * dt;
    }
    return resolvent(marginal_excitation_grid(spec, dt, horizon), spec.branching_ratio(), tol, method);
}

double expected_intensity(double base_rate, const ResolventResult& R, double t) {
    const GridFunction& g = R.R;
    require_on_grid(g, t, "expected_intensity");
    const auto [i, h] = locate(g, t);
    double integral = 0.0;
    for (std::size_t k = 0; k < i; ++k) integral += 0.5 * (g[k] + g[k + 1]);
    integral *= g.dt();
    if (h > 0.0) integral += 0.5 * h * (g[i] + interpolate(g, i, h));
    return base_rate * (1.0 + integral);
}

double expected_count(double base_rate, double qA, const ResolventResult& R, double t) {
    if (!(qA >= 0.0 && qA <= 1.0)) throw std::domain_error("expected_count: Q(A) must lie in [0, 1]");
    const GridFunction& g = R.R;
    require_on_grid(g, t, "expected_count");
    const auto [i, h] = locate(g, t);
    // Trapezoid of (t - u) R(u) over the nodes up to i, then the partial step.
    auto integrand = [&](std::size_t k) { return (t - g.time(k)) * g[k]; };
    double integral = 0.0;
    for (std::size_t k = 0; k < i; ++k) integral += 0.5 * (integrand(k) + integrand(k + 1));
    integral *= g.dt();
    if (h > 0.0) integral += 0.5 * h * integrand(i);  // integrand vanishes at u = t
    return qA * base_rate * (t + integral);
}

FirstMomentCheck first_moment_R(const ResolventResult& R) {
    FirstMomentCheck out;
    out.value = R.first_moment;
    const double gap = 1.0 - R.branching_ratio;
    out.bound = R.kernel_first_moment / (gap * gap);
    return out;
}

double check_integrability_condition(const KernelSpec& spec, double resolvent_l1) {
    const double scale = 1.0 + resolvent_l1;
    return scale * scale * spec.squared_l1_moment();
}

double check_integrability_condition(const KernelSpec& spec, const ResolventResult& R) {
    return check_integrability_condition(spec, R.l1_norm_truncated);
}

}  // namespace hawkes
