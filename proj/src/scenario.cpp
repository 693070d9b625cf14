#include "hawkes/scenario.hpp"

#include "hawkes/errors.hpp"
#include "hawkes/format.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace hawkes {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Subcommands

namespace {

struct SubcommandEntry {
    Subcommand value;
    std::string_view name;
};

constexpr SubcommandEntry kSubcommands[] = {
    {Subcommand::simulate, "simulate"},         {Subcommand::resolvent, "resolvent"},
    {Subcommand::moments, "moments"},           {Subcommand::lln_count, "lln-count"},
    {Subcommand::lln_compound, "lln-compound"}, {Subcommand::lln_dphi, "lln-dphi"},
    {Subcommand::ruin, "ruin"},                 {Subcommand::netprofit, "netprofit"},
};

}  // namespace

std::string_view subcommand_name(Subcommand s) {
    for (const auto& e : kSubcommands)
        if (e.value == s) return e.name;
    return "unknown";
}

std::optional<Subcommand> parse_subcommand(std::string_view name) {
    for (const auto& e : kSubcommands)
        if (e.name == name) return e.value;
    return std::nullopt;
}

const std::vector<std::string>& subcommand_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& e : kSubcommands) out.emplace_back(e.name);
        return out;
    }();
    return names;
}

ScenarioError::ScenarioError(Kind kind, std::vector<std::string> messages)
    : std::runtime_error([&] {
          std::string s(error_kind_name(kind));
          for (const auto& m : messages) s += "\n  " + m;
          return s;
      }()),
      kind_(kind),
      messages_(std::move(messages)) {}

std::string_view error_kind_name(ScenarioError::Kind kind) {
    switch (kind) {
        case ScenarioError::Kind::missing_file: return "missing file";
        case ScenarioError::Kind::syntax: return "malformed JSON";
        case ScenarioError::Kind::schema: return "schema violation";
        case ScenarioError::Kind::instability: return "unstable kernel";
    }
    return "error";
}

// ---------------------------------------------------------------------------
// Structural reader

namespace {

class Reader {
public:
    std::vector<std::string> errors;

    void fail(const std::string& path, const std::string& msg) { errors.push_back(path + ": " + msg); }

    // True if j is an object; reports every key outside `allowed`.
    bool object(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
        if (!j.is_object()) {
            fail(path, "expected an object");
            return false;
        }
        for (const auto& [key, _] : j.items()) {
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
                fail(path + "/" + key, "unknown key");
        }
        return true;
    }

    const json* member(const json& obj, const std::string& path, const char* key, bool required) {
        auto it = obj.find(key);
        if (it == obj.end()) {
            if (required) fail(path + "/" + key, "required key missing");
            return nullptr;
        }
        return &*it;
    }

    void number(const json& obj, const std::string& path, const char* key, double& out, bool required = false) {
        if (const json* j = member(obj, path, key, required)) {
            if (!j->is_number()) return fail(path + "/" + key, "expected a number");
            out = j->get<double>();
        }
    }

    void optional_number(const json& obj, const std::string& path, const char* key, std::optional<double>& out) {
        if (const json* j = member(obj, path, key, false)) {
            if (!j->is_number()) return fail(path + "/" + key, "expected a number");
            out = j->get<double>();
        }
    }

    template <class Int>
    void unsigned_integer(const json& obj, const std::string& path, const char* key, Int& out) {
        if (const json* j = member(obj, path, key, false)) {
            if (!j->is_number_unsigned()) return fail(path + "/" + key, "expected a non-negative integer");
            out = j->get<Int>();
        }
    }

    void boolean(const json& obj, const std::string& path, const char* key, bool& out) {
        if (const json* j = member(obj, path, key, false)) {
            if (!j->is_boolean()) return fail(path + "/" + key, "expected true or false");
            out = j->get<bool>();
        }
    }

    void string(const json& obj, const std::string& path, const char* key, std::string& out, bool required = false) {
        if (const json* j = member(obj, path, key, required)) {
            if (!j->is_string()) return fail(path + "/" + key, "expected a string");
            out = j->get<std::string>();
        }
    }

    void number_list(const json& obj, const std::string& path, const char* key, std::vector<double>& out) {
        if (const json* j = member(obj, path, key, false)) {
            if (!j->is_array()) return fail(path + "/" + key, "expected an array of numbers");
            out.clear();
            for (std::size_t i = 0; i < j->size(); ++i) {
                if (!(*j)[i].is_number()) {
                    fail(path + "/" + key + "/" + std::to_string(i), "expected a number");
                    continue;
                }
                out.push_back((*j)[i].get<double>());
            }
        }
    }

    void string_list(const json& obj, const std::string& path, const char* key, std::vector<std::string>& out) {
        if (const json* j = member(obj, path, key, false)) {
            if (!j->is_array()) return fail(path + "/" + key, "expected an array of strings");
            out.clear();
            for (std::size_t i = 0; i < j->size(); ++i) {
                if (!(*j)[i].is_string()) {
                    fail(path + "/" + key + "/" + std::to_string(i), "expected a string");
                    continue;
                }
                out.push_back((*j)[i].get<std::string>());
            }
        }
    }

    // Reads `type` and returns it if one of `types`; reports otherwise.
    std::optional<std::string> type(const json& j, const std::string& path,
                                    std::initializer_list<std::string_view> types) {
        if (!j.is_object()) {
            fail(path, "expected an object");
            return std::nullopt;
        }
        std::string t;
        string(j, path, "type", t, true);
        if (t.empty()) return std::nullopt;
        if (std::find(types.begin(), types.end(), t) == types.end()) {
            std::string list;
            for (auto s : types) list += (list.empty() ? "" : ", ") + std::string(s);
            fail(path + "/type", "unknown type '" + t + "' (expected one of: " + list + ")");
            return std::nullopt;
        }
        return t;
    }
};

MarkFunctionConfig read_mark_function(Reader& r, const json& j, const std::string& path) {
    MarkFunctionConfig c;
    auto t = r.type(j, path, {"constant", "identity", "power", "exp_decay", "table", "indicator"});
    if (!t) return c;
    c.type = *t;
    if (c.type == "constant") {
        r.object(j, path, {"type", "value"});
        r.number(j, path, "value", c.value, true);
    } else if (c.type == "identity") {
        r.object(j, path, {"type"});
    } else if (c.type == "power") {
        r.object(j, path, {"type", "exponent"});
        r.number(j, path, "exponent", c.exponent, true);
    } else if (c.type == "exp_decay") {
        r.object(j, path, {"type", "rate"});
        r.number(j, path, "rate", c.rate, true);
    } else if (c.type == "table") {
        r.object(j, path, {"type", "values"});
        if (const json* v = r.member(j, path, "values", true)) {
            if (!v->is_object()) {
                r.fail(path + "/values", "expected an object mapping mark labels to numbers");
            } else {
                for (const auto& [label, value] : v->items()) {
                    if (!value.is_number())
                        r.fail(path + "/values/" + label, "expected a number");
                    else
                        c.table[label] = value.get<double>();
                }
            }
        }
    } else {
        r.object(j, path, {"type", "low", "high"});
        r.number(j, path, "low", c.low, true);
        r.number(j, path, "high", c.high, true);
    }
    return c;
}

ExcitationConfig read_excitation(Reader& r, const json& j, const std::string& path) {
    ExcitationConfig c;
    auto t = r.type(j, path, {"zero", "exponential", "power_law", "erlang"});
    if (!t) return c;
    c.type = *t;
    if (c.type == "zero") {
        r.object(j, path, {"type"});
        return c;
    }
    if (c.type == "exponential") {
        r.object(j, path, {"type", "alpha", "beta", "mark_modulation"});
        r.number(j, path, "alpha", c.alpha, true);
        r.number(j, path, "beta", c.beta, true);
    } else if (c.type == "power_law") {
        r.object(j, path, {"type", "amplitude", "scale", "shape", "mark_modulation"});
        r.number(j, path, "amplitude", c.amplitude, true);
        r.number(j, path, "scale", c.scale, true);
        r.number(j, path, "shape", c.shape, true);
    } else {
        r.object(j, path, {"type", "amplitude", "rate", "mark_modulation"});
        r.number(j, path, "amplitude", c.amplitude, true);
        r.number(j, path, "rate", c.rate, true);
    }
    if (const json* g = r.member(j, path, "mark_modulation", false))
        c.modulation = read_mark_function(r, *g, path + "/mark_modulation");
    return c;
}

MarksConfig read_marks(Reader& r, const json& j, const std::string& path) {
    MarksConfig c;
    auto t = r.type(j, path, {"discrete", "uniform", "exponential"});
    if (!t) return c;
    c.type = *t;
    if (c.type == "discrete") {
        r.object(j, path, {"type", "points"});
        if (const json* pts = r.member(j, path, "points", true)) {
            if (!pts->is_array()) {
                r.fail(path + "/points", "expected an array");
            } else {
                for (std::size_t i = 0; i < pts->size(); ++i) {
                    const std::string p = path + "/points/" + std::to_string(i);
                    MarkPointConfig point;
                    if (r.object((*pts)[i], p, {"label", "value", "prob"})) {
                        r.string((*pts)[i], p, "label", point.label, true);
                        r.optional_number((*pts)[i], p, "value", point.value);
                        r.number((*pts)[i], p, "prob", point.prob, true);
                    }
                    c.points.push_back(std::move(point));
                }
            }
        }
    } else if (c.type == "uniform") {
        r.object(j, path, {"type", "low", "high"});
        r.number(j, path, "low", c.low, true);
        r.number(j, path, "high", c.high, true);
    } else {
        r.object(j, path, {"type", "rate"});
        r.number(j, path, "rate", c.rate, true);
    }
    return c;
}

KernelConfig read_kernel(Reader& r, const json& j, const std::string& path) {
    KernelConfig c;
    if (!r.object(j, path, {"base_rate", "excitation", "marks", "allow_unstable"})) return c;
    r.number(j, path, "base_rate", c.base_rate, true);
    if (const json* e = r.member(j, path, "excitation", true)) c.excitation = read_excitation(r, *e, path + "/excitation");
    if (const json* m = r.member(j, path, "marks", true)) c.marks = read_marks(r, *m, path + "/marks");
    r.boolean(j, path, "allow_unstable", c.allow_unstable);
    return c;
}

ClaimLawConfig read_claim_law(Reader& r, const json& j, const std::string& path) {
    ClaimLawConfig c;
    auto t = r.type(j, path, {"constant", "exponential", "lognormal"});
    if (!t) return c;
    c.type = *t;
    if (c.type == "constant") {
        r.object(j, path, {"type", "value"});
        r.number(j, path, "value", c.value, true);
    } else if (c.type == "exponential") {
        r.object(j, path, {"type", "mean"});
        r.number(j, path, "mean", c.mean, true);
    } else {
        r.object(j, path, {"type", "mu", "sigma"});
        r.number(j, path, "mu", c.mu, true);
        r.number(j, path, "sigma", c.sigma, true);
    }
    return c;
}

TargetSetConfig read_target_set(Reader& r, const json& j, const std::string& path) {
    TargetSetConfig c;
    auto t = r.type(j, path, {"all", "labels", "interval"});
    if (!t) return c;
    c.type = *t;
    if (c.type == "all") {
        r.object(j, path, {"type"});
    } else if (c.type == "labels") {
        r.object(j, path, {"type", "labels"});
        if (!j.contains("labels")) r.fail(path + "/labels", "required key missing");
        r.string_list(j, path, "labels", c.labels);
    } else {
        r.object(j, path, {"type", "low", "high"});
        r.number(j, path, "low", c.low, true);
        r.number(j, path, "high", c.high, true);
    }
    return c;
}

ExperimentConfig read_experiment(Reader& r, const json& j, const std::string& path) {
    ExperimentConfig c;
    if (!r.object(j, path,
                  {"horizon", "T_grid", "v", "replications", "target_set", "claims", "premium", "initial_capital",
                   "phi", "query_times", "epsilon", "mean_tolerance", "max_exceedance", "min_sign_fraction",
                   "event_cap"}))
        return c;
    r.optional_number(j, path, "horizon", c.horizon);
    r.number_list(j, path, "T_grid", c.T_grid);
    r.number_list(j, path, "v", c.v);
    r.unsigned_integer(j, path, "replications", c.replications);
    if (const json* t = r.member(j, path, "target_set", false)) c.target_set = read_target_set(r, *t, path + "/target_set");
    if (const json* cl = r.member(j, path, "claims", false)) {
        const std::string p = path + "/claims";
        if (r.object(*cl, p, {"default", "per_mark"})) {
            if (const json* d = r.member(*cl, p, "default", false)) c.claims.fallback = read_claim_law(r, *d, p + "/default");
            if (const json* pm = r.member(*cl, p, "per_mark", false)) {
                if (!pm->is_object()) {
                    r.fail(p + "/per_mark", "expected an object mapping mark labels to claim laws");
                } else {
                    for (const auto& [label, law] : pm->items())
                        c.claims.per_mark[label] = read_claim_law(r, law, p + "/per_mark/" + label);
                }
            }
        }
    }
    r.number(j, path, "premium", c.premium);
    r.number(j, path, "initial_capital", c.initial_capital);
    if (const json* phi = r.member(j, path, "phi", false)) c.phi = read_mark_function(r, *phi, path + "/phi");
    r.number_list(j, path, "query_times", c.query_times);
    r.optional_number(j, path, "epsilon", c.epsilon);
    r.number(j, path, "mean_tolerance", c.mean_tolerance);
    r.number(j, path, "max_exceedance", c.max_exceedance);
    r.number(j, path, "min_sign_fraction", c.min_sign_fraction);
    r.unsigned_integer(j, path, "event_cap", c.event_cap);
    return c;
}

NumericsConfig read_numerics(Reader& r, const json& j, const std::string& path) {
    NumericsConfig c;
    if (!r.object(j, path, {"dt", "tol", "horizon_multiplier", "horizon", "method"})) return c;
    r.number(j, path, "dt", c.dt);
    r.number(j, path, "tol", c.tol);
    r.number(j, path, "horizon_multiplier", c.horizon_multiplier);
    r.optional_number(j, path, "horizon", c.horizon);
    r.string(j, path, "method", c.method);
    return c;
}

// ---------------------------------------------------------------------------
// Semantic validation

void check(Reader& r, bool ok, const std::string& path, const std::string& msg) {
    if (!ok) r.fail(path, msg);
}

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }
bool finite_pos(double x) { return std::isfinite(x) && x > 0.0; }

void check_labels_exist(Reader& r, const MarksConfig& marks, const std::vector<std::string>& labels,
                        const std::string& path) {
    if (marks.type != "discrete") {
        r.fail(path, "mark labels need a discrete mark distribution");
        return;
    }
    std::set<std::string> known;
    for (const auto& p : marks.points) known.insert(p.label);
    for (const auto& l : labels)
        if (!known.count(l)) r.fail(path, "unknown mark label '" + l + "'");
}

void check_mark_function(Reader& r, const MarkFunctionConfig& f, const MarksConfig& marks, const std::string& path) {
    if (f.type != "table") return;
    std::vector<std::string> keys;
    for (const auto& [k, _] : f.table) keys.push_back(k);
    check_labels_exist(r, marks, keys, path + "/values");
    if (marks.type == "discrete")
        for (const auto& p : marks.points)
            if (!f.table.count(p.label)) r.fail(path + "/values", "no value for mark label '" + p.label + "'");
}

struct Validation {
    std::vector<std::string> schema;
    std::vector<std::string> instability;
};

Validation validate(const ScenarioConfig& c, std::optional<Subcommand> sub, std::vector<std::string> structural) {
    Reader r;
    r.errors = std::move(structural);

    check(r, c.version == kScenarioSchemaVersion, "/version",
          "unsupported schema version " + std::to_string(c.version) + " (expected " +
              std::to_string(kScenarioSchemaVersion) + ")");

    // Kernel.
    const auto& k = c.kernel;
    check(r, finite_nonneg(k.base_rate), "/kernel/base_rate", "must be finite and >= 0");
    check_mark_function(r, k.excitation.modulation, k.marks, "/kernel/excitation/mark_modulation");

    std::optional<KernelSpec> spec;
    const bool kernel_clean = std::none_of(r.errors.begin(), r.errors.end(),
                                           [](const std::string& e) { return e.rfind("/kernel", 0) == 0; });
    if (kernel_clean) {
        try {
            spec.emplace(build_kernel(KernelConfig{k.base_rate, k.excitation, k.marks, true}));
        } catch (const std::exception& e) {
            r.fail("/kernel", e.what());
        }
    }

    // Experiment.
    const auto& x = c.experiment;
    const std::string xp = "/experiment";
    if (x.horizon) check(r, finite_pos(*x.horizon), xp + "/horizon", "must be finite and > 0");
    for (std::size_t i = 0; i < x.T_grid.size(); ++i)
        check(r, finite_pos(x.T_grid[i]), xp + "/T_grid/" + std::to_string(i), "must be finite and > 0");
    check(r, !x.v.empty(), xp + "/v", "must list at least one value");
    for (std::size_t i = 0; i < x.v.size(); ++i)
        check(r, finite_nonneg(x.v[i]), xp + "/v/" + std::to_string(i), "must be finite and >= 0");
    check(r, x.replications >= 2, xp + "/replications", "must be at least 2");
    if (x.target_set.type == "labels") check_labels_exist(r, k.marks, x.target_set.labels, xp + "/target_set/labels");
    if (x.target_set.type == "interval")
        check(r, x.target_set.low <= x.target_set.high, xp + "/target_set", "interval needs low <= high");
    {
        std::vector<std::string> labels;
        for (const auto& [label, _] : x.claims.per_mark) labels.push_back(label);
        if (!labels.empty()) check_labels_exist(r, k.marks, labels, xp + "/claims/per_mark");
        auto check_law = [&](const ClaimLawConfig& law, const std::string& p) {
            try {
                build_claim_law(law);
            } catch (const std::exception& e) {
                r.fail(p, e.what());
            }
        };
        check_law(x.claims.fallback, xp + "/claims/default");
        for (const auto& [label, law] : x.claims.per_mark) check_law(law, xp + "/claims/per_mark/" + label);
    }
    check(r, finite_nonneg(x.premium), xp + "/premium", "must be finite and >= 0");
    check(r, finite_nonneg(x.initial_capital), xp + "/initial_capital", "must be finite and >= 0");
    check_mark_function(r, x.phi, k.marks, xp + "/phi");
    if (spec && r.errors.empty()) {
        try {
            const auto marks = build_marks(k.marks);
            const auto phi = build_mark_function(x.phi, marks);
            if (!std::isfinite(marks.supremum(phi)) || !std::isfinite(-marks.infimum(phi)))
                r.fail(xp + "/phi", "must be bounded on the mark space");
        } catch (const std::exception& e) {
            r.fail(xp + "/phi", e.what());
        }
    }
    for (std::size_t i = 0; i < x.query_times.size(); ++i)
        check(r, finite_nonneg(x.query_times[i]), xp + "/query_times/" + std::to_string(i), "must be finite and >= 0");
    if (x.epsilon) check(r, finite_pos(*x.epsilon), xp + "/epsilon", "must be finite and > 0");
    check(r, finite_pos(x.mean_tolerance), xp + "/mean_tolerance", "must be finite and > 0");
    check(r, x.max_exceedance > 0.0 && x.max_exceedance <= 1.0, xp + "/max_exceedance", "must lie in (0, 1]");
    check(r, x.min_sign_fraction >= 0.0 && x.min_sign_fraction <= 1.0, xp + "/min_sign_fraction",
          "must lie in [0, 1]");
    check(r, x.event_cap >= 1, xp + "/event_cap", "must be at least 1");

    // Numerics.
    const auto& n = c.numerics;
    check(r, finite_pos(n.dt), "/numerics/dt", "must be finite and > 0");
    check(r, finite_pos(n.tol), "/numerics/tol", "must be finite and > 0");
    check(r, finite_pos(n.horizon_multiplier), "/numerics/horizon_multiplier", "must be finite and > 0");
    if (n.horizon) check(r, finite_pos(*n.horizon), "/numerics/horizon", "must be finite and > 0");
    check(r, n.method == "neumann" || n.method == "direct", "/numerics/method", "must be 'neumann' or 'direct'");

    // Output.
    check(r, !c.output.directory.empty(), "/output/directory", "must not be empty");
    for (std::size_t i = 0; i < c.output.formats.size(); ++i) {
        const auto& f = c.output.formats[i];
        check(r, f == "csv" || f == "json" || f == "svg" || f == "binary", "/output/formats/" + std::to_string(i),
              "unknown format '" + f + "' (expected csv, json, svg or binary)");
    }

    // Subcommand requirements.
    if (sub) {
        switch (*sub) {
            case Subcommand::simulate:
                check(r, x.horizon.has_value(), xp + "/horizon", "required by 'simulate'");
                break;
            case Subcommand::lln_count:
            case Subcommand::lln_compound:
            case Subcommand::lln_dphi:
            case Subcommand::ruin:
                check(r, !x.T_grid.empty(), xp + "/T_grid", std::string("required by '") +
                                                                std::string(subcommand_name(*sub)) + "'");
                break;
            default:
                break;
        }
    }

    Validation out;
    out.schema = std::move(r.errors);
    if (spec && !spec->is_stable()) {
        const bool simulate_ok = k.allow_unstable && (!sub || *sub == Subcommand::simulate);
        if (!simulate_ok)
            out.instability.push_back("/kernel: branching ratio " + format_double(spec->branching_ratio()) +
                                      " is not < 1" +
                                      (k.allow_unstable ? " (allow_unstable only permits 'simulate')" : ""));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serialization helpers

json mark_function_json(const MarkFunctionConfig& f) {
    json j{{"type", f.type}};
    if (f.type == "constant") j["value"] = f.value;
    else if (f.type == "power") j["exponent"] = f.exponent;
    else if (f.type == "exp_decay") j["rate"] = f.rate;
    else if (f.type == "table") j["values"] = f.table;
    else if (f.type == "indicator") {
        j["low"] = f.low;
        j["high"] = f.high;
    }
    return j;
}

json claim_law_json(const ClaimLawConfig& c) {
    json j{{"type", c.type}};
    if (c.type == "constant") j["value"] = c.value;
    else if (c.type == "exponential") j["mean"] = c.mean;
    else {
        j["mu"] = c.mu;
        j["sigma"] = c.sigma;
    }
    return j;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public API

ScenarioConfig parse_scenario_text(std::string_view text, std::optional<Subcommand> subcommand) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ScenarioError(ScenarioError::Kind::syntax, {e.what()});
    }

    Reader r;
    ScenarioConfig c;
    if (r.object(doc, "", {"version", "kernel", "experiment", "numerics", "rng", "output"})) {
        if (const json* v = r.member(doc, "", "version", false)) {
            if (!v->is_number_integer()) r.fail("/version", "expected an integer");
            else c.version = v->get<int>();
        }
        if (const json* k = r.member(doc, "", "kernel", true)) c.kernel = read_kernel(r, *k, "/kernel");
        if (const json* x = r.member(doc, "", "experiment", false)) c.experiment = read_experiment(r, *x, "/experiment");
        if (const json* n = r.member(doc, "", "numerics", false)) c.numerics = read_numerics(r, *n, "/numerics");
        if (const json* g = r.member(doc, "", "rng", false)) {
            if (r.object(*g, "/rng", {"seed"})) r.unsigned_integer(*g, "/rng", "seed", c.rng.seed);
        }
        if (const json* o = r.member(doc, "", "output", false)) {
            if (r.object(*o, "/output", {"directory", "formats"})) {
                r.string(*o, "/output", "directory", c.output.directory);
                r.string_list(*o, "/output", "formats", c.output.formats);
            }
        }
    }
    auto v = validate(c, subcommand, std::move(r.errors));
    if (!v.schema.empty()) throw ScenarioError(ScenarioError::Kind::schema, std::move(v.schema));
    if (!v.instability.empty()) throw ScenarioError(ScenarioError::Kind::instability, std::move(v.instability));
    return c;
}

ScenarioConfig parse_scenario(const std::filesystem::path& path, std::optional<Subcommand> subcommand) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError(ScenarioError::Kind::missing_file, {"cannot open scenario file " + path.string()});
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario_text(ss.str(), subcommand);
}

json scenario_to_json(const ScenarioConfig& c) {
    json j;
    j["version"] = c.version;

    const auto& k = c.kernel;
    json exc{{"type", k.excitation.type}};
    if (k.excitation.type == "exponential") {
        exc["alpha"] = k.excitation.alpha;
        exc["beta"] = k.excitation.beta;
    } else if (k.excitation.type == "power_law") {
        exc["amplitude"] = k.excitation.amplitude;
        exc["scale"] = k.excitation.scale;
        exc["shape"] = k.excitation.shape;
    } else if (k.excitation.type == "erlang") {
        exc["amplitude"] = k.excitation.amplitude;
        exc["rate"] = k.excitation.rate;
    }
    if (k.excitation.type != "zero") exc["mark_modulation"] = mark_function_json(k.excitation.modulation);

    json marks{{"type", k.marks.type}};
    if (k.marks.type == "discrete") {
        json pts = json::array();
        for (const auto& p : k.marks.points) {
            json pj{{"label", p.label}, {"prob", p.prob}};
            if (p.value) pj["value"] = *p.value;
            pts.push_back(std::move(pj));
        }
        marks["points"] = std::move(pts);
    } else if (k.marks.type == "uniform") {
        marks["low"] = k.marks.low;
        marks["high"] = k.marks.high;
    } else {
        marks["rate"] = k.marks.rate;
    }
    j["kernel"] = {{"base_rate", k.base_rate},
                   {"excitation", std::move(exc)},
                   {"marks", std::move(marks)},
                   {"allow_unstable", k.allow_unstable}};

    const auto& x = c.experiment;
    json xp;
    if (x.horizon) xp["horizon"] = *x.horizon;
    xp["T_grid"] = x.T_grid;
    xp["v"] = x.v;
    xp["replications"] = x.replications;
    json target{{"type", x.target_set.type}};
    if (x.target_set.type == "labels") target["labels"] = x.target_set.labels;
    if (x.target_set.type == "interval") {
        target["low"] = x.target_set.low;
        target["high"] = x.target_set.high;
    }
    xp["target_set"] = std::move(target);
    json per_mark = json::object();
    for (const auto& [label, law] : x.claims.per_mark) per_mark[label] = claim_law_json(law);
    xp["claims"] = {{"default", claim_law_json(x.claims.fallback)}, {"per_mark", std::move(per_mark)}};
    xp["premium"] = x.premium;
    xp["initial_capital"] = x.initial_capital;
    xp["phi"] = mark_function_json(x.phi);
    xp["query_times"] = x.query_times;
    if (x.epsilon) xp["epsilon"] = *x.epsilon;
    xp["mean_tolerance"] = x.mean_tolerance;
    xp["max_exceedance"] = x.max_exceedance;
    xp["min_sign_fraction"] = x.min_sign_fraction;
    xp["event_cap"] = x.event_cap;
    j["experiment"] = std::move(xp);

    json num{{"dt", c.numerics.dt},
             {"tol", c.numerics.tol},
             {"horizon_multiplier", c.numerics.horizon_multiplier},
             {"method", c.numerics.method}};
    if (c.numerics.horizon) num["horizon"] = *c.numerics.horizon;
    j["numerics"] = std::move(num);
    j["rng"] = {{"seed", c.rng.seed}};
    j["output"] = {{"directory", c.output.directory}, {"formats", c.output.formats}};
    return j;
}

std::string serialize_scenario(const ScenarioConfig& config) { return scenario_to_json(config).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Builders

MarkDistribution build_marks(const MarksConfig& c) {
    if (c.type == "uniform") return MarkDistribution::uniform(c.low, c.high);
    if (c.type == "exponential") return MarkDistribution::exponential(c.rate);
    std::vector<std::string> labels;
    std::vector<double> values;
    std::vector<double> probs;
    for (std::size_t i = 0; i < c.points.size(); ++i) {
        const auto& p = c.points[i];
        labels.push_back(p.label);
        probs.push_back(p.prob);
        double v = static_cast<double>(i + 1);
        if (p.value) {
            v = *p.value;
        } else {
            const auto* first = p.label.data();
            const auto* last = first + p.label.size();
            double parsed = 0.0;
            auto [ptr, ec] = std::from_chars(first, last, parsed);
            if (ec == std::errc{} && ptr == last && std::isfinite(parsed)) v = parsed;
        }
        values.push_back(v);
    }
    return MarkDistribution::discrete(std::move(labels), std::move(values), std::move(probs));
}

MarkFunction build_mark_function(const MarkFunctionConfig& c, const MarkDistribution& marks) {
    if (c.type == "constant") return MarkFunction::constant(c.value);
    if (c.type == "identity") return MarkFunction::identity();
    if (c.type == "power") return MarkFunction::power(c.exponent);
    if (c.type == "exp_decay") return MarkFunction::exp_decay(c.rate);
    if (c.type == "indicator") return MarkFunction::indicator(c.low, c.high);
    if (c.type == "table") {
        if (!marks.is_discrete()) throw std::invalid_argument("table mark functions need a discrete mark law");
        std::vector<double> values(marks.size(), 0.0);
        for (std::uint32_t i = 0; i < marks.size(); ++i) {
            auto it = c.table.find(marks.label(i));
            if (it == c.table.end()) throw std::invalid_argument("no table value for mark '" + marks.label(i) + "'");
            values[i] = it->second;
        }
        return MarkFunction::table(std::move(values));
    }
    throw std::invalid_argument("unknown mark function type '" + c.type + "'");
}

KernelSpec build_kernel(const KernelConfig& c) {
    auto marks = build_marks(c.marks);
    ExcitationFunction f;
    const auto& e = c.excitation;
    if (e.type == "exponential") {
        f = ExcitationFunction::exponential(e.alpha, e.beta, build_mark_function(e.modulation, marks));
    } else if (e.type == "power_law") {
        f = ExcitationFunction::separable(TimeProfile::power_law(e.amplitude, e.scale, e.shape),
                                          build_mark_function(e.modulation, marks));
    } else if (e.type == "erlang") {
        f = ExcitationFunction::separable(TimeProfile::erlang(e.amplitude, e.rate),
                                          build_mark_function(e.modulation, marks));
    } else if (e.type != "zero") {
        throw std::invalid_argument("unknown excitation type '" + e.type + "'");
    }
    return KernelSpec(c.base_rate, std::move(f), std::move(marks), c.allow_unstable);
}

MarkSet build_target_set(const TargetSetConfig& c, const MarkDistribution& marks) {
    if (c.type == "all") return MarkSet::all();
    if (c.type == "interval") return MarkSet::interval(c.low, c.high);
    std::vector<std::uint32_t> idx;
    for (const auto& l : c.labels) {
        auto i = marks.find(l);
        if (!i) throw std::invalid_argument("unknown mark label '" + l + "'");
        idx.push_back(*i);
    }
    return MarkSet::labels(std::move(idx));
}

ClaimLaw build_claim_law(const ClaimLawConfig& c) {
    if (c.type == "constant") return ClaimLaw::constant(c.value);
    if (c.type == "exponential") return ClaimLaw::exponential(c.mean);
    if (c.type == "lognormal") return ClaimLaw::lognormal(c.mu, c.sigma);
    throw std::invalid_argument("unknown claim law type '" + c.type + "'");
}

ClaimLaws build_claim_laws(const ClaimsConfig& c, const MarkDistribution& marks) {
    ClaimLaws laws;
    laws.fallback = build_claim_law(c.fallback);
    for (const auto& [label, law] : c.per_mark) {
        auto i = marks.find(label);
        if (!i) throw std::invalid_argument("unknown mark label '" + label + "'");
        laws.per_mark[*i] = build_claim_law(law);
    }
    return laws;
}

}  // namespace hawkes
