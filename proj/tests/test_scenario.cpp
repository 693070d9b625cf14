#include "hawkes/scenario.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <fstream>

using namespace hawkes;
using testing_support::Gen;

namespace {

const std::string kMinimal = R"({
  "kernel": {
    "base_rate": 1.0,
    "excitation": {"type": "zero"},
    "marks": {"type": "discrete", "points": [{"label": "a", "prob": 1.0}]}
  }
})";

ScenarioError::Kind kind_of(const std::string& text, std::optional<Subcommand> sub = std::nullopt) {
    try {
        parse_scenario_text(text, sub);
    } catch (const ScenarioError& e) {
        return e.kind();
    }
    FAIL("expected a ScenarioError");
    return ScenarioError::Kind::schema;
}

std::vector<std::string> messages_of(const std::string& text, std::optional<Subcommand> sub = std::nullopt) {
    try {
        parse_scenario_text(text, sub);
    } catch (const ScenarioError& e) {
        return e.messages();
    }
    return {};
}

bool mentions(const std::vector<std::string>& messages, const std::string& needle) {
    return std::any_of(messages.begin(), messages.end(),
                       [&](const std::string& m) { return m.find(needle) != std::string::npos; });
}

std::string kernel_with(const std::string& excitation, const std::string& extra = "") {
    return R"({"kernel": {"base_rate": 1.0, "excitation": )" + excitation +
           R"(, "marks": {"type": "discrete", "points": [{"label": "a", "prob": 0.5}, {"label": "b", "prob": 0.5}]})" +
           extra + "}, \"experiment\": {\"T_grid\": [10, 20], \"horizon\": 5}}";
}

MarkFunctionConfig random_mark_function(Gen& g, const std::vector<std::string>& labels, bool continuous) {
    MarkFunctionConfig f;
    switch (g.integer(0, continuous ? 3 : 4)) {
        case 0: f.type = "constant"; f.value = g.uniform(0.0, 2.0); break;
        case 1: f.type = "exp_decay"; f.rate = g.uniform(0.0, 2.0); break;
        case 2: f.type = "indicator"; f.low = g.uniform(0.0, 1.0); f.high = f.low + g.uniform(0.0, 2.0); break;
        case 3:
            if (continuous) {
                f.type = "constant";
                f.value = g.uniform(0.0, 1.0);
            } else {
                f.type = "identity";
            }
            break;
        default:
            f.type = "table";
            for (const auto& l : labels) f.table[l] = g.uniform(0.0, 2.0);
    }
    return f;
}

ClaimLawConfig random_claim_law(Gen& g) {
    ClaimLawConfig c;
    switch (g.integer(0, 2)) {
        case 0: c.type = "constant"; c.value = g.uniform(0.0, 5.0); break;
        case 1: c.type = "exponential"; c.mean = g.uniform(0.1, 5.0); break;
        default: c.type = "lognormal"; c.mu = g.uniform(-1.0, 1.0); c.sigma = g.uniform(0.1, 1.0);
    }
    return c;
}

// A random config that satisfies the schema, with a stable kernel.
ScenarioConfig random_config(Gen& g) {
    ScenarioConfig c;
    auto& k = c.kernel;
    k.base_rate = g.uniform(0.0, 3.0);
    const bool continuous = g.integer(0, 3) == 0;
    std::vector<std::string> labels;
    if (continuous) {
        if (g.coin()) {
            k.marks.type = "uniform";
            k.marks.low = g.uniform(0.0, 1.0);
            k.marks.high = k.marks.low + g.uniform(0.1, 3.0);
        } else {
            k.marks.type = "exponential";
            k.marks.rate = g.uniform(0.2, 3.0);
        }
    } else {
        const int n = g.integer(1, 4);
        const auto probs = g.simplex(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            MarkPointConfig p;
            p.label = (g.coin() ? "m" : "") + std::to_string(i + 1);
            if (g.coin()) p.value = g.uniform(0.0, 4.0);
            p.prob = probs[static_cast<std::size_t>(i)];
            labels.push_back(p.label);
            k.marks.points.push_back(p);
        }
    }
    auto& e = k.excitation;
    switch (g.integer(0, 3)) {
        case 0: e.type = "zero"; break;
        case 1: e.type = "exponential"; e.beta = g.uniform(0.5, 3.0); e.alpha = g.uniform(0.0, 0.2) * e.beta; break;
        case 2:
            e.type = "power_law";
            e.scale = g.uniform(0.5, 2.0);
            e.shape = g.uniform(1.0, 3.0);
            e.amplitude = g.uniform(0.0, 0.2) * e.shape / e.scale;
            break;
        default: e.type = "erlang"; e.rate = g.uniform(0.5, 3.0); e.amplitude = g.uniform(0.0, 0.2) * e.rate * e.rate;
    }
    if (e.type != "zero") {
        e.modulation = random_mark_function(g, labels, continuous);
        // Keep the modulation bounded by 2 so the kernel stays stable.
        if (e.modulation.type == "identity" && !continuous)
            for (auto& p : k.marks.points) p.value = std::min(p.value.value_or(1.0), 2.0);
    }
    k.allow_unstable = g.coin();

    auto& x = c.experiment;
    if (g.coin()) x.horizon = g.uniform(1.0, 100.0);
    for (int i = g.integer(0, 3); i > 0; --i) x.T_grid.push_back(g.uniform(1.0, 1000.0));
    x.v.clear();
    for (int i = g.integer(1, 3); i > 0; --i) x.v.push_back(g.uniform(0.0, 2.0));
    x.replications = static_cast<std::size_t>(g.integer(2, 500));
    if (!continuous && g.coin()) {
        x.target_set.type = "labels";
        x.target_set.labels = {labels.front()};
    } else if (g.coin()) {
        x.target_set.type = "interval";
        x.target_set.low = g.uniform(0.0, 1.0);
        x.target_set.high = x.target_set.low + g.uniform(0.0, 1.0);
    }
    x.claims.fallback = random_claim_law(g);
    if (!continuous && g.coin()) x.claims.per_mark[labels.back()] = random_claim_law(g);
    x.premium = g.uniform(0.0, 5.0);
    x.initial_capital = g.uniform(0.0, 10.0);
    x.phi = random_mark_function(g, labels, continuous);
    for (int i = g.integer(0, 3); i > 0; --i) x.query_times.push_back(g.uniform(0.0, 10.0));
    if (g.coin()) x.epsilon = g.uniform(0.01, 1.0);
    x.mean_tolerance = g.uniform(0.01, 0.2);
    x.max_exceedance = g.uniform(0.01, 1.0);
    x.min_sign_fraction = g.uniform(0.0, 1.0);
    x.event_cap = static_cast<std::size_t>(g.integer(1, 1000000));

    c.numerics.dt = g.uniform(1e-4, 1e-1);
    c.numerics.tol = g.uniform(1e-12, 1e-6);
    c.numerics.horizon_multiplier = g.uniform(10.0, 60.0);
    if (g.coin()) c.numerics.horizon = g.uniform(1.0, 50.0);
    c.numerics.method = g.coin() ? "neumann" : "direct";
    c.rng.seed = g.engine()();
    c.output.directory = g.coin() ? "out" : "results/run, \"quoted\"";
    c.output.formats = g.coin() ? std::vector<std::string>{"csv"} : std::vector<std::string>{"json", "svg", "binary"};
    return c;
}

}  // namespace

TEST_CASE("minimal poisson scenario") {
    const auto c = parse_scenario_text(kMinimal);
    CHECK(c.kernel.base_rate == 1.0);
    CHECK(build_kernel(c.kernel).branching_ratio() == 0.0);
    CHECK(c.experiment.replications == 200);
    CHECK(c.numerics.dt == 1e-3);
}

TEST_CASE("error kinds are distinguishable") {
    try {
        parse_scenario("/nonexistent/scenario.json");
        FAIL("expected a ScenarioError");
    } catch (const ScenarioError& e) {
        CHECK(e.kind() == ScenarioError::Kind::missing_file);
    }
    CHECK(kind_of("{\"kernel\": ") == ScenarioError::Kind::syntax);
    CHECK(kind_of("{\"kernel\": {}}") == ScenarioError::Kind::schema);
    CHECK(kind_of(kernel_with(R"({"type": "exponential", "alpha": 2.4, "beta": 2.0})"), Subcommand::lln_count) ==
          ScenarioError::Kind::instability);
}

TEST_CASE("stability gate") {
    const auto unstable = kernel_with(R"({"type": "exponential", "alpha": 2.4, "beta": 2.0})");
    CHECK(kind_of(unstable, Subcommand::simulate) == ScenarioError::Kind::instability);
    const auto allowed = kernel_with(R"({"type": "exponential", "alpha": 2.4, "beta": 2.0})", R"(, "allow_unstable": true)");
    CHECK_NOTHROW(parse_scenario_text(allowed, Subcommand::simulate));
    CHECK(kind_of(allowed, Subcommand::lln_count) == ScenarioError::Kind::instability);
    CHECK(kind_of(allowed, Subcommand::resolvent) == ScenarioError::Kind::instability);
    CHECK(mentions(messages_of(unstable, Subcommand::ruin), "1.2"));
}

TEST_CASE("unknown mark label is listed") {
    const std::string text = R"({
      "kernel": {"base_rate": 1, "excitation": {"type": "zero"},
                 "marks": {"type": "discrete", "points": [{"label": "a", "prob": 0.5}, {"label": "b", "prob": 0.5}]}},
      "experiment": {"target_set": {"type": "labels", "labels": ["c"]}}})";
    CHECK(kind_of(text) == ScenarioError::Kind::schema);
    CHECK(mentions(messages_of(text), "unknown mark label 'c'"));
}

TEST_CASE("all violations are reported") {
    const std::string text = R"({
      "colour": "blue",
      "kernel": {"base_rate": -1, "excitation": {"type": "exponential", "alpha": 1, "beta": 2, "gamma": 3},
                 "marks": {"type": "discrete", "points": [{"label": "a", "prob": 1.0}]}},
      "experiment": {"replications": 1, "v": [-1], "claims": {"per_mark": {"z": {"type": "constant", "value": 1}}}},
      "numerics": {"dt": 0, "method": "euler"},
      "output": {"formats": ["png"]}})";
    const auto m = messages_of(text);
    CHECK(mentions(m, "/colour: unknown key"));
    CHECK(mentions(m, "/kernel/excitation/gamma: unknown key"));
    CHECK(mentions(m, "/kernel/base_rate"));
    CHECK(mentions(m, "/experiment/replications"));
    CHECK(mentions(m, "/experiment/v/0"));
    CHECK(mentions(m, "unknown mark label 'z'"));
    CHECK(mentions(m, "/numerics/dt"));
    CHECK(mentions(m, "/numerics/method"));
    CHECK(mentions(m, "/output/formats/0"));
}

TEST_CASE("type errors and missing keys") {
    const auto m = messages_of(R"({"kernel": {"base_rate": "one", "marks": {"type": "gaussian"}}})");
    CHECK(mentions(m, "/kernel/base_rate: expected a number"));
    CHECK(mentions(m, "/kernel/excitation: required key missing"));
    CHECK(mentions(m, "/kernel/marks/type: unknown type 'gaussian'"));
    CHECK(mentions(messages_of("[1, 2]"), "expected an object"));
}

TEST_CASE("subcommand requirements") {
    CHECK(mentions(messages_of(kMinimal, Subcommand::simulate), "/experiment/horizon: required by 'simulate'"));
    CHECK(mentions(messages_of(kMinimal, Subcommand::lln_count), "/experiment/T_grid: required by 'lln-count'"));
    CHECK_NOTHROW(parse_scenario_text(kMinimal, Subcommand::resolvent));
    CHECK_NOTHROW(parse_scenario_text(kMinimal, Subcommand::netprofit));
}

TEST_CASE("mark function tables must cover the labels") {
    const auto m = messages_of(kernel_with(
        R"({"type": "exponential", "alpha": 1, "beta": 2, "mark_modulation": {"type": "table", "values": {"a": 1, "q": 2}}})"));
    CHECK(mentions(m, "unknown mark label 'q'"));
    CHECK(mentions(m, "no value for mark label 'b'"));
}

TEST_CASE("builders") {
    const auto c = parse_scenario_text(R"({
      "kernel": {"base_rate": 1, "excitation": {"type": "exponential", "alpha": 1, "beta": 2,
                                                 "mark_modulation": {"type": "table", "values": {"x": 0.5, "y": 1.5}}},
                 "marks": {"type": "discrete", "points": [{"label": "x", "prob": 0.5}, {"label": "y", "value": 7, "prob": 0.5}]}},
      "experiment": {"target_set": {"type": "labels", "labels": ["y"]},
                     "claims": {"default": {"type": "constant", "value": 1}, "per_mark": {"y": {"type": "exponential", "mean": 3}}}}})");
    const auto spec = build_kernel(c.kernel);
    CHECK(spec.branching_ratio() == doctest::Approx(0.5));
    CHECK(spec.marks().value(0) == 1.0);  // non-numeric label without value: 1-based index
    CHECK(spec.marks().value(1) == 7.0);
    CHECK(spec.marks().probability(build_target_set(c.experiment.target_set, spec.marks())) == 0.5);
    const auto laws = build_claim_laws(c.experiment.claims, spec.marks());
    CHECK(laws.for_mark(0).mean() == 1.0);
    CHECK(laws.for_mark(1).mean() == 3.0);
}

TEST_CASE("subcommand names") {
    for (const auto& name : subcommand_names()) CHECK(subcommand_name(*parse_subcommand(name)) == name);
    CHECK_FALSE(parse_subcommand("lln").has_value());
}

TEST_CASE("serialize then parse is the identity on valid configs") {
    Gen gen(31337);
    for (int trial = 0; trial < 300; ++trial) {
        const auto config = random_config(gen);
        const auto text = serialize_scenario(config);
        ScenarioConfig back;
        try {
            back = parse_scenario_text(text);
        } catch (const ScenarioError& e) {
            FAIL_CHECK("generated config rejected: " << e.what() << "\n" << text);
            continue;
        }
        CHECK(back == config);
        CHECK(serialize_scenario(back) == text);
    }
}

TEST_CASE("fixture files parse") {
    const std::filesystem::path dir = HAWKES_FIXTURE_DIR;
    CHECK_NOTHROW(parse_scenario(dir / "test_kernel.json", Subcommand::lln_count));
    CHECK_NOTHROW(parse_scenario(dir / "poisson_minimal.json", Subcommand::resolvent));
    std::size_t shipped = 0;
    for (const auto& e : std::filesystem::directory_iterator(std::filesystem::path(HAWKES_SOURCE_DIR) / "scenarios")) {
        CAPTURE(e.path().string());
        CHECK_NOTHROW(parse_scenario(e.path()));
        ++shipped;
    }
    CHECK(shipped >= 5);
}
