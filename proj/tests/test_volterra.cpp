#include "hawkes/errors.hpp"
#include "hawkes/model.hpp"
#include "hawkes/volterra.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace hawkes;
using testing_support::Gen;

namespace {

double max_residual(const GridFunction& F, const GridFunction& R) {
    return (R - F - convolve(F, R)).max_abs();
}

GridFunction exp_grid(double a, double b, double dt, double horizon) {
    return GridFunction::sample([=](double t) { return a * std::exp(-b * t); }, dt, horizon);
}

}  // namespace

TEST_CASE("grid construction") {
    const auto g = GridFunction::sample([](double t) { return t; }, 0.25, 1.0);
    CHECK(g.size() == 5);
    CHECK(g.horizon() == 1.0);
    CHECK(g[4] == 1.0);
    CHECK(g.integral() == doctest::Approx(0.5));
    CHECK_THROWS_AS(GridFunction::sample([](double) { return 0.0; }, 0.3, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(GridFunction(0.0, {1.0}), std::invalid_argument);
    CHECK(g.to_csv().rfind("t,value\n0,0\n0.25,0.25\n", 0) == 0);
}

TEST_CASE("convolution of exponentials") {
    // (e^{-2t} * e^{-2t})(t) = t e^{-2t}; the second Neumann term.
    const auto F = exp_grid(1.0, 2.0, 1e-3, 10.0);
    const auto F2 = convolve(F, F);
    double err = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) {
        const double t = F.time(i);
        err = std::max(err, std::abs(F2[i] - t * std::exp(-2.0 * t)));
    }
    CHECK(err < 1e-6);
    CHECK(F2[0] == 0.0);
    CHECK_THROWS_AS(convolve(F, exp_grid(1.0, 2.0, 2e-3, 10.0)), GridMismatchError);
    CHECK_THROWS_AS(convolve(F, exp_grid(1.0, 2.0, 1e-3, 5.0)), GridMismatchError);
}

TEST_CASE("resolvent of e^{-2t} is e^{-t}") {
    // Neumann terms t^{n-1} e^{-2t} / (n-1)! sum to e^{-2t} e^{t}.
    const auto F = exp_grid(1.0, 2.0, 1e-3, 20.0);
    for (auto method : {ResolventMethod::neumann, ResolventMethod::direct}) {
        const auto res = resolvent(F, 0.5, 1e-8, method);
        double err = 0.0;
        for (std::size_t i = 0; i < F.size(); ++i) err = std::max(err, std::abs(res.R[i] - std::exp(-F.time(i))));
        CHECK(err < 1e-4);
        CHECK(res.l1_norm_truncated == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(std::abs(res.l1_norm_truncated + res.l1_tail_bound - 1.0) < 1e-3);
    }
    const auto neumann = resolvent(F, 0.5);
    CHECK(neumann.neumann_terms_used > 0);
    CHECK(neumann.l1_tail_bound < 1e-8);
    CHECK(neumann.l1_tail_bound == doctest::Approx(std::pow(0.5, neumann.neumann_terms_used + 1) / 0.5));
}

TEST_CASE("resolvent preconditions") {
    const auto F = exp_grid(1.0, 2.0, 1e-2, 5.0);
    CHECK_THROWS_AS(resolvent(F, 1.0), InstabilityError);
    CHECK_THROWS_AS(resolvent(F, 1.3), InstabilityError);
    CHECK_THROWS_AS(resolvent(F, 0.5, 0.0), std::domain_error);
    CHECK_THROWS_AS(resolvent(GridFunction(0.1, {1.0, -0.5, 0.0}), 0.5), std::invalid_argument);
}

TEST_CASE("zero kernel has zero resolvent") {
    KernelSpec spec(2.0, ExcitationFunction::zero(), MarkDistribution::uniform_labels({"a"}));
    const auto res = kernel_resolvent(spec, 1e-2, 5.0);
    CHECK(res.R.max_abs() == 0.0);
    CHECK(expected_intensity(2.0, res, 3.0) == 2.0);
    CHECK(expected_count(2.0, 1.0, res, 3.0) == doctest::Approx(6.0));
}

// R - F - F * R vanishes and the two methods agree on random exponential and
// power-law kernels.
TEST_CASE("resolvent identity on random kernels") {
    Gen gen(77);
    for (int trial = 0; trial < 12; ++trial) {
        const double rho = gen.uniform(0.05, 0.85);
        const double dt = 0.01;
        GridFunction F;
        if (trial % 2 == 0) {
            const double beta = gen.uniform(0.5, 4.0);
            F = exp_grid(rho * beta, beta, dt, 10.0);
        } else {
            const auto p = TimeProfile::power_law(1.0, gen.uniform(0.3, 2.0), gen.uniform(1.0, 3.0));
            const double scale = rho / p.l1();
            F = GridFunction::sample([&](double t) { return scale * p.value(t); }, dt, 10.0);
        }
        const auto a = resolvent(F, rho, 1e-10, ResolventMethod::neumann);
        const auto b = resolvent(F, rho, 1e-10, ResolventMethod::direct);
        CHECK(max_residual(F, a.R) < 1e-7);
        CHECK(max_residual(F, b.R) < 1e-7);
        CHECK((a.R - b.R).max_abs() < 1e-7);
        for (double v : a.R.values()) CHECK(v >= 0.0);
    }
}

TEST_CASE("mean intensity and count for the test kernel") {
    const auto spec = testing_support::test_kernel();
    const auto res = kernel_resolvent(spec, 1e-3, 20.0);
    for (double t : {0.0, 0.5, 1.0, 3.0, 10.0}) {
        CHECK(std::abs(expected_intensity(1.0, res, t) - (2.0 - std::exp(-t))) < 1e-5);
        CHECK(std::abs(expected_count(1.0, 1.0, res, t) - (2.0 * t - 1.0 + std::exp(-t))) < 1e-5);
        CHECK(expected_count(1.0, 0.5, res, t) == doctest::Approx(0.5 * expected_count(1.0, 1.0, res, t)));
    }
    // Between grid nodes.
    CHECK(std::abs(expected_count(1.0, 1.0, res, 1.00037) - (2.0 * 1.00037 - 1.0 + std::exp(-1.00037))) < 1e-5);
    CHECK_THROWS_AS(expected_intensity(1.0, res, -1.0), std::domain_error);
    CHECK_THROWS_AS(expected_count(1.0, 1.0, res, 21.0), std::domain_error);
}

TEST_CASE("first moment bound") {
    Gen gen(3);
    for (int trial = 0; trial < 8; ++trial) {
        const double rho = gen.uniform(0.1, 0.8), beta = gen.uniform(0.5, 3.0);
        const auto F = exp_grid(rho * beta, beta, 1e-2, std::ceil(6000.0 / beta) / 100.0);
        const auto res = resolvent(F, rho);
        const auto fm = first_moment_R(res);
        // Closed form for exponentials: R = rho beta e^{-(1-rho) beta t}.
        CHECK(fm.value == doctest::Approx(rho / ((1 - rho) * (1 - rho) * beta)).epsilon(1e-3));
        CHECK(fm.bound == doctest::Approx(rho / (beta * (1 - rho) * (1 - rho))).epsilon(1e-3));
        CHECK(fm.value <= fm.bound * (1 + 1e-3));
    }
}

TEST_CASE("default horizons") {
    CHECK(default_horizon(testing_support::test_kernel()) == doctest::Approx(20.0));
    KernelSpec er(1.0, ExcitationFunction::separable(TimeProfile::erlang(1.0, 2.0)),
                  MarkDistribution::uniform_labels({"a"}));
    CHECK(default_horizon(er) > 10.0);
    const auto res = kernel_resolvent(er, 1e-2);
    CHECK(res.R.horizon() == doctest::Approx(default_horizon(er)).epsilon(1e-2));
}

TEST_CASE("integrability value") {
    // (1 + ||R||)^2 ||phi||^2 int g^2 dQ with g = x on {1, 2}.
    KernelSpec spec(1.0, ExcitationFunction::exponential(0.4, 2.0, MarkFunction::identity()),
                    MarkDistribution::uniform_labels({"1", "2"}));
    const double l1 = 0.2, eg2 = 2.5;
    const double rho = l1 * 1.5;
    const double r = rho / (1 - rho);
    CHECK(check_integrability_condition(spec, r) == doctest::Approx((1 + r) * (1 + r) * l1 * l1 * eg2).epsilon(1e-12));
}
