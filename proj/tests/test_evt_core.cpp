#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "cevm/evt_core.hpp"

using Catch::Approx;
using namespace cevm;

TEST_CASE("gev_cdf matches the closed form at reference points") {
    CHECK(gev_cdf(0.0, {0.0}) == Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(gev_cdf(0.0, {1.0}) == Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(gev_cdf(1.0, {-1.0}) == Approx(1.0).margin(1e-14));
}

TEST_CASE("gev_cdf clamps outside the support closure") {
    CHECK(gev_cdf(-5.0, {1.0}) == 0.0);    // below -1/gamma
    CHECK(gev_cdf(3.0, {-0.5}) == 1.0);    // above -1/gamma = 2
    CHECK(gev_cdf(-1e308, {0.0}) == 0.0);
    CHECK(gev_cdf(1e308, {0.0}) == 1.0);
}

TEST_CASE("gev_cdf rejects NaN") {
    CHECK_THROWS_AS(gev_cdf(std::nan(""), {1.0}), std::invalid_argument);
}

TEST_CASE("gev_cdf is nondecreasing and spans [0,1] for each shape") {
    for (double g : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
        const double lo = g > 0 ? -1.0 / g : -50.0;
        const double hi = g < 0 ? -1.0 / g : 50.0;
        double prev = -1.0;
        for (int i = 0; i <= 1000; ++i) {
            const double x = lo + (hi - lo) * i / 1000.0;
            const double v = gev_cdf(x, {g});
            REQUIRE(v >= prev);
            REQUIRE(v >= 0.0);
            REQUIRE(v <= 1.0);
            prev = v;
        }
        // limits at the support ends; infinite ends probed far out
        const double far_lo = g > 0 ? -1.0 / g : -1e300;
        const double far_hi = g < 0 ? -1.0 / g : 1e300;
        CHECK(gev_cdf(far_lo, {g}) == Approx(0.0).margin(1e-12));
        CHECK(gev_cdf(far_hi, {g}) == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("left_inverse on simple monotone functions") {
    CHECK(left_inverse([](double s) { return s; }, 0.0, 10.0, 3.0) == Approx(3.0).margin(1e-9));
    CHECK(left_inverse([](double s) { return s * s; }, 0.0, 10.0, 4.0) ==
          Approx(2.0).margin(1e-9));
    // step: f = 1 on [0,2), 5 on [2,3]
    auto step = [](double s) { return s < 2.0 ? 1.0 : 5.0; };
    CHECK(left_inverse(step, 0.0, 3.0, 2.0) == Approx(2.0).margin(1e-9));
}

TEST_CASE("left_inverse rejects values above the range") {
    CHECK_THROWS_AS(left_inverse([](double s) { return s; }, 0.0, 1.0, 2.0),
                    std::invalid_argument);
}

TEST_CASE("left_inverse forms a Galois pair with nondecreasing step functions") {
    std::mt19937_64 eng(42);
    for (int rep = 0; rep < 20; ++rep) {
        // random nondecreasing right-continuous step function on [0, 10]
        std::vector<double> knots, vals;
        double v = 0.0;
        for (int i = 0; i < 8; ++i) {
            knots.push_back(10.0 * (i + 1) / 9.0);
            v += 0.1 + (eng() % 1000) / 500.0;
            vals.push_back(v);
        }
        auto f = [&](double s) {
            double out = 0.0;
            for (std::size_t i = 0; i < knots.size(); ++i)
                if (s >= knots[i]) out = vals[i];
            return out;
        };
        for (int i = 0; i <= 40; ++i) {
            const double s = 10.0 * i / 40.0;
            const double li = left_inverse(f, 0.0, 10.0, f(s));
            REQUIRE(li <= s + 1e-9);
        }
        for (int i = 0; i <= 40; ++i) {
            const double y = vals.back() * (static_cast<double>(i) / 40.0);
            const double li = left_inverse(f, 0.0, 10.0, y);
            REQUIRE(f(li) >= y - 1e-9);
        }
    }
}

TEST_CASE("psi_eval forms") {
    auto [p1, p2] = psi_eval({2.0, 1.0, false}, 1.0);
    CHECK(p1 == 1.0);
    CHECK(p2 == 0.0);

    auto [q1, q2] = psi_eval({0.0, 3.0, false}, std::exp(1.0));
    CHECK(q1 == Approx(1.0).epsilon(1e-14));
    CHECK(q2 == Approx(3.0).epsilon(1e-12));

    auto [r1, r2] = psi_eval({2.0, 1.0, true}, 5.0);
    CHECK(r1 == Approx(25.0).epsilon(1e-14));
    CHECK(r2 == 0.0);

    CHECK_THROWS_AS(psi_eval({1.0, 1.0, false}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(psi_eval({1.0, 1.0, false}, -2.0), std::invalid_argument);
}

TEST_CASE("doa_scalings for the Pareto tail") {
    const auto s = Survival::pareto(1.0);
    const auto [a, b] = doa_scalings(s, {1.0});
    CHECK(b(10.0) == Approx(10.0).epsilon(1e-12));
    CHECK(a(10.0) == Approx(10.0).epsilon(1e-12));
    CHECK(a.rv_index() == 1.0);
}

TEST_CASE("doa_scalings for the uniform tail") {
    const auto s = Survival::bounded_power(1.0, 1.0, 0.0);
    const auto [a, b] = doa_scalings(s, {-1.0});
    CHECK(b(10.0) == Approx(0.9).epsilon(1e-12));
    CHECK(a(10.0) == Approx(0.1).epsilon(1e-12));
}

TEST_CASE("doa_scalings for a squared endpoint tail") {
    // survival (1-x)^2 on [0,1], gamma = -1/2
    const auto s = Survival::bounded_power(1.0, 2.0, 0.0);
    const auto [a, b] = doa_scalings(s, {-0.5});
    CHECK(b(4.0) == Approx(0.5).epsilon(1e-12));    // 1 - 4^(-1/2)
    CHECK(a(4.0) == Approx(0.25).epsilon(1e-12));   // (1/2) * 4^(-1/2)
}

TEST_CASE("doa_scalings satisfies the scaled-tail limit at large t") {
    struct Case {
        Survival s;
        double gamma;
        std::vector<double> ys;
    };
    const std::vector<Case> cases = {
        {Survival::pareto(1.0), 1.0, {-0.5, 0.0, 1.0, 3.0}},
        {Survival::pareto(2.0), 0.5, {-1.0, 0.0, 1.0, 3.0}},
        {Survival::bounded_power(1.0, 1.0, 0.0), -1.0, {-2.0, -1.0, 0.0, 0.5, 0.9}},
        {Survival::bounded_power(1.0, 2.0, 0.0), -0.5, {-1.0, 0.0, 1.0, 1.5}},
    };
    const double t = 1e6;
    for (const auto& c : cases) {
        const auto [a, b] = doa_scalings(c.s, {c.gamma});
        for (double y : c.ys) {
            const double lhs = t * c.s(a(t) * y + b(t));
            const double rhs = std::pow(1.0 + c.gamma * y, -1.0 / c.gamma);
            REQUIRE(std::fabs(lhs - rhs) <= 1e-3);
        }
    }
}

TEST_CASE("doa_scalings keeps the negative-shape scale identity bit-exact") {
    const auto s = Survival::bounded_power(1.0, 2.0, 0.0);
    const auto [a, b] = doa_scalings(s, {-0.5});
    for (double t : {2.0, 7.0, 1e3, 1e6}) {
        REQUIRE(a(t) == 0.5 * (1.0 - b(t)));
    }
}

TEST_CASE("doa_scalings rejects bad inputs") {
    CHECK_THROWS_AS(doa_scalings(Survival::pareto(1.0), {0.0}), std::invalid_argument);
    // gamma < 0 needs a finite upper endpoint
    CHECK_THROWS_AS(doa_scalings(Survival::pareto(1.0), {-1.0}), std::invalid_argument);
    // non-monotone tabulated grid is rejected at construction
    CHECK_THROWS_AS(Survival::tabulated({0.0, 1.0, 2.0}, {1.0, 0.7, 0.8}),
                    std::invalid_argument);
}

TEST_CASE("tabulated survival interpolates quantiles between knots") {
    // tabulate (1-x)^2 coarsely and compare the quantile against the closed form
    std::vector<double> xs, vals;
    for (int i = 0; i <= 100; ++i) {
        const double x = i / 100.0;
        xs.push_back(x);
        vals.push_back((1.0 - x) * (1.0 - x));
    }
    const auto tab = Survival::tabulated(xs, vals);
    for (double t : {2.0, 10.0, 50.0}) {
        const double exact = 1.0 - std::pow(t, -0.5);
        REQUIRE(tab.upper_quantile(t) == Approx(exact).margin(2e-3));
    }
    CHECK(tab.upper_endpoint().has_value());
    CHECK(*tab.upper_endpoint() == 1.0);
}

TEST_CASE("scaling function algebra tracks indices") {
    const auto f = ScalingFunction::power_law(2.0, 1.5);
    const auto g = reciprocal(f);
    CHECK(g(4.0) == Approx(1.0 / f(4.0)).epsilon(1e-14));
    CHECK(g.rv_index() == -1.5);
    const auto h = product(f, g);
    CHECK(h.rv_index() == 0.0);
    CHECK(h(9.0) == Approx(1.0).epsilon(1e-14));
    const auto s = scale_by(3.0, f);
    CHECK(s(4.0) == Approx(3.0 * f(4.0)).epsilon(1e-14));

    const auto beta = ScalingFunction::power_law_to_limit(1.0, 2.0, -0.5);
    REQUIRE(beta.limit_at_infinity().has_value());
    CHECK(*beta.limit_at_infinity() == 1.0);
    CHECK(beta(4.0) == Approx(0.0).margin(1e-14));  // 1 - 2*4^{-1/2}
}
