#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "cevm/model_zoo.hpp"
#include "cevm/transforms.hpp"

using Catch::Approx;
using namespace cevm;

TEST_CASE("tilde values and monotonicity") {
    CHECK(tilde(0.5, 1.0) == Approx(2.0).epsilon(1e-14));
    CHECK(tilde(0.0, 1.0) == 1.0);
    CHECK(tilde(-3.0, -1.0) == Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(tilde(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(tilde(2.0, 1.0), std::invalid_argument);

    std::mt19937_64 eng(7);
    for (int i = 0; i < 1000; ++i) {
        const double a = -2.0 + 3.0 * rng::uniform01(eng);
        const double b = -2.0 + 3.0 * rng::uniform01(eng);
        const double x1 = std::min(a, b), x2 = std::max(a, b);
        if (x1 == x2) continue;
        REQUIRE(tilde(x1, 2.0) < tilde(x2, 2.0));
    }
}

TEST_CASE("tilde_scalings derives the reduced scalings") {
    const auto alpha = ScalingFunction::power_law(1.0, -1.0);
    const auto beta = ScalingFunction::power_law_to_limit(1.0, 1.0, -1.0);  // 1 - 1/t
    const auto a = ScalingFunction::power_law(1.0, -1.0);

    SECTION("centering branch") {
        const auto [at, att] = tilde_scalings(alpha, beta, a, /*psi2_zero=*/false);
        for (double t : {2.0, 10.0, 1e3}) REQUIRE(at(t) == Approx(t).epsilon(1e-12));
        CHECK(at.rv_index() == 1.0);
        for (double t : {2.0, 10.0, 1e3}) REQUIRE(att(t) == Approx(t).epsilon(1e-12));
    }
    SECTION("psi2 == 0 branch") {
        const auto alpha2 = ScalingFunction::power_law(1.0, -2.0);
        const auto [at, att] = tilde_scalings(alpha2, beta, a, /*psi2_zero=*/true);
        for (double t : {2.0, 10.0}) REQUIRE(at(t) == Approx(t * t).epsilon(1e-12));
        CHECK(at.rv_index() == 2.0);
    }
    SECTION("missing limit is rejected") {
        const auto bad_beta = ScalingFunction::power_law(1.0, -1.0);
        // power_law with negative index carries limit 0, so use a positive one
        const auto really_bad = ScalingFunction::power_law(1.0, 1.0);
        CHECK_THROWS_AS(tilde_scalings(alpha, really_bad, a, false), std::invalid_argument);
        (void)bad_beta;
    }
    SECTION("positive alpha index is rejected") {
        const auto up = ScalingFunction::power_law(1.0, 1.0);
        CHECK_THROWS_AS(tilde_scalings(up, beta, a, false), std::invalid_argument);
    }
}

TEST_CASE("pivot evaluation reference points") {
    const CaseId iia{CaseTag::IIa, UnsupportedReason::none};
    CHECK(pivot_value(iia, 0.5, 0.5, 1.0, 1.0) == Approx(4.0 / 3.0).epsilon(1e-14));
    // both sides of the gap identity at (0.5, 0.5)
    const double xt = tilde(0.5, 1.0), yt = tilde(0.5, 1.0);
    CHECK(xt * yt / (xt + yt - 1.0) == Approx(4.0 / 3.0).epsilon(1e-14));

    const CaseId iv{CaseTag::IV, UnsupportedReason::none};
    CHECK(pivot_value(iv, 0.5, 8.0, 1.0) == Approx(4.0).epsilon(1e-14));

    CHECK_THROWS_AS(pivot_value(iia, 1.0, 1.0, 1.0, 1.0), std::invalid_argument);  // singular
    CHECK_THROWS_AS(pivot_value(iia, 1.5, 0.5, 1.0, 1.0), std::invalid_argument);  // beyond end
}

TEST_CASE("gap identity holds to 1e-12 over all endpoint variants") {
    struct Variant {
        double beta_inf, b_inf;
        double x_lo, x_hi, y_lo, y_hi;  // sampling box inside the support
    };
    const std::vector<Variant> variants = {
        {1.0, 1.0, 0.01, 0.99, 0.01, 0.99},      // both endpoints positive
        {0.0, 0.0, -0.99, -0.01, -0.99, -0.01},  // both zero
        {0.0, 1.0, -0.99, -0.01, 0.01, 0.99},    // x endpoint zero
        {-1.0, -1.0, -1.99, -1.01, -1.99, -1.01},  // both negative
    };
    std::mt19937_64 eng(2024);
    for (const auto& v : variants) {
        double worst = 0.0;
        for (int i = 0; i < 100000; ++i) {
            const double x = v.x_lo + (v.x_hi - v.x_lo) * rng::uniform01(eng);
            const double y = v.y_lo + (v.y_hi - v.y_lo) * rng::uniform01(eng);
            const double lhs = 1.0 / (v.beta_inf * v.b_inf - x * y);
            const double xt = tilde(x, v.beta_inf);
            const double yt = tilde(y, v.b_inf);
            const double rhs = xt * yt / (v.beta_inf * xt + v.b_inf * yt - 1.0);
            const double rel = std::fabs(lhs - rhs) / std::fabs(lhs);
            worst = std::max(worst, rel);
        }
        REQUIRE(worst <= 1e-12);
    }
}

TEST_CASE("reduce_model keeps the positive-index model unchanged") {
    const auto model = mrv_power_model(1.0, 1.0, DistSpec::point(0.5));
    const auto red = reduce_model(model);
    CHECK(red.cone == Cone::line_cross_positive);
    const auto orig = model.sample(5, 1000);
    const auto reduced = red.sampler(5, 1000);
    for (std::size_t i = 0; i < orig.size(); ++i) {
        REQUIRE(reduced[i].first == orig[i].first);
        REQUIRE(reduced[i].second == orig[i].second);
    }
}

TEST_CASE("reduce_model applies the endpoint-reciprocal map") {
    const auto model = beta_min_model(1.0, 1.0);
    const auto red = reduce_model(model);
    CHECK(red.cone == Cone::quadrant_cross_positive);

    const std::uint64_t n = 200000;
    const auto reduced = red.sampler(11, n);
    // reduced y is 1/(1 - Y) with survival u^-2 above 1
    for (double u : {2.0, 4.0, 8.0}) {
        std::size_t count = 0;
        for (const auto& [xt, yt] : reduced) {
            REQUIRE(xt >= 1.0);
            REQUIRE(yt >= 1.0);
            if (yt > u) ++count;
        }
        const double expect = std::pow(u, -2.0);
        const double se = std::sqrt(expect * (1.0 - expect) / static_cast<double>(n));
        REQUIRE(std::fabs(static_cast<double>(count) / n - expect) <= 3.0 * se);
    }
}

TEST_CASE("reduce_model bounds the removed endpoint coordinate") {
    const auto model = case4_model(-1.0, 1.0, 1.0);
    const auto red = reduce_model(model);
    for (const auto& [gap, y] : red.sampler(3, 20000)) {
        REQUIRE(gap >= 0.0);
        REQUIRE(gap <= 1.0);
        REQUIRE(y >= 1.0);
    }
}

TEST_CASE("the reduction is a stateless view over the model stream") {
    const auto model = beta_min_model(2.0, 1.0);
    const auto red = reduce_model(model);
    const auto orig_direct = model.sample(99, 50000);
    const auto orig_via_view = red.original(99, 50000);
    REQUIRE(orig_direct.size() == orig_via_view.size());
    for (std::size_t i = 0; i < orig_direct.size(); ++i) {
        REQUIRE(orig_via_view[i].first == orig_direct[i].first);
        REQUIRE(orig_via_view[i].second == orig_direct[i].second);
    }
    const auto reduced = red.sampler(99, 50000);
    for (std::size_t i = 0; i < orig_direct.size(); ++i) {
        const auto m = red.forward(orig_direct[i].first, orig_direct[i].second);
        REQUIRE(reduced[i].first == m.first);
        REQUIRE(reduced[i].second == m.second);
    }
}

TEST_CASE("reduced y-marginal follows the negative-index power law") {
    // t * P[Ytilde > a~(t) y] -> y^(1/gamma) with gamma = -1/2
    const auto model = beta_min_model(1.0, 1.0);
    const auto red = reduce_model(model);
    const std::uint64_t n = 10'000'000;
    const auto reduced = red.sampler(17, n);
    for (double t : {1e3, 1e4, 1e5}) {
        for (double y : {1.0, 2.0, 4.0}) {
            const double thresh = red.a_tilde(t) * y;
            std::size_t count = 0;
            for (const auto& [xt, yt] : reduced)
                if (yt > thresh) ++count;
            const double est = t * static_cast<double>(count) / static_cast<double>(n);
            const double expect = std::pow(y, -2.0);
            const double p = expect / t;
            const double se = t * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
            INFO("t=" << t << " y=" << y << " est=" << est);
            REQUIRE(std::fabs(est - expect) <= std::max(3.0 * se, 0.02 * expect));
        }
    }
}
