#pragma once

// Tail-index and scaled-tail estimation used to confront simulations with
// the predicted limits: Hill estimator, rectangle exceedance counting,
// conditional distribution estimates, asymptotic-independence and
// degenerate-limit diagnostics, and a log-log regression cross-check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cevm/evt_core.hpp"
#include "cevm/limit_laws.hpp"

namespace cevm {

// Hill estimate of xi = 1/(tail exponent) with the asymptotic-normal 95%
// band xi_hat * (1 +- 1.96/sqrt(k)).
struct TailEstimate {
    double xi_hat = 0.0;
    std::size_t k = 0;
    std::size_t n = 0;
    double ci_low = 0.0;
    double ci_high = 0.0;

    double tail_exponent() const { return 1.0 / xi_hat; }
};

inline TailEstimate hill(std::span<const double> samples, std::size_t k) {
    const std::size_t n = samples.size();
    if (k < 1 || k + 1 > n) throw std::invalid_argument("hill: k out of range");
    std::vector<double> top(samples.begin(), samples.end());
    std::nth_element(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(k), top.end(),
                     std::greater<>());
    top.resize(k + 1);
    std::sort(top.begin(), top.end(), std::greater<>());
    if (!(top[k] > 0.0))
        throw std::invalid_argument("hill: nonpositive sample among top order statistics");
    const double log_ref = std::log(top[k]);
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) acc += std::log(top[i]) - log_ref;
    TailEstimate e;
    e.xi_hat = acc / static_cast<double>(k);
    e.k = k;
    e.n = n;
    const double half = 1.96 * e.xi_hat / std::sqrt(static_cast<double>(k));
    e.ci_low = e.xi_hat - half;
    e.ci_high = e.xi_hat + half;
    return e;
}

// Estimate of t*P[(X/s1(t), Y/s2(t)) in region] with its binomial standard
// error; zero exceedances fall back to the rule-of-three bound.
struct ScaledTailEstimate {
    double t = 0.0;
    Rect region;
    double value = 0.0;
    double se = 0.0;
    std::uint64_t exceedances = 0;
    std::uint64_t n = 0;
};

inline ScaledTailEstimate scaled_tail_from_counts(double t, std::uint64_t count, std::uint64_t n,
                                                  const Rect& region = {}) {
    ScaledTailEstimate e;
    e.t = t;
    e.region = region;
    e.exceedances = count;
    e.n = n;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(count) / nn;
    e.value = t * p;
    e.se = count == 0 ? t * 3.0 / nn : t * std::sqrt(p * (1.0 - p) / nn);
    return e;
}

inline ScaledTailEstimate scaled_tail(std::span<const std::pair<double, double>> pairs, double t,
                                      const ScalingFunction& s1, const ScalingFunction& s2,
                                      const Rect& region) {
    if (static_cast<double>(pairs.size()) < t)
        throw std::invalid_argument("scaled_tail: need n >= t");
    const double d1 = s1(t);
    const double d2 = s2(t);
    std::uint64_t count = 0;
    for (const auto& [x, y] : pairs)
        if (region.contains(x / d1, y / d2)) ++count;
    return scaled_tail_from_counts(t, count, pairs.size(), region);
}

// Empirical conditional distribution on a fixed grid.
struct EmpiricalCdf {
    std::vector<double> grid;
    std::vector<double> values;
    std::size_t exceedances = 0;

    double spread() const {
        if (values.empty()) return 0.0;
        const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        return *hi - *lo;
    }
};

// Distribution of (x - center(t)) / x_scale(t) among samples whose y exceeds
// y_threshold(t) * y_level. Needs at least 30 exceedances.
inline EmpiricalCdf conditional_distribution(std::span<const std::pair<double, double>> pairs,
                                             double t, const ScalingFunction& x_scale,
                                             const ScalingFunction& y_threshold,
                                             std::span<const double> x_grid, double y_level = 1.0,
                                             const std::function<double(double)>& center = {}) {
    const double thresh = y_threshold(t) * y_level;
    const double scale = x_scale(t);
    const double c = center ? center(t) : 0.0;
    std::vector<double> xs;
    for (const auto& [x, y] : pairs)
        if (y > thresh) xs.push_back((x - c) / scale);
    if (xs.size() < 30)
        throw std::invalid_argument("conditional_distribution: too few exceedances");
    std::sort(xs.begin(), xs.end());
    EmpiricalCdf out;
    out.exceedances = xs.size();
    out.grid.assign(x_grid.begin(), x_grid.end());
    out.values.reserve(out.grid.size());
    for (double g : out.grid) {
        const auto it = std::upper_bound(xs.begin(), xs.end(), g);
        out.values.push_back(static_cast<double>(it - xs.begin()) /
                             static_cast<double>(xs.size()));
    }
    return out;
}

// Joint-exceedance estimate t*P[X > A(t)x, Y > a(t)y]. Under the model's
// conditional convergence this decays to zero whenever A grows faster than
// the model's own x-scaling: the limit concentrates on the axes.
inline ScaledTailEstimate asymptotic_independence_diag(
    std::span<const std::pair<double, double>> pairs, double t, const ScalingFunction& upper_scale,
    const ScalingFunction& y_scale, double x, double y) {
    Rect region{x, kInf, y, kInf};
    return scaled_tail(pairs, t, upper_scale, y_scale, region);
}

// Spread of the conditional distribution of (x - center(t))/A(t) given
// y > y_threshold(t) * y_level, over the x grid. A flat (degenerate) limit
// gives spread near 0; a proper limit distribution keeps it positive.
inline double degeneracy_diag(std::span<const std::pair<double, double>> pairs, double t,
                              const ScalingFunction& probe_scale,
                              const std::function<double(double)>& probe_center,
                              const ScalingFunction& y_threshold, double y_level,
                              std::span<const double> x_grid) {
    return conditional_distribution(pairs, t, probe_scale, y_threshold, x_grid, y_level,
                                    probe_center)
        .spread();
}

// Tail exponent from the least-squares slope of log empirical survival
// against log threshold, thresholds taken at the order statistics picked by
// the tail fractions in `quantile_grid` (defaults spanning the top decade).
inline RvIndex index_regression(std::span<const double> samples,
                                std::span<const double> quantile_grid = {}) {
    const std::size_t n = samples.size();
    if (n < 1000) throw std::invalid_argument("index_regression: need at least 1000 samples");
    static constexpr double default_grid[] = {0.001, 0.0017, 0.003, 0.0056, 0.01,
                                              0.017, 0.03,   0.056, 0.1};
    std::span<const double> grid =
        quantile_grid.empty() ? std::span<const double>(default_grid) : quantile_grid;
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    std::vector<std::size_t> ranks;
    for (double q : grid) {
        if (!(q > 0.0) || !(q < 1.0))
            throw std::invalid_argument("index_regression: quantile_grid must lie in (0,1)");
        auto r = static_cast<std::size_t>(std::llround(q * static_cast<double>(n)));
        r = std::clamp<std::size_t>(r, 1, n);
        ranks.push_back(r);
    }
    std::sort(ranks.begin(), ranks.end());
    ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());
    // points: (log s_(r), log(r/n)); survival at the r-th largest is r/n
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t m = 0;
    double first_x = 0.0;
    bool varies = false;
    for (std::size_t r : ranks) {
        const double s = sorted[r - 1];
        if (!(s > 0.0)) throw std::invalid_argument("index_regression: nonpositive threshold");
        const double lx = std::log(s);
        const double ly = std::log(static_cast<double>(r) / static_cast<double>(n));
        if (m == 0)
            first_x = lx;
        else if (lx != first_x)
            varies = true;
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    const double mm = static_cast<double>(m);
    const double denom = sxx - sx * sx / mm;
    if (!varies || !(std::fabs(denom) > 0.0))
        throw std::invalid_argument("index_regression: degenerate spread");
    const double slope = (sxy - sx * sy / mm) / denom;
    return RvIndex{-slope};
}

}  // namespace cevm
