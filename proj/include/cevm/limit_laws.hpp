#pragma once

// Closed-form and quadrature-based evaluators for the explicit product
// limits: the Case I spectral integral, the Case IV constant, the Beta-min
// family limit, plus spectral-measure utilities (estimation from samples,
// homogeneity checks).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cevm/evt_core.hpp"

namespace cevm {

// Finite weighted atom set on [0, 1) representing an angular measure.
struct SpectralAtom {
    double omega = 0.0;
    double weight = 0.0;
};

struct SpectralMeasure {
    std::vector<SpectralAtom> atoms;

    static SpectralMeasure point_mass(double omega, double weight = 1.0) {
        SpectralMeasure s;
        s.atoms.push_back({omega, weight});
        s.validate();
        return s;
    }

    void validate() const {
        for (const auto& a : atoms) {
            if (!(a.omega >= 0.0) || !(a.omega < 1.0))
                throw std::invalid_argument("SpectralMeasure: omega must lie in [0, 1)");
            if (!(a.weight >= 0.0))
                throw std::invalid_argument("SpectralMeasure: weights must be nonnegative");
        }
    }

    double total_mass() const {
        double m = 0.0;
        for (const auto& a : atoms) m += a.weight;
        return m;
    }

    bool empty() const { return atoms.empty(); }
};

// Adaptive Gauss-Kronrod integration with an absolute error target. The
// refinement itself runs against a tight relative tolerance; the returned
// error estimate is then checked against the absolute target and the call
// fails loudly when it cannot be met.
inline double integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                 double abs_tol) {
    double err = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, lo, hi, 18, 1e-12, &err);
    if (!(err <= abs_tol))
        throw std::runtime_error("integrate_adaptive: achieved error " + std::to_string(err) +
                                 " exceeds tolerance " + std::to_string(abs_tol));
    return value;
}

// Case I limit of t*P[XY/(alpha(t)a(t)) > z]:
//   z^(-1/(rho+gamma)) * sum_atoms w * omega^(rho/(rho+gamma)) (1-omega)^(gamma/(rho+gamma)).
// An empty measure gives the degenerate limit 0.
inline double case_i_spectral_limit(double z, const SpectralMeasure& s, double rho, double gamma) {
    if (!(z > 0.0) || !(rho > 0.0) || !(gamma > 0.0))
        throw std::invalid_argument("case_i_spectral_limit: need z, rho, gamma > 0");
    s.validate();
    if (s.empty()) return 0.0;
    const double p = rho / (rho + gamma);
    const double q = gamma / (rho + gamma);
    double acc = 0.0;
    for (const auto& a : s.atoms) acc += a.weight * std::pow(a.omega, p) * std::pow(1.0 - a.omega, q);
    return std::pow(z, -1.0 / (rho + gamma)) * acc;
}

// Case IV limit of t*P[XY/a(t) > z]: z^(-1/gamma) * beta_inf^(1/gamma).
inline double case_iv_limit(double z, double beta_inf, double gamma) {
    if (!(z > 0.0) || !(beta_inf > 0.0) || !(gamma > 0.0))
        throw std::invalid_argument("case_iv_limit: need z, beta_inf, gamma > 0");
    return std::pow(z, -1.0 / gamma) * std::pow(beta_inf, 1.0 / gamma);
}

// Q(a, b) = int_0^{1/2} (1-z)^b z^(a-1) dz. The endpoint singularity for
// a < 1 is removed by the substitution z = u^(1/a), which flattens the
// integrand to (1/a)(1 - u^(1/a))^b on [0, (1/2)^a]. For a >= 1 the leading
// binomial-series terms of (1-z)^b are integrated in closed form so that
// the numeric remainder is smooth enough at z = 0 for the error estimate
// to certify the absolute target.
inline double beta_min_tail_constant(double a, double b, double abs_tol = 1e-10) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("beta_min_tail_constant: need a, b > 0");
    if (a < 1.0) {
        const double upper = std::pow(0.5, a);
        return integrate_adaptive(
            [a, b](double u) { return std::pow(1.0 - std::pow(u, 1.0 / a), b) / a; }, 0.0, upper,
            abs_tol);
    }
    constexpr int kTerms = 5;
    double coef[kTerms + 1];
    coef[0] = 1.0;
    for (int k = 1; k <= kTerms; ++k) coef[k] = -coef[k - 1] * (b - (k - 1)) / k;
    double poly = 0.0;
    for (int k = 0; k <= kTerms; ++k) poly += coef[k] * std::pow(0.5, a + k) / (a + k);
    const double remainder = integrate_adaptive(
        [a, b, &coef](double z) {
            double p = 0.0, zp = 1.0;
            for (int k = 0; k <= kTerms; ++k) {
                p += coef[k] * zp;
                zp *= z;
            }
            return (std::pow(1.0 - z, b) - p) * std::pow(z, a - 1.0);
        },
        0.0, 0.5, abs_tol);
    return poly + remainder;
}

// Limit of t*P[(1 - XY)^{-1} > a~(t) y] for the Beta-min family:
//   a * y^-(a+b) * Q(a, b).
inline double beta_min_product_limit(double y, double a, double b, double abs_tol = 1e-10) {
    if (!(y > 0.0)) throw std::invalid_argument("beta_min_product_limit: need y > 0");
    return a * std::pow(y, -(a + b)) * beta_min_tail_constant(a, b, abs_tol);
}

// Rectangle (x_lo, x_hi] x (y_lo, y_hi]; +-inf bounds are allowed.
struct Rect {
    double x_lo = -kInf;
    double x_hi = kInf;
    double y_lo = -kInf;
    double y_hi = kInf;

    bool contains(double x, double y) const {
        return x > x_lo && x <= x_hi && y > y_lo && y <= y_hi;
    }

    Rect scaled(double c) const {
        auto s = [c](double v) { return std::isfinite(v) ? c * v : v; };
        return {s(x_lo), s(x_hi), s(y_lo), s(y_hi)};
    }
};

// Angular measure estimate from tail samples: for points with x + y above
// the threshold, histogram w = x/(x+y) and normalize so that the total mass
// estimates S per nu{x+y > r, w in .} = r^{-1} S(.). `t_scale` rescales when
// the points were pre-divided by t; raw points use the default 1.
inline SpectralMeasure spectral_from_samples(std::span<const std::pair<double, double>> pairs,
                                             double r_threshold, std::size_t bins,
                                             double t_scale = 1.0) {
    if (!(r_threshold > 0.0) || bins == 0)
        throw std::invalid_argument("spectral_from_samples: bad threshold or bins");
    std::vector<std::size_t> counts(bins, 0);
    std::size_t exceed = 0;
    for (const auto& [x, y] : pairs) {
        const double r = x + y;
        if (!(r > r_threshold)) continue;
        ++exceed;
        const double w = x / r;
        auto idx = static_cast<std::size_t>(w * static_cast<double>(bins));
        if (idx >= bins) idx = bins - 1;
        ++counts[idx];
    }
    if (exceed < 50) throw std::invalid_argument("spectral_from_samples: insufficient tail data");
    const double mass =
        t_scale * r_threshold * static_cast<double>(exceed) / static_cast<double>(pairs.size());
    SpectralMeasure s;
    for (std::size_t i = 0; i < bins; ++i) {
        if (counts[i] == 0) continue;
        const double omega = (static_cast<double>(i) + 0.5) / static_cast<double>(bins);
        s.atoms.push_back({omega, mass * static_cast<double>(counts[i]) / static_cast<double>(exceed)});
    }
    return s;
}

// True iff nu looks homogeneous of order -1 across the scaling c on the
// given rectangle: |nu(c * rect) - nu(rect)/c| <= tol.
inline bool homogeneity_check(const std::function<double(const Rect&)>& nu_estimate, double c,
                              const Rect& rect, double tol) {
    if (!(c > 0.0)) throw std::invalid_argument("homogeneity_check: c must be positive");
    return std::fabs(nu_estimate(rect.scaled(c)) - nu_estimate(rect) / c) <= tol;
}

}  // namespace cevm
