#pragma once

// Concrete, samplable CEVM instances covering every supported case. Each
// model carries its declared parameters, deterministic chunked sampler,
// reduced scalings, and (where derivable) analytic marginals, limit laws
// and the reduced joint measure used for verification.
//
// All samplers are inverse-transform with exactly two uniforms per draw,
// so sample streams are reproducible and independent of chunking.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cevm/classifier.hpp"
#include "cevm/evt_core.hpp"
#include "cevm/limit_laws.hpp"
#include "cevm/rng.hpp"
#include "cevm/transforms.hpp"

namespace cevm {

inline double pow_fast(double x, double p) {
    if (p == 1.0) return x;
    if (p == -1.0) return 1.0 / x;
    if (p == 2.0) return x * x;
    if (p == -2.0) return 1.0 / (x * x);
    if (p == 0.5) return std::sqrt(x);
    if (p == -0.5) return 1.0 / std::sqrt(x);
    return std::pow(x, p);
}

// Bounded one-dimensional distribution spec used for coupling factors and
// angular weights: a point mass or a uniform interval.
struct DistSpec {
    enum class Kind { point, uniform };
    Kind kind = Kind::point;
    double lo = 1.0;  // point value when kind == point
    double hi = 1.0;

    static DistSpec point(double v) { return {Kind::point, v, v}; }

    static DistSpec uniform(double lo, double hi) {
        if (!(lo < hi)) throw std::invalid_argument("DistSpec::uniform: need lo < hi");
        return {Kind::uniform, lo, hi};
    }

    double draw(double u) const { return kind == Kind::point ? lo : lo + (hi - lo) * u; }

    double cdf(double v) const {
        if (kind == Kind::point) return v >= lo ? 1.0 : 0.0;
        return std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
    }

    // E[D^p]
    double moment(double p) const {
        if (kind == Kind::point) return std::pow(lo, p);
        if (p == -1.0) return (std::log(hi) - std::log(lo)) / (hi - lo);
        return (std::pow(hi, p + 1.0) - std::pow(lo, p + 1.0)) / ((p + 1.0) * (hi - lo));
    }

    std::string describe() const {
        if (kind == Kind::point) return "point(" + std::to_string(lo) + ")";
        return "uniform(" + std::to_string(lo) + ", " + std::to_string(hi) + ")";
    }
};

// Exact evaluation of int_0^1 cdf(scale * w^expo) dw for a DistSpec cdf.
// This is the angular form shared by every reduced joint measure in the
// zoo; expo may be negative (heavy upward y-variable) or positive.
inline double angular_cdf_integral(const DistSpec& d, double scale, double expo) {
    if (!(scale > 0.0)) return 0.0;
    if (expo == 0.0) return d.cdf(scale);
    // g(w) = scale * w^expo; solve g(w) = level within (0, 1]
    const auto cross = [scale, expo](double level) {
        if (!(level > 0.0)) return expo > 0.0 ? 0.0 : kInf;
        return std::pow(level / scale, 1.0 / expo);
    };
    const auto power_int = [expo](double w_lo, double w_hi) {
        // int w^expo dw on [w_lo, w_hi]
        if (expo == -1.0) return std::log(w_hi) - std::log(w_lo);
        return (std::pow(w_hi, expo + 1.0) - std::pow(w_lo, expo + 1.0)) / (expo + 1.0);
    };
    if (d.kind == DistSpec::Kind::point) {
        const double w0 = std::clamp(cross(d.lo), 0.0, 1.0);
        // cdf is 1 where g >= point value: w >= w0 if g increases, w <= w0 if
        // g decreases
        return expo > 0.0 ? 1.0 - w0 : w0;
    }
    // uniform(lo, hi): cdf ramps between the crossings of lo and hi
    double w_hi_cross = std::clamp(cross(d.hi), 0.0, 1.0);  // g = hi
    double w_lo_cross = std::clamp(cross(d.lo), 0.0, 1.0);  // g = lo
    double full, ramp_lo, ramp_hi;
    if (expo > 0.0) {
        // g increasing: cdf = 0 below w_lo_cross, 1 above w_hi_cross
        full = 1.0 - w_hi_cross;
        ramp_lo = w_lo_cross;
        ramp_hi = w_hi_cross;
    } else {
        // g decreasing: cdf = 1 below w_hi_cross, 0 above w_lo_cross
        full = w_hi_cross;
        ramp_lo = w_hi_cross;
        ramp_hi = w_lo_cross;
    }
    double ramp = 0.0;
    if (ramp_hi > ramp_lo)
        ramp = (scale * power_int(ramp_lo, ramp_hi) - d.lo * (ramp_hi - ramp_lo)) / (d.hi - d.lo);
    return full + ramp;
}

// P[R * D > s] where R is Pareto with tail exponent `alpha` on [1, inf) and
// D an independent bounded positive factor. Exact for every s.
inline double pareto_product_survival(const DistSpec& d, double alpha, double s) {
    if (d.kind == DistSpec::Kind::point)
        return s <= d.lo ? 1.0 : std::pow(s / d.lo, -alpha);
    if (s <= d.lo) return 1.0;
    const double cut = std::min(s, d.hi);
    const double full = (d.hi - cut) / (d.hi - d.lo);
    const double ramp = std::pow(s, -alpha) *
                        (std::pow(cut, alpha + 1.0) - std::pow(d.lo, alpha + 1.0)) /
                        ((alpha + 1.0) * (d.hi - d.lo));
    return full + ramp;
}

enum class Family { beta_min, mrv_power, coupled_negative, case3, case4 };

inline std::string to_string(Family f) {
    switch (f) {
        case Family::beta_min: return "beta_min";
        case Family::mrv_power: return "mrv_power";
        case Family::coupled_negative: return "coupled_negative";
        case Family::case3: return "case3";
        case Family::case4: return "case4";
    }
    return "?";
}

// Family constructor arguments, retained for serialization.
struct FamilySpec {
    Family family = Family::beta_min;
    double a = 1.0, b = 1.0;             // beta_min
    double rho = 0.0, gamma = 0.0;       // index parameters
    double beta_inf = 0.0, b_inf = 0.0;  // endpoints where applicable
    CaseTag variant = CaseTag::IIa;      // coupled_negative
    DistSpec weight;                     // w / u / v spec
};

// Analytic knowledge attached to a model; absent entries stay empty.
struct AnalyticInfo {
    std::function<double(double)> x_survival;
    std::function<double(double)> y_survival;
    // z -> lim_t t*P[pivot > pivot_scale(t) * z]
    std::function<double(double)> pivot_scaled_limit;
    // exact finite-sample pivot survival u -> P[pivot > u], where valid
    std::function<double(double)> pivot_survival;
    double pivot_survival_from = kInf;  // validity threshold for the above
    // mu([0, x] x (y, inf]) for the reduced pair
    std::function<double(double, double)> reduced_mu;
    std::optional<SpectralMeasure> spectral;
    std::optional<double> xtail_exponent;          // tail exponent of the moment coordinate
    std::function<double(double)> xtail_moment;    // p -> E[coord^p] for p < exponent
    std::string moment_note;
};

class CevmModel {
  public:
    CevmModel() = default;

    const std::string& name() const { return name_; }
    const ModelParams& params() const { return params_; }
    const FamilySpec& spec() const { return spec_; }
    const AnalyticInfo& analytic() const { return analytic_; }
    CaseId case_id() const { return classify(params_); }
    ProductLaw law() const { return product_prediction(case_id(), params_); }

    const ScalingFunction& x_scaling() const { return alpha_; }
    const ScalingFunction& y_scaling() const { return a_; }
    const ScalingFunction& reduced_x_scaling() const { return alpha_tilde_; }
    const ScalingFunction& reduced_y_scaling() const { return a_tilde_; }

    // Scaling that normalizes the pivot for this model's case.
    double pivot_scale(double t) const {
        switch (law().scaling) {
            case ScalingCombo::alpha_times_a: return alpha_(t) * a_(t);
            case ScalingCombo::alpha_tilde: return alpha_tilde_(t);
            case ScalingCombo::alpha_tilde_times_a_tilde: return alpha_tilde_(t) * a_tilde_(t);
            case ScalingCombo::a_tilde: return a_tilde_(t);
            case ScalingCombo::a_only: return a_(t);
        }
        return 1.0;
    }

    double endpoint_product() const {
        if (params_.beta_inf && params_.b_inf) return *params_.beta_inf * *params_.b_inf;
        return 1.0;
    }

    std::pair<double, double> draw(double u1, double u2) const { return draw_(u1, u2); }

    // Samples [chunk * kChunkSize, ...) of the seeded stream into out.
    // Returns the number of samples written.
    std::uint64_t generate_chunk(std::uint64_t seed, std::uint64_t chunk, std::uint64_t total,
                                 std::pair<double, double>* out) const {
        const std::uint64_t first = chunk * rng::kChunkSize;
        if (first >= total) return 0;
        const std::uint64_t len = std::min<std::uint64_t>(rng::kChunkSize, total - first);
        auto eng = rng::chunk_engine(seed, chunk);
        for (std::uint64_t i = 0; i < len; ++i) {
            const double u1 = rng::uniform01(eng);
            const double u2 = rng::uniform01(eng);
            out[i] = draw_(u1, u2);
        }
        return len;
    }

    std::vector<std::pair<double, double>> sample(std::uint64_t seed, std::uint64_t count,
                                                  unsigned workers = 1) const {
        std::vector<std::pair<double, double>> out(count);
        rng::run_chunks(rng::chunk_count(count), workers, [&](std::uint64_t c) {
            generate_chunk(seed, c, count, out.data() + c * rng::kChunkSize);
        });
        return out;
    }

    // Streams the sample in chunks: fn(chunk_index, pointer, length). Each
    // chunk is visited exactly once; fn must be safe for concurrent chunks.
    template <class Fn>
    void visit_chunks(std::uint64_t seed, std::uint64_t count, unsigned workers, Fn&& fn) const {
        rng::run_chunks(rng::chunk_count(count), workers, [&](std::uint64_t c) {
            thread_local std::vector<std::pair<double, double>> buf;
            buf.resize(rng::kChunkSize);
            const std::uint64_t len = generate_chunk(seed, c, count, buf.data());
            fn(c, buf.data(), len);
        });
    }

    // Value of the moment-hypothesis coordinate for a raw sample: the tilde
    // coordinate for the negative-index cases, |x| otherwise.
    double moment_coordinate(double x, double /*y*/) const {
        switch (case_id().tag) {
            case CaseTag::IIa:
            case CaseTag::IIb:
            case CaseTag::IIc:
            case CaseTag::IId: return tilde(x, *params_.beta_inf);
            default: return std::fabs(x);
        }
    }

    friend CevmModel beta_min_model(double a, double b);
    friend CevmModel mrv_power_model(double rho, double gamma, const DistSpec& w);
    friend CevmModel coupled_negative_model(double rho, double gamma, CaseTag variant,
                                            const DistSpec& u);
    friend CevmModel case3_model(double gamma, const DistSpec& v, double b_inf);
    friend CevmModel case4_model(double rho, double gamma, double beta_inf);

  private:
    std::string name_;
    FamilySpec spec_;
    ModelParams params_;
    std::function<std::pair<double, double>(double, double)> draw_;
    ScalingFunction alpha_, a_, alpha_tilde_, a_tilde_;
    AnalyticInfo analytic_;
};

// X ~ Beta(1, a) via X = 1 - U^(1/a); Z with P[Z > 1 - 1/x] = x^(-b);
// Y = min(X, Z). Both endpoints are 1 and rho = gamma = -1/(a+b). The
// reduced scaling is the quantile gap a~(t) = t^(1/(a+b)), under which the
// pivot limit is a * y^-(a+b) * Q(a, b).
inline CevmModel beta_min_model(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("beta_min_model: need a, b > 0");
    CevmModel m;
    m.name_ = "beta_min(a=" + std::to_string(a) + ",b=" + std::to_string(b) + ")";
    m.spec_ = {Family::beta_min, a, b, -1.0 / (a + b), -1.0 / (a + b), 1.0, 1.0, CaseTag::IIa,
               DistSpec::point(1.0)};
    m.params_.rho = -1.0 / (a + b);
    m.params_.gamma = m.params_.rho;
    m.params_.beta_inf = 1.0;
    m.params_.b_inf = 1.0;
    m.params_.psi2_zero = false;
    m.params_.alpha_over_a_bounded = true;  // alpha~ == a~
    const double inv_a = 1.0 / a;
    const double inv_b = 1.0 / b;
    m.draw_ = [inv_a, inv_b](double u1, double u2) {
        const double x = 1.0 - pow_fast(u1, inv_a);
        const double z = 1.0 - pow_fast(u2, inv_b);
        return std::pair<double, double>(x, std::min(x, z));
    };
    const double kappa = 1.0 / (a + b);
    m.alpha_ = ScalingFunction::power_law(1.0, -kappa);
    m.a_ = ScalingFunction::power_law(1.0, -kappa);
    m.alpha_tilde_ = ScalingFunction::power_law(1.0, kappa);
    m.a_tilde_ = ScalingFunction::power_law(1.0, kappa);

    m.analytic_.x_survival = [a](double x) {
        if (x <= 0.0) return 1.0;
        if (x >= 1.0) return 0.0;
        return std::pow(1.0 - x, a);
    };
    m.analytic_.y_survival = [a, b](double y) {
        if (y <= 0.0) return 1.0;
        if (y >= 1.0) return 0.0;
        return std::pow(1.0 - y, a + b);
    };
    m.analytic_.pivot_scaled_limit = [a, b](double y) { return beta_min_product_limit(y, a, b); };
    m.analytic_.reduced_mu = [a, b](double x, double y) {
        if (!(x > y) || !(y > 0.0)) return 0.0;
        return (std::pow(y, -a) - std::pow(x, -a)) * std::pow(y, -b);
    };
    m.analytic_.xtail_exponent = a;
    m.analytic_.xtail_moment = [a](double p) { return a / (a - p); };
    m.analytic_.moment_note =
        "Beta(1,a) endpoint tail: E[(1-X)^(-p)] = a/(a-p) for p < a, infinite otherwise";
    return m;
}

// R standard Pareto, W from w on [0,1): (Z1, Z2) = (RW, R(1-W)) is standard
// multivariate regularly varying with angular law w; the model returns
// (X, Y) = (Z1^rho, Z2^gamma) with alpha(t) = t^rho, a(t) = t^gamma.
inline CevmModel mrv_power_model(double rho, double gamma, const DistSpec& w) {
    if (!(rho > 0.0) || !(gamma > 0.0))
        throw std::invalid_argument("mrv_power_model: need rho, gamma > 0");
    if (!(w.lo >= 0.0) || !(w.hi < 1.0))
        throw std::invalid_argument("mrv_power_model: w must be supported in [0, 1)");
    CevmModel m;
    m.name_ = "mrv_power(rho=" + std::to_string(rho) + ",gamma=" + std::to_string(gamma) +
              ",w=" + w.describe() + ")";
    m.spec_ = {Family::mrv_power, 0.0, 0.0, rho, gamma, 0.0, 0.0, CaseTag::I, w};
    m.params_.rho = rho;
    m.params_.gamma = gamma;
    m.params_.psi2_zero = true;
    m.draw_ = [rho, gamma, w](double u1, double u2) {
        const double r = 1.0 / u1;
        const double wv = w.draw(u2);
        return std::pair<double, double>(pow_fast(r * wv, rho), pow_fast(r * (1.0 - wv), gamma));
    };
    m.alpha_ = ScalingFunction::power_law(1.0, rho);
    m.a_ = ScalingFunction::power_law(1.0, gamma);
    m.alpha_tilde_ = m.alpha_;
    m.a_tilde_ = m.a_;

    SpectralMeasure s;
    if (w.kind == DistSpec::Kind::point) {
        s = SpectralMeasure::point_mass(w.lo);
        const double w0 = w.lo;
        m.analytic_.x_survival = [w0, rho](double x) {
            return std::min(1.0, w0 * std::pow(x, -1.0 / rho));
        };
        m.analytic_.y_survival = [w0, gamma](double y) {
            return std::min(1.0, (1.0 - w0) * std::pow(y, -1.0 / gamma));
        };
        m.analytic_.xtail_moment = [w0, rho](double p) {
            return std::pow(w0, rho * p) / (1.0 - rho * p);
        };
    } else {
        // midpoint discretization of the angular density
        const std::size_t nbins = 2000;
        for (std::size_t i = 0; i < nbins; ++i) {
            const double omega = w.lo + (w.hi - w.lo) * (static_cast<double>(i) + 0.5) / nbins;
            s.atoms.push_back({omega, 1.0 / static_cast<double>(nbins)});
        }
    }
    m.analytic_.spectral = s;
    m.analytic_.pivot_scaled_limit = [s, rho, gamma](double z) {
        return case_i_spectral_limit(z, s, rho, gamma);
    };
    m.analytic_.xtail_exponent = 1.0 / rho;
    m.analytic_.moment_note = "X = (RW)^rho with R Pareto(1): E[X^p] finite iff p < 1/rho";
    return m;
}

// Negative-index coupling: Ytilde Pareto with P[Ytilde > y] = y^(1/gamma),
// Xtilde = Ytilde^(|rho|/|gamma|) * U with U bounded in [1, 2], mapped back
// through the variant's endpoint geometry. Requires |rho| <= |gamma|.
inline CevmModel coupled_negative_model(double rho, double gamma, CaseTag variant,
                                        const DistSpec& u) {
    if (!(rho < 0.0) || !(gamma < 0.0))
        throw std::invalid_argument("coupled_negative_model: need rho, gamma < 0");
    if (std::fabs(rho) > std::fabs(gamma))
        throw std::invalid_argument("coupled_negative_model: unsupported coupling");
    if (!(u.lo >= 1.0) || !(u.hi <= 2.0))
        throw std::invalid_argument("coupled_negative_model: u must be supported in [1, 2]");
    const bool is2 = variant == CaseTag::IIa || variant == CaseTag::IIb ||
                     variant == CaseTag::IIc || variant == CaseTag::IId;
    if (!is2) throw std::invalid_argument("coupled_negative_model: variant must be IIa..IId");

    CevmModel m;
    m.name_ = "coupled_" + to_string(variant) + "(rho=" + std::to_string(rho) +
              ",gamma=" + std::to_string(gamma) + ",u=" + u.describe() + ")";
    const double abs_rho = -rho;
    const double abs_gamma = -gamma;
    const double r = abs_rho / abs_gamma;

    double beta_inf = 0.0, b_inf = 0.0;
    switch (variant) {
        case CaseTag::IIa: beta_inf = 1.0; b_inf = 1.0; break;
        case CaseTag::IIb: beta_inf = 0.0; b_inf = 0.0; break;
        case CaseTag::IIc: beta_inf = 0.0; b_inf = 1.0; break;
        default: beta_inf = -1.0; b_inf = -1.0; break;
    }
    m.spec_ = {Family::coupled_negative, 0.0, 0.0, rho, gamma, beta_inf, b_inf, variant, u};
    m.params_.rho = rho;
    m.params_.gamma = gamma;
    m.params_.beta_inf = beta_inf;
    m.params_.b_inf = b_inf;
    m.params_.psi2_zero = false;
    m.params_.alpha_over_a_bounded = true;  // alpha~/a~ = t^(|rho|-|gamma|), |rho| <= |gamma|

    m.draw_ = [gamma, r, u, variant](double u1, double u2) {
        const double yt = pow_fast(u1, gamma);  // Pareto, P[yt > y] = y^(1/gamma)
        const double xt = pow_fast(yt, r) * u.draw(u2);
        switch (variant) {
            case CaseTag::IIa: return std::pair<double, double>(1.0 - 1.0 / xt, 1.0 - 1.0 / yt);
            case CaseTag::IIb: return std::pair<double, double>(-1.0 / xt, -1.0 / yt);
            case CaseTag::IIc: return std::pair<double, double>(-1.0 / xt, 1.0 - 1.0 / yt);
            default: return std::pair<double, double>(-1.0 - 1.0 / xt, -1.0 - 1.0 / yt);
        }
    };
    m.alpha_ = ScalingFunction::power_law(1.0, rho);
    m.a_ = ScalingFunction::power_law(1.0, gamma);
    m.alpha_tilde_ = ScalingFunction::power_law(1.0, abs_rho);
    m.a_tilde_ = ScalingFunction::power_law(1.0, abs_gamma);

    m.analytic_.y_survival = [abs_gamma, variant, b_inf](double y) {
        if (y >= b_inf) return 0.0;
        const double gap = b_inf - y;  // = 1/Ytilde at the boundary
        if (gap >= 1.0) return 1.0;
        return std::pow(gap, 1.0 / abs_gamma);
    };
    m.analytic_.x_survival = [abs_rho, u, beta_inf](double x) {
        if (x >= beta_inf) return 0.0;
        const double xt = 1.0 / (beta_inf - x);  // Xtilde threshold
        return pareto_product_survival(u, 1.0 / abs_rho, xt);
    };
    m.analytic_.reduced_mu = [u, r, abs_rho, abs_gamma](double x, double y) {
        if (!(x > 0.0) || !(y > 0.0)) return 0.0;
        return std::pow(y, -1.0 / abs_gamma) *
               angular_cdf_integral(u, x * std::pow(y, -r), abs_rho);
    };
    if (variant == CaseTag::IIb) {
        const double exponent = 1.0 / (abs_rho + abs_gamma);
        const double csum = u.moment(exponent);
        m.analytic_.pivot_scaled_limit = [csum, exponent](double z) {
            return csum * std::pow(z, -exponent);
        };
        m.analytic_.pivot_survival = [csum, exponent](double v) {
            return csum * std::pow(v, -exponent);
        };
        m.analytic_.pivot_survival_from = u.hi;
    }
    m.analytic_.xtail_exponent = 1.0 / abs_rho;
    m.analytic_.xtail_moment = [u, abs_rho](double p) {
        return u.moment(p) / (1.0 - p * abs_rho);
    };
    m.analytic_.moment_note =
        "Xtilde = Ytilde^(|rho|/|gamma|) U: E[Xtilde^p] = E[U^p]/(1-p|rho|) for p < 1/|rho|";
    return m;
}

// Case III instance: Ytilde Pareto with tail exponent 1/|gamma|, X = Ytilde*V
// with bounded positive V, Y = b_inf - 1/Ytilde. alpha(t) ~ 1/a(t) holds by
// construction with rho = |gamma|.
inline CevmModel case3_model(double gamma, const DistSpec& v, double b_inf) {
    if (!(gamma < 0.0)) throw std::invalid_argument("case3_model: need gamma < 0");
    if (!(v.lo > 0.0)) throw std::invalid_argument("case3_model: v must be positive");
    if (!(b_inf > 0.0)) throw std::invalid_argument("case3_model: need b_inf > 0");
    CevmModel m;
    m.name_ = "case3(gamma=" + std::to_string(gamma) + ",v=" + v.describe() +
              ",b_inf=" + std::to_string(b_inf) + ")";
    const double abs_gamma = -gamma;
    m.spec_ = {Family::case3, 0.0, 0.0, abs_gamma, gamma, 0.0, b_inf, CaseTag::III, v};
    m.params_.rho = abs_gamma;
    m.params_.gamma = gamma;
    m.params_.b_inf = b_inf;
    m.params_.psi2_zero = false;
    m.params_.alpha_sim_recip_a = true;
    m.draw_ = [gamma, v, b_inf](double u1, double u2) {
        const double yt = pow_fast(u1, gamma);
        return std::pair<double, double>(yt * v.draw(u2), b_inf - 1.0 / yt);
    };
    m.alpha_ = ScalingFunction::power_law(1.0, abs_gamma);
    m.a_ = ScalingFunction::power_law(1.0, gamma);
    m.alpha_tilde_ = m.alpha_;
    m.a_tilde_ = ScalingFunction::power_law(1.0, abs_gamma);

    m.analytic_.y_survival = [abs_gamma, b_inf](double y) {
        if (y >= b_inf) return 0.0;
        const double gap = b_inf - y;
        if (gap >= 1.0) return 1.0;
        return std::pow(gap, 1.0 / abs_gamma);
    };
    const double cv = v.moment(1.0 / abs_gamma);
    m.analytic_.x_survival = [abs_gamma, v](double x) {
        return pareto_product_survival(v, 1.0 / abs_gamma, x);
    };
    m.analytic_.pivot_scaled_limit = [cv, abs_gamma, b_inf](double z) {
        return std::pow(b_inf, 1.0 / abs_gamma) * cv * std::pow(z, -1.0 / abs_gamma);
    };
    if (v.kind == DistSpec::Kind::point) {
        // XY = c*(b_inf*Ytilde - 1) exactly
        const double c = v.lo;
        m.analytic_.pivot_survival = [c, b_inf, abs_gamma](double u) {
            const double arg = (u / c + 1.0) / b_inf;
            if (arg <= 1.0) return 1.0;
            return std::pow(arg, -1.0 / abs_gamma);
        };
        m.analytic_.pivot_survival_from = 0.0;
    }
    m.analytic_.reduced_mu = [v, abs_gamma](double x, double y) {
        if (!(x > 0.0) || !(y > 0.0)) return 0.0;
        return std::pow(y, -1.0 / abs_gamma) * angular_cdf_integral(v, x / y, abs_gamma);
    };
    m.analytic_.xtail_exponent = 1.0 / abs_gamma;
    m.analytic_.xtail_moment = [v, abs_gamma](double p) {
        return v.moment(p) / (1.0 - p * abs_gamma);
    };
    m.analytic_.moment_note = "X = Ytilde*V: E[X^p] = E[V^p]/(1-p|gamma|) for p < 1/|gamma|";
    return m;
}

// Case IV instance: Y Pareto with P[Y > y] = y^(-1/gamma), U uniform on
// (0, beta_inf), X = beta_inf - Y^(rho/gamma) U in (0, beta_inf). The
// product limit is the closed form z^(-1/gamma) beta_inf^(1/gamma).
inline CevmModel case4_model(double rho, double gamma, double beta_inf) {
    if (!(rho < 0.0) || !(gamma > 0.0) || !(beta_inf > 0.0))
        throw std::invalid_argument("case4_model: need rho < 0 < gamma and beta_inf > 0");
    CevmModel m;
    m.name_ = "case4(rho=" + std::to_string(rho) + ",gamma=" + std::to_string(gamma) +
              ",beta_inf=" + std::to_string(beta_inf) + ")";
    m.spec_ = {Family::case4, 0.0, 0.0, rho, gamma, beta_inf, 0.0, CaseTag::IV,
               DistSpec::uniform(0.0, beta_inf)};
    m.params_.rho = rho;
    m.params_.gamma = gamma;
    m.params_.beta_inf = beta_inf;
    m.params_.psi2_zero = false;
    const double q = rho / gamma;  // negative
    m.draw_ = [gamma, q, beta_inf](double u1, double u2) {
        const double y = pow_fast(u1, -gamma);
        const double x = beta_inf - pow_fast(y, q) * (beta_inf * u2);
        return std::pair<double, double>(x, y);
    };
    m.alpha_ = ScalingFunction::power_law(1.0, rho);
    m.a_ = ScalingFunction::power_law(1.0, gamma);
    m.alpha_tilde_ = m.alpha_;
    m.a_tilde_ = m.a_;

    m.analytic_.y_survival = [gamma](double y) {
        if (y <= 1.0) return 1.0;
        return std::pow(y, -1.0 / gamma);
    };
    m.analytic_.pivot_scaled_limit = [beta_inf, gamma](double z) {
        return case_iv_limit(z, beta_inf, gamma);
    };
    const double abs_rho = -rho;
    m.analytic_.reduced_mu = [beta_inf, gamma, abs_rho, q](double x, double y) {
        if (!(x > 0.0) || !(y > 0.0)) return 0.0;
        const DistSpec u = DistSpec::uniform(0.0, beta_inf);
        // scale * w^(-|rho|) with scale = x * y^(|rho|/gamma)
        return std::pow(y, -1.0 / gamma) *
               angular_cdf_integral(u, x * std::pow(y, -q), -abs_rho);
    };
    m.analytic_.xtail_exponent = kInf;  // X is bounded
    m.analytic_.xtail_moment = [](double) { return kInf; };
    m.analytic_.moment_note = "X bounded in [0, beta_inf]: all moments finite";
    return m;
}

// Moment-hypothesis diagnosis for E[coord^p], where coord is the model's
// moment coordinate. Analytic when the tail exponent is known in closed
// form, otherwise an empirical tail-slope estimate.
struct MomentDiagnosis {
    enum class Verdict { finite_analytic, infinite_analytic, empirical };
    double exponent = 0.0;
    Verdict verdict = Verdict::empirical;
    std::optional<double> value;              // E[coord^p] when finite and known
    std::optional<double> slope;              // empirical tail exponent estimate
    std::optional<double> ci_low, ci_high;    // 95% band for the slope
    std::string justification;
};

inline std::string to_string(MomentDiagnosis::Verdict v) {
    switch (v) {
        case MomentDiagnosis::Verdict::finite_analytic: return "finite-analytic";
        case MomentDiagnosis::Verdict::infinite_analytic: return "infinite-analytic";
        case MomentDiagnosis::Verdict::empirical: return "empirical";
    }
    return "?";
}

// Empirical log-log tail slope of the moment coordinate via the top order
// statistics, for models without a closed-form tail exponent.
inline MomentDiagnosis moment_diagnostic_empirical(const CevmModel& model, double p,
                                                   std::uint64_t seed = 1,
                                                   std::uint64_t n = 200000) {
    MomentDiagnosis d;
    d.exponent = p;
    auto pairs = model.sample(seed, n);
    std::vector<double> coord(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i)
        coord[i] = model.moment_coordinate(pairs[i].first, pairs[i].second);
    std::sort(coord.begin(), coord.end(), std::greater<>());
    const std::size_t k = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) acc += std::log(coord[i]);
    const double xi = acc / static_cast<double>(k) - std::log(coord[k]);
    const double slope = 1.0 / xi;
    const double half = 1.96 / std::sqrt(static_cast<double>(k));
    d.verdict = MomentDiagnosis::Verdict::empirical;
    d.slope = slope;
    d.ci_low = slope / (1.0 + half);
    d.ci_high = slope / (1.0 - half);
    d.justification = "empirical tail-slope estimate from top order statistics";
    return d;
}

inline MomentDiagnosis moment_diagnostic(const CevmModel& model, double p,
                                         std::uint64_t seed = 1, std::uint64_t n = 200000) {
    const auto& an = model.analytic();
    if (!an.xtail_exponent) return moment_diagnostic_empirical(model, p, seed, n);
    MomentDiagnosis d;
    d.exponent = p;
    d.justification = an.moment_note;
    if (p < *an.xtail_exponent) {
        d.verdict = MomentDiagnosis::Verdict::finite_analytic;
        if (an.xtail_moment) {
            const double v = an.xtail_moment(p);
            if (std::isfinite(v)) d.value = v;
        }
    } else {
        d.verdict = MomentDiagnosis::Verdict::infinite_analytic;
    }
    return d;
}

}  // namespace cevm
