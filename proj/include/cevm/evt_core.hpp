#pragma once

// Univariate extreme value primitives: the GEV family, regular variation
// indices, scaling/centering construction for domains of attraction,
// monotone left-inverses and the (psi1, psi2) scaling limit forms.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cevm {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// GEV shape parameter. gamma > 0 is the heavy-tailed branch, gamma < 0 the
// bounded-support branch. gamma == 0 is admitted for CDF evaluation only;
// every product-analysis path requires gamma != 0.
struct GevShape {
    double gamma = 0.0;
};

// Exponent of regular variation. Sign carries meaning: positive indices
// describe growing scalings, negative indices describe tail decay.
struct RvIndex {
    double value = 0.0;
};

// Support interval {x : 1 + gamma*x > 0}.
inline double gev_lower_end(double gamma) { return gamma > 0 ? -1.0 / gamma : -kInf; }
inline double gev_upper_end(double gamma) { return gamma < 0 ? -1.0 / gamma : kInf; }

// GEV distribution function. Clamps outside the support closure (0 below
// the lower end, 1 above the upper end) so evaluation is total.
inline double gev_cdf(double x, GevShape shape) {
    if (std::isnan(x) || std::isnan(shape.gamma))
        throw std::invalid_argument("gev_cdf: invalid argument");
    const double g = shape.gamma;
    if (g == 0.0) return std::exp(-std::exp(-x));
    if (x <= gev_lower_end(g)) return 0.0;
    if (x >= gev_upper_end(g)) return 1.0;
    return std::exp(-std::pow(1.0 + g * x, -1.0 / g));
}

// Left-continuous generalized inverse inf{s in [lo, hi] : f(s) >= y} of a
// nondecreasing f. Throws when y exceeds f on the whole domain.
template <class F>
double left_inverse(F&& f, double lo, double hi, double y) {
    if (!(lo <= hi)) throw std::invalid_argument("left_inverse: empty domain");
    if (f(lo) >= y) return lo;
    if (f(hi) < y) throw std::invalid_argument("left_inverse: inverse undefined");
    // invariant: f(lo) < y <= f(hi)
    while (true) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) >= y)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

// psi1/psi2 limit forms of the scaling and centering ratios. Either psi2 is
// identically zero or it takes the one-parameter form indexed by k.
struct PsiPair {
    double rho = 0.0;
    double k = 0.0;
    bool psi2_zero = false;
};

inline std::pair<double, double> psi_eval(const PsiPair& p, double x) {
    if (!(x > 0.0)) throw std::invalid_argument("psi_eval: x must be positive");
    const double psi1 = std::pow(x, p.rho);
    double psi2 = 0.0;
    if (!p.psi2_zero)
        psi2 = (p.rho != 0.0) ? (p.k / p.rho) * (psi1 - 1.0) : p.k * std::log(x);
    return {psi1, psi2};
}

// ---------------------------------------------------------------------------
// Survival-function specs
//
// Concrete representations of a marginal tail: closed-form families or a
// monotone tabulated grid (linear interpolation between knots).
// ---------------------------------------------------------------------------

class Survival {
  public:
    // S(x) = (x / x_min)^(-alpha) for x >= x_min.
    static Survival pareto(double alpha, double x_min = 1.0) {
        if (!(alpha > 0.0) || !(x_min > 0.0))
            throw std::invalid_argument("Survival::pareto: alpha and x_min must be positive");
        Survival s;
        s.kind_ = Kind::pareto;
        s.p1_ = alpha;
        s.p2_ = x_min;
        return s;
    }

    // S(x) = ((end - x) / (end - lo))^p on [lo, end]; covers uniform and
    // Beta(1, p)-type tails with a finite upper endpoint.
    static Survival bounded_power(double endpoint, double exponent, double lower = 0.0) {
        if (!(exponent > 0.0) || !(lower < endpoint))
            throw std::invalid_argument("Survival::bounded_power: need lower < endpoint, exponent > 0");
        Survival s;
        s.kind_ = Kind::bounded_power;
        s.p1_ = endpoint;
        s.p2_ = exponent;
        s.p3_ = lower;
        return s;
    }

    // Tabulated monotone grid: xs strictly increasing, values strictly
    // decreasing where positive.
    static Survival tabulated(std::vector<double> xs, std::vector<double> values) {
        if (xs.size() != values.size() || xs.size() < 2)
            throw std::invalid_argument("Survival::tabulated: need >= 2 knots");
        for (std::size_t i = 1; i < xs.size(); ++i) {
            if (!(xs[i] > xs[i - 1]))
                throw std::invalid_argument("Survival::tabulated: x grid must be increasing");
            if (!(values[i] < values[i - 1]) && values[i - 1] > 0.0)
                throw std::invalid_argument("Survival::tabulated: non-monotone survival");
        }
        Survival s;
        s.kind_ = Kind::tabulated;
        s.xs_ = std::move(xs);
        s.vals_ = std::move(values);
        return s;
    }

    double operator()(double x) const {
        switch (kind_) {
            case Kind::pareto:
                return x <= p2_ ? 1.0 : std::pow(x / p2_, -p1_);
            case Kind::bounded_power: {
                if (x <= p3_) return 1.0;
                if (x >= p1_) return 0.0;
                return std::pow((p1_ - x) / (p1_ - p3_), p2_);
            }
            case Kind::tabulated: {
                if (x <= xs_.front()) return vals_.front();
                if (x >= xs_.back()) return vals_.back();
                std::size_t i = 1;
                while (xs_[i] < x) ++i;
                const double w = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
                return vals_[i - 1] + w * (vals_[i] - vals_[i - 1]);
            }
        }
        return 0.0;
    }

    // Quantile at level 1 - 1/t, as the generalized inverse of 1/S at t.
    double upper_quantile(double t) const {
        if (!(t >= 1.0)) throw std::invalid_argument("Survival::upper_quantile: t must be >= 1");
        switch (kind_) {
            case Kind::pareto:
                return p2_ * std::pow(t, 1.0 / p1_);
            case Kind::bounded_power:
                return p1_ - (p1_ - p3_) * std::pow(t, -1.0 / p2_);
            case Kind::tabulated: {
                const double target = 1.0 / t;
                if (vals_.back() > target)
                    throw std::invalid_argument("Survival::upper_quantile: level beyond grid");
                std::size_t i = 1;
                while (vals_[i] > target) ++i;
                if (vals_[i] == vals_[i - 1]) return xs_[i - 1];
                const double w = (vals_[i - 1] - target) / (vals_[i - 1] - vals_[i]);
                return xs_[i - 1] + w * (xs_[i] - xs_[i - 1]);
            }
        }
        return 0.0;
    }

    std::optional<double> upper_endpoint() const {
        switch (kind_) {
            case Kind::pareto:
                return std::nullopt;
            case Kind::bounded_power:
                return p1_;
            case Kind::tabulated:
                return vals_.back() == 0.0 ? std::optional<double>(xs_.back()) : std::nullopt;
        }
        return std::nullopt;
    }

  private:
    enum class Kind { pareto, bounded_power, tabulated };
    Kind kind_ = Kind::pareto;
    double p1_ = 1.0, p2_ = 1.0, p3_ = 0.0;
    std::vector<double> xs_, vals_;
};

// ---------------------------------------------------------------------------
// Scaling functions
//
// Evaluable scaling/centering functions of t >= 1 carrying their regular
// variation index and, for decaying centerings, the finite limit.
// ---------------------------------------------------------------------------

class ScalingFunction {
  public:
    enum class Form { power_law, tabulated, quantile_derived, derived };

    ScalingFunction() = default;

    // c * t^kappa
    static ScalingFunction power_law(double coef, double kappa) {
        return ScalingFunction(Form::power_law,
                               [coef, kappa](double t) { return coef * std::pow(t, kappa); }, kappa,
                               kappa < 0 ? std::optional<double>(0.0) : std::nullopt);
    }

    // limit - c * t^kappa with kappa < 0; a centering that climbs to `limit`.
    static ScalingFunction power_law_to_limit(double limit, double coef, double kappa) {
        if (!(kappa < 0.0))
            throw std::invalid_argument("ScalingFunction::power_law_to_limit: kappa must be negative");
        return ScalingFunction(Form::power_law,
                               [limit, coef, kappa](double t) { return limit - coef * std::pow(t, kappa); },
                               kappa, limit);
    }

    static ScalingFunction tabulated(std::vector<double> ts, std::vector<double> values, double kappa,
                                     std::optional<double> limit = std::nullopt) {
        if (ts.size() != values.size() || ts.size() < 2)
            throw std::invalid_argument("ScalingFunction::tabulated: need >= 2 knots");
        auto txs = std::make_shared<const std::vector<double>>(std::move(ts));
        auto tvs = std::make_shared<const std::vector<double>>(std::move(values));
        return ScalingFunction(Form::tabulated,
                               [txs, tvs](double t) {
                                   const auto& xs = *txs;
                                   const auto& vs = *tvs;
                                   if (t <= xs.front()) return vs.front();
                                   if (t >= xs.back()) return vs.back();
                                   std::size_t i = 1;
                                   while (xs[i] < t) ++i;
                                   const double w = (t - xs[i - 1]) / (xs[i] - xs[i - 1]);
                                   return vs[i - 1] + w * (vs[i] - vs[i - 1]);
                               },
                               kappa, limit);
    }

    static ScalingFunction from_function(std::function<double(double)> f, double kappa,
                                         std::optional<double> limit = std::nullopt,
                                         Form form = Form::derived) {
        return ScalingFunction(form, std::move(f), kappa, limit);
    }

    double operator()(double t) const {
        if (!eval_) throw std::logic_error("ScalingFunction: empty");
        return eval_(t);
    }

    double rv_index() const { return kappa_; }
    const std::optional<double>& limit_at_infinity() const { return limit_; }
    Form form() const { return form_; }
    bool valid() const { return static_cast<bool>(eval_); }

    friend ScalingFunction reciprocal(const ScalingFunction& f) {
        auto g = f.eval_;
        return ScalingFunction(Form::derived, [g](double t) { return 1.0 / g(t); }, -f.kappa_,
                               f.kappa_ > 0 ? std::optional<double>(0.0) : std::nullopt);
    }

    friend ScalingFunction scale_by(double c, const ScalingFunction& f) {
        auto g = f.eval_;
        std::optional<double> lim = f.limit_;
        if (lim) lim = c * *lim;
        return ScalingFunction(Form::derived, [c, g](double t) { return c * g(t); }, f.kappa_, lim);
    }

    friend ScalingFunction product(const ScalingFunction& f, const ScalingFunction& g) {
        auto fa = f.eval_;
        auto fb = g.eval_;
        return ScalingFunction(Form::derived, [fa, fb](double t) { return fa(t) * fb(t); },
                               f.kappa_ + g.kappa_, std::nullopt);
    }

  private:
    ScalingFunction(Form form, std::function<double(double)> f, double kappa, std::optional<double> limit)
        : form_(form), eval_(std::move(f)), kappa_(kappa), limit_(limit) {}

    Form form_ = Form::derived;
    std::function<double(double)> eval_;
    double kappa_ = 0.0;
    std::optional<double> limit_;
};

struct DoaScalings {
    ScalingFunction a;  // scale, positive
    ScalingFunction b;  // centering (upper quantile)
};

// Scaling and centering for a survival function in the domain of attraction
// of G_gamma, gamma != 0:
//   b(t) = quantile at level 1 - 1/t,
//   a(t) = gamma * b(t)              for gamma > 0,
//   a(t) = |gamma| * (b_inf - b(t))  for gamma < 0 (finite endpoint required).
// The pair satisfies t * S(a(t) y + b(t)) -> (1 + gamma y)^(-1/gamma).
inline DoaScalings doa_scalings(const Survival& survival, GevShape shape) {
    const double g = shape.gamma;
    if (g == 0.0) throw std::invalid_argument("doa_scalings: gamma must be nonzero");
    auto quantile = [survival](double t) { return survival.upper_quantile(t); };
    if (g > 0.0) {
        ScalingFunction b = ScalingFunction::from_function(quantile, g, std::nullopt,
                                                           ScalingFunction::Form::quantile_derived);
        ScalingFunction a = scale_by(g, b);
        return {a, b};
    }
    const auto endpoint = survival.upper_endpoint();
    if (!endpoint || !std::isfinite(*endpoint))
        throw std::invalid_argument("doa_scalings: gamma < 0 requires a finite upper endpoint");
    const double b_inf = *endpoint;
    ScalingFunction b = ScalingFunction::from_function(quantile, 0.0, b_inf,
                                                       ScalingFunction::Form::quantile_derived);
    const double mg = -g;
    ScalingFunction a = ScalingFunction::from_function(
        [quantile, b_inf, mg](double t) { return mg * (b_inf - quantile(t)); }, g, 0.0);
    return {a, b};
}

}  // namespace cevm
