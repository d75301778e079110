#pragma once

// Reductions to zero-centered form: endpoint-reciprocal (tilde) coordinate
// maps, reduced scalings alpha~ and a~, per-case model reduction, and the
// product pivot identities.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cevm/classifier.hpp"
#include "cevm/evt_core.hpp"

namespace cevm {

// 1 / (endpoint - x): strictly increasing in x, blows up at the endpoint.
inline double tilde(double x, double endpoint) {
    if (!(x < endpoint)) throw std::invalid_argument("tilde: beyond endpoint");
    return 1.0 / (endpoint - x);
}

struct TildeScalings {
    ScalingFunction alpha_tilde;
    ScalingFunction a_tilde;
};

// Reduced scalings for the negative-index regime:
//   alpha~(t) = 1 / (|rho| (beta_inf - beta(t)))  when psi2 != 0,
//   alpha~(t) = 1 / alpha(t)                      when psi2 == 0,
//   a~(t)     = 1 / a(t).
// rho is read off alpha's regular variation index (must be negative).
inline TildeScalings tilde_scalings(const ScalingFunction& alpha, const ScalingFunction& beta,
                                    const ScalingFunction& a, bool psi2_zero) {
    const double rho = alpha.rv_index();
    if (!(rho < 0.0)) throw std::invalid_argument("tilde_scalings: alpha must have negative index");
    ScalingFunction alpha_tilde;
    if (psi2_zero) {
        alpha_tilde = reciprocal(alpha);
    } else {
        if (!beta.limit_at_infinity() || !std::isfinite(*beta.limit_at_infinity()))
            throw std::invalid_argument("tilde_scalings: beta must carry a finite limit");
        const double beta_inf = *beta.limit_at_infinity();
        const double abs_rho = -rho;
        alpha_tilde = ScalingFunction::from_function(
            [beta, beta_inf, abs_rho](double t) { return 1.0 / (abs_rho * (beta_inf - beta(t))); },
            abs_rho);
    }
    return {alpha_tilde, reciprocal(a)};
}

// Unchecked pivot evaluation; callers guarantee support membership.
// endpoint_product = beta_inf * b_inf (used by the inv_gap form only).
inline double eval_pivot(PivotKind k, double x, double y, double endpoint_product = 1.0) {
    switch (k) {
        case PivotKind::xy: return x * y;
        case PivotKind::inv_gap: return 1.0 / (endpoint_product - x * y);
        case PivotKind::inv_xy: return 1.0 / (x * y);
        case PivotKind::neg_inv_xy: return -1.0 / (x * y);
        case PivotKind::inv_xy_minus_one: return 1.0 / (x * y - 1.0);
    }
    return 0.0;
}

inline PivotKind pivot_kind(CaseTag tag) {
    switch (tag) {
        case CaseTag::I:
        case CaseTag::III:
        case CaseTag::IV: return PivotKind::xy;
        case CaseTag::IIa: return PivotKind::inv_gap;
        case CaseTag::IIb: return PivotKind::inv_xy;
        case CaseTag::IIc: return PivotKind::neg_inv_xy;
        case CaseTag::IId: return PivotKind::inv_xy_minus_one;
        case CaseTag::Unsupported: break;
    }
    throw std::invalid_argument("pivot_kind: unsupported case");
}

// Checked pivot evaluation for one sample. Support membership is tested
// against the declared endpoints (when supplied), not estimated ones.
inline double pivot_value(const CaseId& c, double x, double y, double beta_inf = kInf,
                          double b_inf = kInf) {
    const PivotKind k = pivot_kind(c.tag);
    if (std::isfinite(beta_inf) && x > beta_inf)
        throw std::invalid_argument("pivot_value: x beyond declared endpoint");
    if (std::isfinite(b_inf) && y > b_inf)
        throw std::invalid_argument("pivot_value: y beyond declared endpoint");
    double denom = 1.0;
    switch (k) {
        case PivotKind::xy: return x * y;
        case PivotKind::inv_gap: denom = beta_inf * b_inf - x * y; break;
        case PivotKind::inv_xy: denom = x * y; break;
        case PivotKind::neg_inv_xy: denom = -(x * y); break;
        case PivotKind::inv_xy_minus_one: denom = x * y - 1.0; break;
    }
    if (denom == 0.0) throw std::invalid_argument("pivot_value: pivot singular");
    return 1.0 / denom;
}

// Cone on which the reduced pair satisfies the zero-centered convergence.
enum class Cone {
    line_cross_positive,      // [-inf, inf] x (0, inf]
    quadrant_cross_positive,  // [0, inf] x (0, inf]
};

using PairSampler =
    std::function<std::vector<std::pair<double, double>>(std::uint64_t, std::uint64_t)>;

// A model reduced to zero-centered coordinates. The reduction is a stateless
// view over the model's deterministic stream: `original` replays the exact
// untransformed samples for any (seed, count) and `forward` is the
// elementwise coordinate map, so reduced output is reproducible from the
// original stream alone.
struct ReducedPair {
    CaseId case_id;
    PairSampler sampler;
    PairSampler original;
    std::function<std::pair<double, double>(double, double)> forward;
    ScalingFunction alpha_tilde;
    ScalingFunction a_tilde;
    Cone cone = Cone::line_cross_positive;
};

// Model is any type exposing sample(seed, count) -> vector<pair>, params(),
// case_id(), and reduced scalings reduced_x_scaling()/reduced_y_scaling().
template <class Model>
ReducedPair reduce_model(const Model& model) {
    const CaseId c = model.case_id();
    if (!c.supported()) throw std::invalid_argument("reduce_model: unsupported classification");
    const ModelParams p = model.params();

    std::function<std::pair<double, double>(double, double)> fwd;
    Cone cone = Cone::line_cross_positive;
    switch (c.tag) {
        case CaseTag::I:
            fwd = [](double x, double y) { return std::pair<double, double>(x, y); };
            cone = Cone::line_cross_positive;
            break;
        case CaseTag::IIa:
        case CaseTag::IIb:
        case CaseTag::IIc:
        case CaseTag::IId: {
            const double be = *p.beta_inf;
            const double ye = *p.b_inf;
            fwd = [be, ye](double x, double y) {
                return std::pair<double, double>(tilde(x, be), tilde(y, ye));
            };
            cone = Cone::quadrant_cross_positive;
            break;
        }
        case CaseTag::III: {
            const double ye = *p.b_inf;
            fwd = [ye](double x, double y) { return std::pair<double, double>(x, tilde(y, ye)); };
            cone = Cone::line_cross_positive;
            break;
        }
        case CaseTag::IV: {
            const double be = *p.beta_inf;
            fwd = [be](double x, double y) { return std::pair<double, double>(be - x, y); };
            cone = Cone::quadrant_cross_positive;
            break;
        }
        case CaseTag::Unsupported:
            break;
    }

    ReducedPair out;
    out.case_id = c;
    out.forward = fwd;
    out.original = [model](std::uint64_t seed, std::uint64_t count) {
        return model.sample(seed, count);
    };
    out.sampler = [model, fwd](std::uint64_t seed, std::uint64_t count) {
        auto raw = model.sample(seed, count);
        for (auto& xy : raw) {
            auto mapped = fwd(xy.first, xy.second);
            xy = mapped;
        }
        return raw;
    };
    out.alpha_tilde = model.reduced_x_scaling();
    out.a_tilde = model.reduced_y_scaling();
    out.cone = cone;
    return out;
}

}  // namespace cevm
