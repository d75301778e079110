#pragma once

// Case taxonomy for products under the conditional extreme value model.
//
// classify() maps declared model parameters (indices rho and gamma, upper
// endpoints, scaling-ratio flags) to one of the supported cases; for each
// case product_prediction() gives the transformed product quantity whose
// tail is regularly varying, its index, the scaling combination, and the
// hypotheses the corresponding limit theorem needs.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cevm/evt_core.hpp"

namespace cevm {

// Declared facts about a CEVM instance. Endpoints are model declarations,
// not estimates; beta_inf is required whenever rho < 0 and b_inf whenever
// gamma < 0.
struct ModelParams {
    double rho = 0.0;
    double gamma = 0.0;
    std::optional<double> beta_inf;  // upper endpoint of X when rho < 0
    std::optional<double> b_inf;     // upper endpoint of Y when gamma < 0
    bool psi2_zero = false;
    bool alpha_over_a_bounded = false;  // is alpha~(t)/a~(t) bounded
    bool alpha_sim_recip_a = false;     // does alpha(t) ~ 1/a(t) hold
};

enum class CaseTag { I, IIa, IIb, IIc, IId, III, IV, Unsupported };

enum class UnsupportedReason {
    none,
    gamma_zero,
    rho_zero,
    mixed_endpoint_x_positive_y_zero,
    mixed_endpoint_x_negative_y_positive,
    case2a_ratio_unbounded,
    case3_endpoint,
    case3_scaling,
    case4_endpoint,
    endpoint_combination,
};

struct CaseId {
    CaseTag tag = CaseTag::Unsupported;
    UnsupportedReason reason = UnsupportedReason::none;

    bool supported() const { return tag != CaseTag::Unsupported; }
    friend bool operator==(const CaseId&, const CaseId&) = default;
};

inline std::string to_string(CaseTag tag) {
    switch (tag) {
        case CaseTag::I: return "I";
        case CaseTag::IIa: return "IIa";
        case CaseTag::IIb: return "IIb";
        case CaseTag::IIc: return "IIc";
        case CaseTag::IId: return "IId";
        case CaseTag::III: return "III";
        case CaseTag::IV: return "IV";
        case CaseTag::Unsupported: return "Unsupported";
    }
    return "?";
}

inline std::string to_string(UnsupportedReason r) {
    switch (r) {
        case UnsupportedReason::none: return "none";
        case UnsupportedReason::gamma_zero: return "gamma-zero";
        case UnsupportedReason::rho_zero: return "rho-zero";
        case UnsupportedReason::mixed_endpoint_x_positive_y_zero:
            return "mixed-endpoint-x-positive-y-zero";
        case UnsupportedReason::mixed_endpoint_x_negative_y_positive:
            return "mixed-endpoint-x-negative-y-positive";
        case UnsupportedReason::case2a_ratio_unbounded: return "case2a-ratio-unbounded";
        case UnsupportedReason::case3_endpoint: return "case3-endpoint";
        case UnsupportedReason::case3_scaling: return "case3-scaling";
        case UnsupportedReason::case4_endpoint: return "case4-endpoint";
        case UnsupportedReason::endpoint_combination: return "endpoint-combination";
    }
    return "?";
}

// The transformed product quantity whose upper tail the theory controls.
enum class PivotKind {
    xy,                   // X*Y
    inv_gap,              // 1 / (beta_inf*b_inf - X*Y)
    inv_xy,               // 1 / (X*Y)
    neg_inv_xy,           // -1 / (X*Y)
    inv_xy_minus_one,     // 1 / (X*Y - 1)
};

inline std::string to_string(PivotKind p) {
    switch (p) {
        case PivotKind::xy: return "XY";
        case PivotKind::inv_gap: return "inv(beta_inf*b_inf - XY)";
        case PivotKind::inv_xy: return "inv(XY)";
        case PivotKind::neg_inv_xy: return "neg_inv(XY)";
        case PivotKind::inv_xy_minus_one: return "inv(XY - 1)";
    }
    return "?";
}

// Which combination of scalings normalizes the pivot.
enum class ScalingCombo { alpha_times_a, alpha_tilde, alpha_tilde_times_a_tilde, a_tilde, a_only };

inline std::string to_string(ScalingCombo s) {
    switch (s) {
        case ScalingCombo::alpha_times_a: return "alpha(t)*a(t)";
        case ScalingCombo::alpha_tilde: return "alpha~(t)";
        case ScalingCombo::alpha_tilde_times_a_tilde: return "alpha~(t)*a~(t)";
        case ScalingCombo::a_tilde: return "a~(t)";
        case ScalingCombo::a_only: return "a(t)";
    }
    return "?";
}

enum class HypothesisStatus { declared, checkable, unknown };

inline std::string to_string(HypothesisStatus s) {
    switch (s) {
        case HypothesisStatus::declared: return "declared";
        case HypothesisStatus::checkable: return "checkable";
        case HypothesisStatus::unknown: return "unknown";
    }
    return "?";
}

// A theorem hypothesis in machine-checkable form. Moment hypotheses carry
// the exponent whose finiteness matters; they are reported, never used to
// gate a verification run.
struct Hypothesis {
    std::string name;
    HypothesisStatus status = HypothesisStatus::declared;
    std::optional<double> moment_exponent;
};

struct ProductLaw {
    PivotKind pivot = PivotKind::xy;
    RvIndex rv_index;  // tail index of the pivot (negative)
    ScalingCombo scaling = ScalingCombo::alpha_times_a;
    std::vector<Hypothesis> hypotheses;
};

inline void validate(const ModelParams& p) {
    if (std::isnan(p.rho) || std::isnan(p.gamma))
        throw std::invalid_argument("invalid parameters: rho/gamma must be finite");
    if (p.gamma < 0.0 && (!p.b_inf || !std::isfinite(*p.b_inf)))
        throw std::invalid_argument("invalid parameters: gamma < 0 requires finite b_inf");
    if (p.rho < 0.0 && !p.beta_inf)
        throw std::invalid_argument("invalid parameters: rho < 0 requires beta_inf");
    if (p.alpha_sim_recip_a && p.rho > 0.0 && p.gamma < 0.0 && p.rho != -p.gamma)
        throw std::invalid_argument("invalid parameters: alpha ~ 1/a forces rho = -gamma");
}

inline CaseId classify(const ModelParams& p) {
    validate(p);
    if (p.gamma == 0.0) return {CaseTag::Unsupported, UnsupportedReason::gamma_zero};
    if (p.rho == 0.0) return {CaseTag::Unsupported, UnsupportedReason::rho_zero};

    if (p.rho > 0.0 && p.gamma > 0.0) return {CaseTag::I, UnsupportedReason::none};

    if (p.rho < 0.0 && p.gamma < 0.0) {
        const double be = *p.beta_inf;
        const double ye = *p.b_inf;
        if (be > 0.0 && ye > 0.0) {
            if (p.gamma < p.rho || (p.gamma == p.rho && p.alpha_over_a_bounded))
                return {CaseTag::IIa, UnsupportedReason::none};
            return {CaseTag::Unsupported, UnsupportedReason::case2a_ratio_unbounded};
        }
        if (be == 0.0 && ye == 0.0) return {CaseTag::IIb, UnsupportedReason::none};
        if (be == 0.0 && ye > 0.0) return {CaseTag::IIc, UnsupportedReason::none};
        if (be < 0.0 && ye < 0.0) return {CaseTag::IId, UnsupportedReason::none};
        if (be > 0.0 && ye == 0.0)
            return {CaseTag::Unsupported, UnsupportedReason::mixed_endpoint_x_positive_y_zero};
        if (be < 0.0 && ye > 0.0)
            return {CaseTag::Unsupported, UnsupportedReason::mixed_endpoint_x_negative_y_positive};
        return {CaseTag::Unsupported, UnsupportedReason::endpoint_combination};
    }

    if (p.rho > 0.0 && p.gamma < 0.0) {
        if (!(*p.b_inf > 0.0)) return {CaseTag::Unsupported, UnsupportedReason::case3_endpoint};
        if (!p.alpha_sim_recip_a) return {CaseTag::Unsupported, UnsupportedReason::case3_scaling};
        return {CaseTag::III, UnsupportedReason::none};
    }

    // rho < 0 and gamma > 0
    if (!(*p.beta_inf > 0.0)) return {CaseTag::Unsupported, UnsupportedReason::case4_endpoint};
    return {CaseTag::IV, UnsupportedReason::none};
}

inline std::vector<Hypothesis> hypotheses_report(const CaseId& c, const ModelParams& p) {
    std::vector<Hypothesis> out;
    const double abs_rho = std::fabs(p.rho);
    const double abs_gamma = std::fabs(p.gamma);
    switch (c.tag) {
        case CaseTag::I:
            out.push_back({"tail condition: t*P[|X|/alpha(t) > z/eps] vanishes as eps -> 0",
                           HypothesisStatus::checkable, 1.0 / p.rho});
            out.push_back({"Y nonnegative", HypothesisStatus::declared, std::nullopt});
            break;
        case CaseTag::IIa:
            out.push_back({"moment: E[Xtilde^(1/|rho|+delta)] finite", HypothesisStatus::checkable,
                           1.0 / abs_rho});
            if (p.gamma < p.rho)
                out.push_back({"gamma < rho", HypothesisStatus::declared, std::nullopt});
            else
                out.push_back({"alpha~/a~ bounded", HypothesisStatus::declared, std::nullopt});
            out.push_back({"X, Y nonnegative", HypothesisStatus::declared, std::nullopt});
            break;
        case CaseTag::IIb:
            out.push_back({"tail condition: t*P[Xtilde/alpha~(t) > z/eps] vanishes as eps -> 0",
                           HypothesisStatus::checkable, 1.0 / abs_rho});
            break;
        case CaseTag::IIc:
            out.push_back({"moment: E[Xtilde^(1/|rho|+delta)] finite", HypothesisStatus::checkable,
                           1.0 / abs_rho});
            out.push_back({"Y nonnegative", HypothesisStatus::declared, std::nullopt});
            break;
        case CaseTag::IId:
            out.push_back({"moment: E[Xtilde^(1/|rho|+delta)] finite", HypothesisStatus::checkable,
                           1.0 / abs_rho});
            if (p.gamma < p.rho)
                out.push_back({"gamma < rho", HypothesisStatus::declared, std::nullopt});
            else
                out.push_back({"alpha~/a~ bounded", HypothesisStatus::declared, std::nullopt});
            break;
        case CaseTag::III:
            out.push_back({"moment: E[X^(1/|gamma|+delta)] finite", HypothesisStatus::checkable,
                           1.0 / abs_gamma});
            out.push_back({"alpha(t) ~ 1/a(t)", HypothesisStatus::declared, std::nullopt});
            out.push_back({"X nonnegative, b_inf > 0", HypothesisStatus::declared, std::nullopt});
            break;
        case CaseTag::IV:
            out.push_back({"0 <= X <= beta_inf", HypothesisStatus::declared, std::nullopt});
            out.push_back({"beta_inf > 0", HypothesisStatus::declared, std::nullopt});
            out.push_back({"Y nonnegative", HypothesisStatus::declared, std::nullopt});
            break;
        case CaseTag::Unsupported:
            break;
    }
    return out;
}

inline ProductLaw product_prediction(const CaseId& c, const ModelParams& p) {
    if (!c.supported())
        throw std::invalid_argument("product_prediction: unsupported case " + to_string(c.reason));
    ProductLaw law;
    law.hypotheses = hypotheses_report(c, p);
    const double abs_rho = std::fabs(p.rho);
    const double abs_gamma = std::fabs(p.gamma);
    switch (c.tag) {
        case CaseTag::I:
            law.pivot = PivotKind::xy;
            law.rv_index = {-1.0 / (p.gamma + p.rho)};
            law.scaling = ScalingCombo::alpha_times_a;
            break;
        case CaseTag::IIa:
            law.pivot = PivotKind::inv_gap;
            law.rv_index = {-1.0 / abs_rho};
            law.scaling = ScalingCombo::alpha_tilde;
            break;
        case CaseTag::IIb:
            law.pivot = PivotKind::inv_xy;
            law.rv_index = {-1.0 / (abs_gamma + abs_rho)};
            law.scaling = ScalingCombo::alpha_tilde_times_a_tilde;
            break;
        case CaseTag::IIc:
            law.pivot = PivotKind::neg_inv_xy;
            law.rv_index = {-1.0 / abs_rho};
            law.scaling = ScalingCombo::alpha_tilde;
            break;
        case CaseTag::IId:
            law.pivot = PivotKind::inv_xy_minus_one;
            law.rv_index = {-1.0 / abs_rho};
            law.scaling = ScalingCombo::alpha_tilde;
            break;
        case CaseTag::III:
            law.pivot = PivotKind::xy;
            law.rv_index = {-1.0 / abs_gamma};
            law.scaling = ScalingCombo::a_tilde;
            break;
        case CaseTag::IV:
            law.pivot = PivotKind::xy;
            law.rv_index = {-1.0 / p.gamma};
            law.scaling = ScalingCombo::a_only;
            break;
        case CaseTag::Unsupported:
            break;
    }
    return law;
}

}  // namespace cevm
