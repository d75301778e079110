#pragma once

// Config-driven experiment runner: builds a zoo model, classifies it,
// simulates, estimates indices and scaled tails, compares against the
// predicted limits at configured tolerances, and emits CSV plus a
// human-readable markdown report. Runs are deterministic given
// (config, seed) and independent of the worker count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cevm/classifier.hpp"
#include "cevm/estimators.hpp"
#include "cevm/limit_laws.hpp"
#include "cevm/model_zoo.hpp"
#include "cevm/transforms.hpp"

namespace cevm::harness {

using nlohmann::json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitToleranceFailure = 1;
inline constexpr int kExitConfigError = 2;

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

inline json to_json(const DistSpec& d) {
    if (d.kind == DistSpec::Kind::point) return json{{"kind", "point"}, {"value", d.lo}};
    return json{{"kind", "uniform"}, {"lo", d.lo}, {"hi", d.hi}};
}

inline DistSpec dist_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "point") return DistSpec::point(j.at("value").get<double>());
    if (kind == "uniform")
        return DistSpec::uniform(j.at("lo").get<double>(), j.at("hi").get<double>());
    throw ConfigError("unknown distribution kind: " + kind);
}

inline json to_json(const ModelParams& p) {
    json j{{"rho", p.rho},
           {"gamma", p.gamma},
           {"psi2_zero", p.psi2_zero},
           {"alpha_over_a_bounded", p.alpha_over_a_bounded},
           {"alpha_sim_recip_a", p.alpha_sim_recip_a}};
    if (p.beta_inf) j["beta_inf"] = *p.beta_inf;
    if (p.b_inf) j["b_inf"] = *p.b_inf;
    return j;
}

inline ModelParams params_from_json(const json& j) {
    ModelParams p;
    p.rho = j.at("rho").get<double>();
    p.gamma = j.at("gamma").get<double>();
    if (j.contains("beta_inf") && !j["beta_inf"].is_null())
        p.beta_inf = j["beta_inf"].get<double>();
    if (j.contains("b_inf") && !j["b_inf"].is_null()) p.b_inf = j["b_inf"].get<double>();
    p.psi2_zero = j.value("psi2_zero", false);
    p.alpha_over_a_bounded = j.value("alpha_over_a_bounded", false);
    p.alpha_sim_recip_a = j.value("alpha_sim_recip_a", false);
    return p;
}

inline json to_json(const SpectralMeasure& s) {
    json arr = json::array();
    for (const auto& a : s.atoms) arr.push_back(json{{"omega", a.omega}, {"weight", a.weight}});
    return arr;
}

inline SpectralMeasure spectral_from_json(const json& j) {
    SpectralMeasure s;
    for (const auto& a : j) s.atoms.push_back({a.at("omega").get<double>(), a.at("weight").get<double>()});
    s.validate();
    return s;
}

inline CaseTag case_tag_from_string(const std::string& s) {
    if (s == "I") return CaseTag::I;
    if (s == "IIa") return CaseTag::IIa;
    if (s == "IIb") return CaseTag::IIb;
    if (s == "IIc") return CaseTag::IIc;
    if (s == "IId") return CaseTag::IId;
    if (s == "III") return CaseTag::III;
    if (s == "IV") return CaseTag::IV;
    throw ConfigError("unknown case tag: " + s);
}

inline CevmModel model_from_json(const json& j) {
    const std::string family = j.at("family").get<std::string>();
    if (family == "beta_min")
        return beta_min_model(j.at("a").get<double>(), j.at("b").get<double>());
    if (family == "mrv_power")
        return mrv_power_model(j.at("rho").get<double>(), j.at("gamma").get<double>(),
                               dist_from_json(j.at("w")));
    if (family == "coupled_negative")
        return coupled_negative_model(j.at("rho").get<double>(), j.at("gamma").get<double>(),
                                      case_tag_from_string(j.at("variant").get<std::string>()),
                                      dist_from_json(j.at("u")));
    if (family == "case3")
        return case3_model(j.at("gamma").get<double>(), dist_from_json(j.at("v")),
                           j.at("b_inf").get<double>());
    if (family == "case4")
        return case4_model(j.at("rho").get<double>(), j.at("gamma").get<double>(),
                           j.at("beta_inf").get<double>());
    throw ConfigError("unknown model family: " + family);
}

inline json to_json(const CevmModel& m) {
    const FamilySpec& s = m.spec();
    json j{{"name", m.name()}, {"family", to_string(s.family)}, {"params", to_json(m.params())}};
    switch (s.family) {
        case Family::beta_min:
            j["a"] = s.a;
            j["b"] = s.b;
            break;
        case Family::mrv_power:
            j["rho"] = s.rho;
            j["gamma"] = s.gamma;
            j["w"] = to_json(s.weight);
            break;
        case Family::coupled_negative:
            j["rho"] = s.rho;
            j["gamma"] = s.gamma;
            j["variant"] = to_string(s.variant);
            j["u"] = to_json(s.weight);
            break;
        case Family::case3:
            j["gamma"] = s.gamma;
            j["v"] = to_json(s.weight);
            j["b_inf"] = s.b_inf;
            break;
        case Family::case4:
            j["rho"] = s.rho;
            j["gamma"] = s.gamma;
            j["beta_inf"] = s.beta_inf;
            break;
    }
    return j;
}

// ---------------------------------------------------------------------------
// Experiment configuration
// ---------------------------------------------------------------------------

struct KPolicy {
    enum class Rule { sqrt_n, fixed };
    Rule rule = Rule::sqrt_n;
    std::size_t k = 0;  // for fixed

    std::size_t resolve(std::size_t n) const {
        if (rule == Rule::fixed) return k;
        return static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    }
};

struct Tolerances {
    double index_abs = 0.1;     // |estimated tail exponent - predicted| bound
    double constant_rel = 0.1;  // relative bound on scaled-tail constants
};

struct DiagnosticsConfig {
    std::uint64_t n = 0;  // 0: use the experiment n
    double probe_lambda = 1.5;
    double wrong_lambda = 1.0;
    double t_low = 100.0;
    double t_high = 10000.0;
    double x = 1.0;
    double y = 1.0;
    double y_level = 1.0;
    std::vector<double> x_grid{0.5, 1.0, 2.0, 4.0, 8.0, 16.0};
    double decay_min_ratio = 5.0;
    double wrong_spread_max = 0.1;
    double correct_spread_min = 0.5;
};

struct ExperimentConfig {
    std::string name;
    json model;
    std::uint64_t n = 0;
    std::uint64_t seed = 1;
    std::vector<double> t_grid;
    std::vector<double> z_grid;
    KPolicy k_policy;
    Tolerances tolerances;
    std::optional<DiagnosticsConfig> diagnostics;

    void validate() const {
        if (n == 0) throw ConfigError("config: n must be positive");
        if (t_grid.empty()) throw ConfigError("config: t_grid must be nonempty");
        if (z_grid.empty()) throw ConfigError("config: z_grid (or y_grid) must be nonempty");
        for (double t : t_grid)
            if (!(t > 0.0)) throw ConfigError("config: t_grid entries must be positive");
        for (double z : z_grid)
            if (!(z > 0.0)) throw ConfigError("config: z_grid entries must be positive");
        const double t_max = *std::max_element(t_grid.begin(), t_grid.end());
        if (static_cast<double>(n) < 10.0 * t_max)
            throw ConfigError("config: n must be at least 10 * max(t_grid)");
        if (k_policy.rule == KPolicy::Rule::fixed && (k_policy.k < 1 || k_policy.k + 1 >= n))
            throw ConfigError("config: fixed k out of range");
    }
};

inline ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c;
    c.name = j.value("name", "");
    c.model = j.at("model");
    c.n = j.at("n").get<std::uint64_t>();
    c.seed = j.value("seed", std::uint64_t{1});
    c.t_grid = j.at("t_grid").get<std::vector<double>>();
    if (j.contains("z_grid"))
        c.z_grid = j["z_grid"].get<std::vector<double>>();
    else if (j.contains("y_grid"))
        c.z_grid = j["y_grid"].get<std::vector<double>>();
    if (j.contains("k_policy")) {
        const auto& kp = j["k_policy"];
        const std::string rule = kp.value("rule", "sqrt");
        if (rule == "sqrt") {
            c.k_policy.rule = KPolicy::Rule::sqrt_n;
        } else if (rule == "fixed") {
            c.k_policy.rule = KPolicy::Rule::fixed;
            c.k_policy.k = kp.at("k").get<std::size_t>();
        } else {
            throw ConfigError("config: unknown k_policy rule: " + rule);
        }
    }
    if (j.contains("tolerances")) {
        c.tolerances.index_abs = j["tolerances"].value("index_abs", 0.1);
        c.tolerances.constant_rel = j["tolerances"].value("constant_rel", 0.1);
    }
    if (j.contains("diagnostics")) {
        const auto& d = j["diagnostics"];
        DiagnosticsConfig dc;
        dc.n = d.value("n", std::uint64_t{0});
        dc.probe_lambda = d.value("probe_lambda", 1.5);
        dc.wrong_lambda = d.value("wrong_lambda", 1.0);
        dc.t_low = d.value("t_low", 100.0);
        dc.t_high = d.value("t_high", 10000.0);
        dc.x = d.value("x", 1.0);
        dc.y = d.value("y", 1.0);
        dc.y_level = d.value("y_level", 1.0);
        if (d.contains("x_grid")) dc.x_grid = d["x_grid"].get<std::vector<double>>();
        dc.decay_min_ratio = d.value("decay_min_ratio", 5.0);
        dc.wrong_spread_max = d.value("wrong_spread_max", 0.1);
        dc.correct_spread_min = d.value("correct_spread_min", 0.5);
        c.diagnostics = dc;
    }
    c.validate();
    return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config " + path.string());
    json j;
    try {
        j = json::parse(is);
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path.string() + ": " + e.what());
    }
    try {
        ExperimentConfig c = config_from_json(j);
        if (c.name.empty()) c.name = path.stem().string();
        return c;
    } catch (const json::exception& e) {
        throw ConfigError("config field error in " + path.string() + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Report rows
// ---------------------------------------------------------------------------

struct ReportRow {
    std::string config;
    std::string model;
    std::string case_tag;
    std::string check;
    std::string quantity;
    double param = std::numeric_limits<double>::quiet_NaN();  // t, k or z
    double estimate = std::numeric_limits<double>::quiet_NaN();
    double se = std::numeric_limits<double>::quiet_NaN();
    double ci_low = std::numeric_limits<double>::quiet_NaN();
    double ci_high = std::numeric_limits<double>::quiet_NaN();
    double predicted = std::numeric_limits<double>::quiet_NaN();
    double band_low = std::numeric_limits<double>::quiet_NaN();
    double band_high = std::numeric_limits<double>::quiet_NaN();
    std::string verdict;  // pass | fail | info | skipped: <reason>

    bool gated() const { return verdict == "pass" || verdict == "fail"; }
};

struct VerificationReport {
    std::string config;
    std::string model;
    std::string case_tag;
    std::vector<ReportRow> rows;
    bool overall = true;

    void push(ReportRow r) {
        if (r.gated() && r.verdict == "fail") overall = false;
        rows.push_back(std::move(r));
    }
};

inline std::string format_cell(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline const char* kCsvHeader =
    "config,model,case,check,quantity,param,estimate,se,ci_low,ci_high,predicted,band_low,band_"
    "high,verdict\n";

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

inline void append_csv(std::string& out, const ReportRow& r) {
    out += csv_quote(r.config);
    out += ',';
    out += csv_quote(r.model);
    out += ',';
    out += r.case_tag;
    out += ',';
    out += csv_quote(r.check);
    out += ',';
    out += csv_quote(r.quantity);
    out += ',';
    out += format_cell(r.param);
    out += ',';
    out += format_cell(r.estimate);
    out += ',';
    out += format_cell(r.se);
    out += ',';
    out += format_cell(r.ci_low);
    out += ',';
    out += format_cell(r.ci_high);
    out += ',';
    out += format_cell(r.predicted);
    out += ',';
    out += format_cell(r.band_low);
    out += ',';
    out += format_cell(r.band_high);
    out += ',';
    out += csv_quote(r.verdict);
    out += '\n';
}

inline std::string to_csv(const std::vector<ReportRow>& rows) {
    std::string out = kCsvHeader;
    for (const auto& r : rows) append_csv(out, r);
    return out;
}

inline std::string to_markdown(const VerificationReport& rep) {
    std::string md;
    md += "## " + rep.config + "\n\n";
    md += "- model: " + rep.model + "\n";
    md += "- case: " + rep.case_tag + "\n";
    md += "- verdict: " + std::string(rep.overall ? "PASS" : "FAIL") + "\n\n";
    md += "| check | quantity | param | estimate | se | predicted | band | verdict |\n";
    md += "|---|---|---|---|---|---|---|---|\n";
    for (const auto& r : rep.rows) {
        std::string band;
        if (!std::isnan(r.band_low) || !std::isnan(r.band_high))
            band = "[" + format_cell(r.band_low) + ", " + format_cell(r.band_high) + "]";
        md += "| " + r.check + " | " + r.quantity + " | " + format_cell(r.param) + " | " +
              format_cell(r.estimate) + " | " + format_cell(r.se) + " | " +
              format_cell(r.predicted) + " | " + band + " | " + r.verdict + " |\n";
    }
    md += "\n";
    return md;
}

// ---------------------------------------------------------------------------
// Experiment runner
// ---------------------------------------------------------------------------

namespace detail {

// Pivot sample stream for the whole experiment, generated chunk-parallel
// into index order.
inline std::vector<double> pivot_samples(const CevmModel& model, const ProductLaw& law,
                                         std::uint64_t seed, std::uint64_t n, unsigned workers) {
    std::vector<double> pivots(n);
    const double ep = model.endpoint_product();
    const PivotKind kind = law.pivot;
    model.visit_chunks(seed, n, workers,
                       [&](std::uint64_t chunk, const std::pair<double, double>* p,
                           std::uint64_t len) {
                           double* out = pivots.data() + chunk * rng::kChunkSize;
                           for (std::uint64_t i = 0; i < len; ++i)
                               out[i] = eval_pivot(kind, p[i].first, p[i].second, ep);
                       });
    return pivots;
}

inline std::uint64_t count_above(const std::vector<double>& v, double threshold) {
    std::uint64_t c = 0;
    for (double x : v)
        if (x > threshold) ++c;
    return c;
}

}  // namespace detail

inline void run_diagnostics(const CevmModel& model, const ExperimentConfig& cfg, unsigned workers,
                            VerificationReport& rep) {
    const DiagnosticsConfig& d = *cfg.diagnostics;
    ReportRow base;
    base.config = rep.config;
    base.model = rep.model;
    base.case_tag = rep.case_tag;
    if (model.case_id().tag != CaseTag::I) {
        ReportRow r = base;
        r.check = "diagnostics";
        r.quantity = "asymptotic independence / degeneracy";
        r.verdict = "skipped: diagnostics require a positive-index model";
        rep.push(std::move(r));
        return;
    }
    const std::uint64_t n_diag = d.n == 0 ? cfg.n : d.n;
    const ScalingFunction probe = ScalingFunction::power_law(1.0, d.probe_lambda);
    const ScalingFunction& a = model.y_scaling();

    // joint exceedance counts at both t values in one streamed pass
    const double tx_low = probe(d.t_low) * d.x, ty_low = a(d.t_low) * d.y;
    const double tx_high = probe(d.t_high) * d.x, ty_high = a(d.t_high) * d.y;
    const std::uint64_t n_chunks = rng::chunk_count(n_diag);
    std::vector<std::uint64_t> c_low(n_chunks, 0), c_high(n_chunks, 0);
    model.visit_chunks(cfg.seed + 1, n_diag, workers,
                       [&](std::uint64_t chunk, const std::pair<double, double>* p,
                           std::uint64_t len) {
                           std::uint64_t lo = 0, hi = 0;
                           for (std::uint64_t i = 0; i < len; ++i) {
                               const auto [x, y] = p[i];
                               if (x > tx_low && y > ty_low) ++lo;
                               if (x > tx_high && y > ty_high) ++hi;
                           }
                           c_low[chunk] = lo;
                           c_high[chunk] = hi;
                       });
    std::uint64_t n_low = 0, n_high = 0;
    for (std::uint64_t c = 0; c < n_chunks; ++c) {
        n_low += c_low[c];
        n_high += c_high[c];
    }
    const auto est_low = scaled_tail_from_counts(d.t_low, n_low, n_diag);
    const auto est_high = scaled_tail_from_counts(d.t_high, n_high, n_diag);
    {
        ReportRow r = base;
        r.check = "asy-indep-decay";
        r.quantity = "t*P[X>A(t)x, Y>a(t)y] ratio t_low/t_high";
        r.param = d.t_high;
        r.estimate = est_high.value > 0.0 ? est_low.value / est_high.value : kInf;
        r.predicted = d.decay_min_ratio;
        r.band_low = d.decay_min_ratio;
        r.verdict = r.estimate >= d.decay_min_ratio ? "pass" : "fail";
        rep.push(std::move(r));
    }

    // conditional spread under the wrong and the correct x-scaling
    const std::uint64_t n_deg = std::min<std::uint64_t>(n_diag, 10'000'000);
    const double y_thresh = a(d.t_high) * d.y_level;
    std::vector<std::vector<std::pair<double, double>>> found(rng::chunk_count(n_deg));
    model.visit_chunks(cfg.seed + 2, n_deg, workers,
                       [&](std::uint64_t chunk, const std::pair<double, double>* p,
                           std::uint64_t len) {
                           for (std::uint64_t i = 0; i < len; ++i)
                               if (p[i].second > y_thresh) found[chunk].push_back(p[i]);
                       });
    std::vector<std::pair<double, double>> exceed;
    for (auto& f : found) exceed.insert(exceed.end(), f.begin(), f.end());

    const ScalingFunction wrong = ScalingFunction::power_law(1.0, d.wrong_lambda);
    const double wrong_spread =
        degeneracy_diag(exceed, d.t_high, wrong, {}, a, d.y_level, d.x_grid);
    const double correct_spread =
        degeneracy_diag(exceed, d.t_high, model.x_scaling(), {}, a, d.y_level, d.x_grid);
    {
        ReportRow r = base;
        r.check = "degeneracy-wrong-scaling";
        r.quantity = "conditional spread under lower-order scaling";
        r.param = d.t_high;
        r.estimate = wrong_spread;
        r.band_high = d.wrong_spread_max;
        r.verdict = wrong_spread < d.wrong_spread_max ? "pass" : "fail";
        rep.push(std::move(r));
    }
    {
        ReportRow r = base;
        r.check = "degeneracy-correct-scaling";
        r.quantity = "conditional spread under model scaling";
        r.param = d.t_high;
        r.estimate = correct_spread;
        r.band_low = d.correct_spread_min;
        r.verdict = correct_spread > d.correct_spread_min ? "pass" : "fail";
        rep.push(std::move(r));
    }
}

inline VerificationReport run(const ExperimentConfig& cfg, unsigned workers = 1) {
    cfg.validate();
    CevmModel model = model_from_json(cfg.model);
    const CaseId c = model.case_id();
    if (!c.supported())
        throw ConfigError("model classifies as Unsupported (" + to_string(c.reason) + ")");
    const ProductLaw law = model.law();
    const double alpha_pred = -law.rv_index.value;  // positive tail exponent

    VerificationReport rep;
    rep.config = cfg.name;
    rep.model = model.name();
    rep.case_tag = to_string(c.tag);

    ReportRow base;
    base.config = rep.config;
    base.model = rep.model;
    base.case_tag = rep.case_tag;

    {
        ReportRow r = base;
        r.check = "classification";
        r.quantity = "pivot " + to_string(law.pivot) + ", scaling " + to_string(law.scaling);
        r.predicted = law.rv_index.value;
        r.verdict = "info";
        rep.push(std::move(r));
    }

    const std::vector<double> pivots = detail::pivot_samples(model, law, cfg.seed, cfg.n, workers);

    // tail index via Hill at the configured k
    const std::size_t k = cfg.k_policy.resolve(cfg.n);
    {
        const TailEstimate h = hill(pivots, k);
        ReportRow r = base;
        r.check = "index-hill";
        r.quantity = "tail exponent of " + to_string(law.pivot);
        r.param = static_cast<double>(k);
        r.estimate = h.tail_exponent();
        r.ci_low = 1.0 / h.ci_high;
        r.ci_high = 1.0 / h.ci_low;
        r.predicted = alpha_pred;
        r.band_low = alpha_pred - cfg.tolerances.index_abs;
        r.band_high = alpha_pred + cfg.tolerances.index_abs;
        r.verdict = std::fabs(r.estimate - alpha_pred) <= cfg.tolerances.index_abs ? "pass" : "fail";
        rep.push(std::move(r));
    }
    if (cfg.k_policy.rule == KPolicy::Rule::sqrt_n) {
        for (double expo : {0.4, 0.6}) {
            const auto ks = static_cast<std::size_t>(
                std::llround(std::pow(static_cast<double>(cfg.n), expo)));
            const TailEstimate h = hill(pivots, std::clamp<std::size_t>(ks, 2, cfg.n - 2));
            ReportRow r = base;
            r.check = "index-hill-sweep";
            r.quantity = "tail exponent of " + to_string(law.pivot);
            r.param = static_cast<double>(h.k);
            r.estimate = h.tail_exponent();
            r.ci_low = 1.0 / h.ci_high;
            r.ci_high = 1.0 / h.ci_low;
            r.predicted = alpha_pred;
            r.verdict = "info";
            rep.push(std::move(r));
        }
    }
    {
        ReportRow r = base;
        r.check = "index-regression";
        r.quantity = "tail exponent of " + to_string(law.pivot) + " (log-log slope)";
        try {
            r.estimate = index_regression(pivots).value;
            r.predicted = alpha_pred;
            r.verdict = "info";
        } catch (const std::invalid_argument& e) {
            r.verdict = std::string("skipped: ") + e.what();
        }
        rep.push(std::move(r));
    }

    // scaled-tail constants on the (t, z) grid
    const auto& an = model.analytic();
    for (double t : cfg.t_grid) {
        const double scale = model.pivot_scale(t);
        for (double z : cfg.z_grid) {
            const std::uint64_t count = detail::count_above(pivots, scale * z);
            const auto est = scaled_tail_from_counts(t, count, cfg.n);
            ReportRow r = base;
            r.check = "scaled-tail";
            r.quantity = "t*P[pivot > scale(t)*z], z=" + format_cell(z);
            r.param = t;
            r.estimate = est.value;
            r.se = est.se;
            if (an.pivot_scaled_limit) {
                r.predicted = an.pivot_scaled_limit(z);
                r.band_low = r.predicted * (1.0 - cfg.tolerances.constant_rel);
                r.band_high = r.predicted * (1.0 + cfg.tolerances.constant_rel);
                r.verdict = std::fabs(r.estimate - r.predicted) <=
                                    cfg.tolerances.constant_rel * r.predicted
                                ? "pass"
                                : "fail";
            } else {
                r.verdict = "info";
            }
            rep.push(std::move(r));

            if (an.pivot_survival) {
                const double u = scale * z;
                if (u >= an.pivot_survival_from) {
                    ReportRow ex = base;
                    ex.check = "exact-law";
                    ex.quantity = "t*P[pivot > u] vs exact, u=" + format_cell(u);
                    ex.param = t;
                    ex.estimate = est.value;
                    ex.se = est.se;
                    ex.predicted = t * an.pivot_survival(u);
                    ex.band_low = ex.predicted - 3.0 * est.se;
                    ex.band_high = ex.predicted + 3.0 * est.se;
                    ex.verdict =
                        std::fabs(ex.estimate - ex.predicted) <= 3.0 * est.se ? "pass" : "fail";
                    rep.push(std::move(ex));
                }
            }
        }
    }

    // hypothesis inventory plus moment diagnostics (reported, never gated)
    for (const auto& h : law.hypotheses) {
        ReportRow r = base;
        r.check = "hypothesis";
        r.quantity = h.name + " [" + to_string(h.status) + "]";
        r.verdict = "info";
        rep.push(std::move(r));
        if (h.moment_exponent) {
            const MomentDiagnosis d = moment_diagnostic(model, *h.moment_exponent, cfg.seed + 3);
            ReportRow m = base;
            m.check = "moment-diagnostic";
            m.quantity = "E[coord^" + format_cell(*h.moment_exponent) + "]: " +
                         to_string(d.verdict);
            if (d.value) m.estimate = *d.value;
            if (d.slope) {
                m.estimate = *d.slope;
                m.ci_low = *d.ci_low;
                m.ci_high = *d.ci_high;
            }
            m.verdict = "info";
            rep.push(std::move(m));
        }
    }

    if (cfg.diagnostics) run_diagnostics(model, cfg, workers, rep);
    return rep;
}

// ---------------------------------------------------------------------------
// Suite runner and file emission
// ---------------------------------------------------------------------------

struct SuiteReport {
    std::vector<VerificationReport> reports;
    bool overall = true;

    std::vector<ReportRow> all_rows() const {
        std::vector<ReportRow> rows;
        for (const auto& r : reports) rows.insert(rows.end(), r.rows.begin(), r.rows.end());
        return rows;
    }
};

inline SuiteReport verify_suite(const std::filesystem::path& dir, unsigned workers = 1) {
    if (!std::filesystem::is_directory(dir))
        throw ConfigError("verify_suite: not a directory: " + dir.string());
    std::vector<std::filesystem::path> configs;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".json") configs.push_back(e.path());
    if (configs.empty()) throw ConfigError("verify_suite: no configs in " + dir.string());
    std::sort(configs.begin(), configs.end());
    SuiteReport suite;
    for (const auto& path : configs) {
        VerificationReport rep = run(load_config(path), workers);
        suite.overall = suite.overall && rep.overall;
        suite.reports.push_back(std::move(rep));
    }
    return suite;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << content;
}

inline void write_report_files(const VerificationReport& rep, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_file(out_dir / "results.csv", to_csv(rep.rows));
    std::string md = "# Verification report\n\n";
    md += to_markdown(rep);
    md += rep.overall ? "OVERALL: PASS\n" : "OVERALL: FAIL\n";
    write_file(out_dir / "report.md", md);
}

inline void write_suite_files(const SuiteReport& suite, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_file(out_dir / "results.csv", to_csv(suite.all_rows()));
    std::string md = "# Verification report (suite)\n\n";
    for (const auto& rep : suite.reports) md += to_markdown(rep);
    md += suite.overall ? "OVERALL: PASS\n" : "OVERALL: FAIL\n";
    write_file(out_dir / "report.md", md);
}

}  // namespace cevm::harness
