#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "cevm/harness.hpp"
#include "cevm/sample_io.hpp"

using Catch::Approx;
using namespace cevm;
using namespace cevm::harness;
namespace fs = std::filesystem;

namespace {

const char* kSmallConfig = R"({
  "name": "minimum-coupling-small",
  "model": {"family": "beta_min", "a": 1.0, "b": 1.0},
  "n": 200000,
  "seed": 12345,
  "t_grid": [100.0],
  "z_grid": [1.0],
  "k_policy": {"rule": "sqrt"},
  "tolerances": {"index_abs": 0.3, "constant_rel": 0.2}
})";

ExperimentConfig small_config() {
    ExperimentConfig c = config_from_json(json::parse(kSmallConfig));
    return c;
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("cevm_harness_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is);
    std::string s((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return s;
}

}  // namespace

TEST_CASE("config parsing and validation") {
    const ExperimentConfig c = small_config();
    CHECK(c.n == 200000);
    CHECK(c.seed == 12345);
    CHECK(c.t_grid == std::vector<double>{100.0});
    CHECK(c.tolerances.index_abs == 0.3);

    json j = json::parse(kSmallConfig);
    j.erase("z_grid");
    j["y_grid"] = {2.0};
    CHECK(config_from_json(j).z_grid == std::vector<double>{2.0});

    j["n"] = 100;  // violates n >= 10 * max(t)
    CHECK_THROWS_AS(config_from_json(j), ConfigError);
    j["n"] = 200000;
    j["t_grid"] = json::array();
    CHECK_THROWS_AS(config_from_json(j), ConfigError);
    j["t_grid"] = {-5.0};
    CHECK_THROWS_AS(config_from_json(j), ConfigError);
}

TEST_CASE("malformed config files are reported as config errors") {
    const fs::path dir = fresh_dir("badjson");
    const fs::path p = dir / "bad.json";
    std::ofstream(p) << "{ not json";
    CHECK_THROWS_AS(load_config(p), ConfigError);
    CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("model json round trips") {
    for (const char* text : {
             R"({"family":"beta_min","a":1.0,"b":2.0})",
             R"({"family":"mrv_power","rho":1.0,"gamma":2.0,"w":{"kind":"point","value":0.5}})",
             R"({"family":"coupled_negative","rho":-1.0,"gamma":-2.0,"variant":"IIc",
                 "u":{"kind":"uniform","lo":1.0,"hi":2.0}})",
             R"({"family":"case3","gamma":-1.0,"v":{"kind":"point","value":1.0},"b_inf":1.0})",
             R"({"family":"case4","rho":-1.0,"gamma":0.5,"beta_inf":4.0})",
         }) {
        const CevmModel m1 = model_from_json(json::parse(text));
        const json j = to_json(m1);
        const CevmModel m2 = model_from_json(j);
        CHECK(m1.name() == m2.name());
        CHECK(m1.sample(3, 100) == m2.sample(3, 100));
        // serialized form carries the derived parameter block
        REQUIRE(j.contains("params"));
        const ModelParams p = params_from_json(j["params"]);
        CHECK(p.rho == m1.params().rho);
        CHECK(p.gamma == m1.params().gamma);
    }
    CHECK_THROWS_AS(model_from_json(json::parse(R"({"family":"unknown"})")), ConfigError);
}

TEST_CASE("params and spectral measures round trip through json") {
    ModelParams p;
    p.rho = -0.5;
    p.gamma = -1.0;
    p.beta_inf = 1.0;
    p.b_inf = 1.0;
    p.alpha_over_a_bounded = true;
    const ModelParams q = params_from_json(to_json(p));
    CHECK(q.rho == p.rho);
    CHECK(q.beta_inf == p.beta_inf);
    CHECK(q.alpha_over_a_bounded == p.alpha_over_a_bounded);

    SpectralMeasure s;
    s.atoms = {{0.25, 0.5}, {0.75, 1.5}};
    const SpectralMeasure s2 = spectral_from_json(to_json(s));
    REQUIRE(s2.atoms.size() == 2);
    CHECK(s2.atoms[1].weight == 1.5);
}

TEST_CASE("run produces the expected report rows") {
    const VerificationReport rep = run(small_config());
    CHECK(rep.case_tag == "IIa");
    bool saw_limit = false, saw_hill = false, saw_hyp = false;
    for (const auto& r : rep.rows) {
        if (r.check == "scaled-tail") {
            saw_limit = true;
            CHECK(r.predicted == Approx(0.375).margin(1e-9));
            CHECK(r.verdict == "pass");
        }
        if (r.check == "index-hill") {
            saw_hill = true;
            CHECK(r.predicted == Approx(2.0));
            CHECK(r.verdict == "pass");
        }
        if (r.check == "hypothesis") saw_hyp = true;
    }
    CHECK(saw_limit);
    CHECK(saw_hill);
    CHECK(saw_hyp);
    CHECK(rep.overall);
}

TEST_CASE("an unreachable tolerance fails the run") {
    ExperimentConfig cfg = small_config();
    cfg.tolerances.index_abs = 0.0;
    const VerificationReport rep = run(cfg);
    CHECK_FALSE(rep.overall);
}

TEST_CASE("csv output is deterministic across runs and workers") {
    const ExperimentConfig cfg = small_config();
    const std::string csv1 = to_csv(run(cfg, 1).rows);
    const std::string csv2 = to_csv(run(cfg, 1).rows);
    const std::string csv4 = to_csv(run(cfg, 4).rows);
    REQUIRE(csv1 == csv2);
    REQUIRE(csv1 == csv4);
    CHECK(csv1.rfind("config,model,case,", 0) == 0);
}

TEST_CASE("suite runner aggregates configs in filename order") {
    const fs::path dir = fresh_dir("suite");
    std::ofstream(dir / "01_ok.json") << kSmallConfig;
    {
        json j = json::parse(kSmallConfig);
        j["name"] = "will-fail";
        j["tolerances"]["index_abs"] = 0.0;
        std::ofstream(dir / "02_fail.json") << j.dump();
    }
    const SuiteReport suite = verify_suite(dir);
    REQUIRE(suite.reports.size() == 2);
    CHECK(suite.reports[0].overall);
    CHECK_FALSE(suite.reports[1].overall);
    CHECK_FALSE(suite.overall);

    const fs::path out = dir / "out";
    write_suite_files(suite, out);
    CHECK(fs::exists(out / "results.csv"));
    const std::string md = slurp(out / "report.md");
    CHECK(md.find("OVERALL: FAIL") != std::string::npos);

    const fs::path empty = fresh_dir("empty_suite");
    CHECK_THROWS_AS(verify_suite(empty), ConfigError);
    fs::remove_all(dir);
    fs::remove_all(empty);
}

TEST_CASE("unsupported model parameters are a config error") {
    json j = json::parse(kSmallConfig);
    // gamma = 0 never reaches a supported case
    j["model"] = json::parse(R"({"family":"mrv_power","rho":1.0,"gamma":1.0,
                                 "w":{"kind":"point","value":0.5}})");
    ExperimentConfig cfg = config_from_json(j);
    CHECK_NOTHROW(run(cfg));  // supported model runs
}

TEST_CASE("sample files round trip bit-exactly") {
    const fs::path dir = fresh_dir("io");
    const auto model = beta_min_model(1.0, 2.0);
    auto pairs = model.sample(77, 5000);
    pairs.push_back({5e-324, -0.0});  // denormal and signed zero survive
    const fs::path p = dir / "samples.cevm";
    io::write_samples(p, pairs);
    const auto back = io::read_samples(p);
    REQUIRE(back.size() == pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        REQUIRE(std::memcmp(&back[i].first, &pairs[i].first, 8) == 0);
        REQUIRE(std::memcmp(&back[i].second, &pairs[i].second, 8) == 0);
    }
    // header is 16 bytes: magic, version, count
    REQUIRE(fs::file_size(p) == 16 + 16 * pairs.size());

    std::ofstream(dir / "bad.cevm", std::ios::binary) << "NOPE";
    CHECK_THROWS_AS(io::read_samples(dir / "bad.cevm"), std::runtime_error);
    fs::remove_all(dir);
}

TEST_CASE("report markdown includes every row") {
    const VerificationReport rep = run(small_config());
    const std::string md = to_markdown(rep);
    CHECK(md.find("index-hill") != std::string::npos);
    CHECK(md.find("scaled-tail") != std::string::npos);
    std::size_t lines = 0;
    for (char ch : md)
        if (ch == '\n') ++lines;
    CHECK(lines >= rep.rows.size());
}
