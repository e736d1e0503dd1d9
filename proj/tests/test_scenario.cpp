#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <string>

#include <nlohmann/json.hpp>

#include "h2msim/errors.hpp"
#include "h2msim/scenario.hpp"

using namespace h2msim::scenario;
using h2msim::ConfigError;
using nlohmann::json;

namespace {

std::string error_for(const json& j) {
  try {
    from_json(j);
  } catch (const ConfigError& err) {
    return err.what();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults are a valid full-scale setup") {
  const ScenarioConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  CHECK(cfg.fttp_split * cfg.fttr_split == 128);
  CHECK(2 * cfg.n_pairs + cfg.n_background_sfus == 128);

  const ScenarioConfig parsed = from_json(json::object());
  CHECK(parsed.name == "custom");
  CHECK(parsed.seed == 1);
  CHECK(parsed.resolution == "8K");
  CHECK(parsed.dba_mode == DbaMode::kPredictive);
}

TEST_CASE("json round-trip preserves every field") {
  ScenarioConfig cfg = preset("desk-1to4-4K-lsdba");
  cfg.head_trace_files = {"a.csv", "b.csv"};
  cfg.hmd.deterministic = true;
  cfg.background.law = h2msim::traffic::BackgroundConfig::GapLaw::kPareto;
  cfg.background.pareto_shape = 1.7;
  const ScenarioConfig back = from_json(to_json(cfg));
  CHECK(to_json(back) == to_json(cfg));
  CHECK(back.name == cfg.name);
  CHECK(back.dba_mode == DbaMode::kLimitedService);
  CHECK(back.predictor == Predictor::kOracle);
  CHECK(back.head_trace_files.size() == 2);
  CHECK(back.xr.spec.sensitivity_k == cfg.xr.spec.sensitivity_k);
}

TEST_CASE("unknown keys are rejected with their path") {
  CHECK(error_for({{"typo", 1}}).find("unknown key 'typo'") !=
        std::string::npos);
  CHECK(error_for({{"service", {{"dba", "hmc"}}}}).find("scenario.service") !=
        std::string::npos);
  CHECK(error_for({{"xr", {{"frame", {{"pixels", 1}}}}}})
            .find("scenario.xr.frame") != std::string::npos);
  CHECK(error_for({{"head", {{"synthetic", {{"speed", 3}}}}}})
            .find("scenario.head.synthetic") != std::string::npos);
}

TEST_CASE("wrong types and enum spellings are called out") {
  CHECK(error_for({{"duration_s", "fast"}}).find("expected a number") !=
        std::string::npos);
  CHECK(error_for({{"seed", -4}}).find("nonnegative") != std::string::npos);
  CHECK(error_for({{"topology", {{"fttp_split", 4.5}}}})
            .find("expected an integer") != std::string::npos);
  CHECK(error_for({{"service", {{"dba_mode", "static"}}}})
            .find("'ls' or 'hmc'") != std::string::npos);
  CHECK(error_for({{"service", {{"predictor", "magic"}}}})
            .find("persistence|moving_average|arima|bilstm|oracle") !=
        std::string::npos);
  CHECK(error_for({{"xr", {{"size_mode", "huge"}}}})
            .find("'empirical_gamma' or 'head_driven'") != std::string::npos);
  CHECK(error_for({{"background", {{"law", "bursty"}}}})
            .find("'exponential' or 'pareto'") != std::string::npos);
  CHECK(error_for({{"head", {{"trace_files", "one.csv"}}}})
            .find("expected an array") != std::string::npos);
}

TEST_CASE("semantic validation") {
  CHECK(error_for({{"topology", {{"fttp_split", 3}}}})
            .find("one of 2, 4, 8, 16, 32") != std::string::npos);
  // 40 pair SFUs + 16 background exceed the 4x8=32 available.
  CHECK(error_for({{"topology",
                    {{"fttp_split", 4},
                     {"fttr_split", 8},
                     {"n_pairs", 20},
                     {"n_background_sfus", 16}}}})
            .find("exceed") != std::string::npos);
  CHECK(error_for({{"duration_s", 0.0}}).find("positive") !=
        std::string::npos);
  CHECK(error_for({{"xr", {{"min_gap_s", 0.05}}}})
            .find("below the mean gap") != std::string::npos);
  CHECK(error_for({{"background",
                    {{"law", "pareto"}, {"pareto_shape", 1.0}}}})
            .find("exceed 1") != std::string::npos);
  CHECK(error_for({{"background", {{"load_fraction", 1.0}}}})
            .find("[0, 1)") != std::string::npos);
  CHECK(error_for({{"link", {{"mtu_bytes", 1501}}}}).find("[1, 1500]") !=
        std::string::npos);
  // Guard intervals that eat the whole polling cycle are degenerate.
  CHECK_FALSE(error_for({{"fttr", {{"t_guard_s", 1e-3}}}}).empty());
  CHECK(error_for({{"service", {{"resolution", "32K"}}}})
            .find("unknown resolution") != std::string::npos);
}

TEST_CASE("presets") {
  for (const std::string& name : preset_names()) {
    const ScenarioConfig cfg = preset(name);
    CHECK(cfg.name == name);
    CHECK_NOTHROW(validate(cfg));
  }

  const ScenarioConfig desk = preset("desk-1to4-8K-hmcdba");
  CHECK(desk.fttp_split == 4);
  CHECK(desk.fttr_split == 4);
  CHECK(desk.n_pairs == 6);
  CHECK(desk.n_background_sfus == 4);
  CHECK(desk.dba_mode == DbaMode::kPredictive);
  CHECK(desk.resolution == "8K");
  CHECK(desk.xr.mode == h2msim::traffic::XrSourceConfig::SizeMode::kHeadDriven);
  CHECK(desk.xr.floor_bytes < desk.xr.spec.raw_frame_bytes());

  const ScenarioConfig ls = preset("desk-1to4-8K-lsdba");
  CHECK(ls.dba_mode == DbaMode::kLimitedService);
  CHECK(ls.seed == desk.seed);  // paired runs share everything but the DBA

  const ScenarioConfig paper = preset("paper-5.1-1to16-8K-hmcdba");
  CHECK(paper.fttp_split == 16);
  CHECK(paper.fttr_split == 8);
  CHECK(paper.n_pairs == 56);

  const ScenarioConfig idle = preset("idle");
  CHECK(idle.n_pairs == 0);
  CHECK(idle.n_background_sfus == 0);

  CHECK_THROWS_AS(preset("desk-1to4-16K-lsdba"), ConfigError);
}

TEST_CASE("file save and load round-trip") {
  const std::string path = "/tmp/h2msim_scenario_test.json";
  ScenarioConfig cfg = preset("desk-1to4-2K-hmcdba");
  cfg.seed = 99;
  save_scenario(cfg, path);
  const ScenarioConfig loaded = load_scenario(path);
  CHECK(to_json(loaded) == to_json(cfg));
  std::remove(path.c_str());

  CHECK_THROWS_AS(load_scenario("/nonexistent/scn.json"), ConfigError);

  const std::string bad = "/tmp/h2msim_scenario_bad.json";
  {
    FILE* f = fopen(bad.c_str(), "w");
    fputs("{not json", f);
    fclose(f);
  }
  CHECK_THROWS_AS(load_scenario(bad), ConfigError);
  std::remove(bad.c_str());
}

TEST_CASE("partial overrides keep unrelated defaults") {
  const ScenarioConfig cfg =
      from_json({{"service", {{"dba_mode", "ls"}}},
                 {"topology", {{"n_pairs", 10}, {"n_background_sfus", 0}}}});
  CHECK(cfg.dba_mode == DbaMode::kLimitedService);
  CHECK(cfg.n_pairs == 10);
  CHECK(cfg.fttp_split == 16);           // untouched default
  CHECK(cfg.horizon_s == 0.090);
  CHECK(cfg.resolution == "8K");
}
