#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "h2msim/trace_io.hpp"
#include "h2msim/traffic.hpp"

namespace h2msim::scenario {

enum class DbaMode { kLimitedService, kPredictive };
enum class Predictor { kPersistence, kMovingAverage, kArima, kBilstm, kOracle };

std::string_view dba_mode_name(DbaMode mode);
std::string_view predictor_name(Predictor p);

// One PON stage: trunk (OLT to MFUs) or in-premises (MFU to SFUs).
struct SegmentConfig {
  double rate_bps = 0.0;
  double length_m = 0.0;
  double t_poll_s = 0.0;
  double t_guard_s = 0.0;
};

// Everything one run needs. Defaults describe the full-scale reference
// network; presets shrink it to desk size.
struct ScenarioConfig {
  std::string name = "custom";
  std::uint64_t seed = 1;
  double duration_s = 1.0;

  // Tree shape: the trunk splits into MFUs, each MFU into SFUs. A
  // human-machine pair occupies two SFUs (HMD side + camera side);
  // background SFUs carry best-effort load; the rest stay idle.
  int fttp_split = 16;
  int fttr_split = 8;
  int n_pairs = 56;
  int n_background_sfus = 16;

  SegmentConfig fttp{50e9, 20000.0, 0.5e-3, 1e-6};
  SegmentConfig fttr{10e9, 20.0, 2e-3, 2e-6};

  std::string resolution = "8K";
  DbaMode dba_mode = DbaMode::kPredictive;
  Predictor predictor = Predictor::kPersistence;
  double horizon_s = 0.090;
  double camera_speed_dps = 15.0;

  traffic::XrSourceConfig xr;
  traffic::HmdSourceConfig hmd;
  // load_fraction is the share of the trunk rate offered by all
  // background SFUs together, divided evenly among them.
  traffic::BackgroundConfig background;

  // Orientation feed for the pairs, assigned round-robin. With no
  // files the bundled synthetic generator supplies one trace per pair
  // (seed offset by the pair index).
  std::vector<std::string> head_trace_files;
  io::SyntheticTraceConfig synthetic_head;

  double wireless_latency_s = 1e-3;
  double edge_ai_latency_s = 0.0;
  std::uint32_t mtu_bytes = 1500;
  double buffer_limit_bytes = 0.0;  // 0 = unbounded queues
};

// Throws ConfigError on any inconsistency: unsupported split, more
// endpoints than SFUs, unknown resolution, degenerate polling windows,
// background load outside [0, 1), and so on.
void validate(const ScenarioConfig& cfg);

// Strict mapping: unknown keys anywhere in the document are rejected,
// every present key must have the right type. Missing keys keep their
// defaults.
ScenarioConfig from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScenarioConfig& cfg);

ScenarioConfig load_scenario(const std::string& path);
void save_scenario(const ScenarioConfig& cfg, const std::string& path);

const std::vector<std::string>& preset_names();
// Throws ConfigError for names not in preset_names().
ScenarioConfig preset(const std::string& name);

}  // namespace h2msim::scenario
