#include "h2msim/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <string>

#include <nlohmann/json.hpp>

#include "h2msim/dba.hpp"
#include "h2msim/errors.hpp"
#include "h2msim/xr_model.hpp"

namespace h2msim::scenario {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("scenario." + path + ": " + what);
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& item : j.items()) {
    const bool known =
        std::any_of(allowed.begin(), allowed.end(),
                    [&](const char* k) { return item.key() == k; });
    if (!known) fail(path, "unknown key '" + item.key() + "'");
  }
}

double num_field(const json& j, const std::string& path, const char* key,
                 double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

int int_field(const json& j, const std::string& path, const char* key,
              int fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

std::uint64_t u64_field(const json& j, const std::string& path,
                        const char* key, std::uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_unsigned() && !v.is_number_integer()) {
    fail(path + "." + key, "expected a nonnegative integer");
  }
  if (v.is_number_integer() && v.get<std::int64_t>() < 0) {
    fail(path + "." + key, "expected a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

bool bool_field(const json& j, const std::string& path, const char* key,
                bool fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean()) fail(path + "." + key, "expected a boolean");
  return v.get<bool>();
}

std::string str_field(const json& j, const std::string& path, const char* key,
                      const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

SegmentConfig segment_from_json(const json& j, const std::string& path,
                                const SegmentConfig& base) {
  check_keys(j, path, {"rate_bps", "length_m", "t_poll_s", "t_guard_s"});
  SegmentConfig seg = base;
  seg.rate_bps = num_field(j, path, "rate_bps", base.rate_bps);
  seg.length_m = num_field(j, path, "length_m", base.length_m);
  seg.t_poll_s = num_field(j, path, "t_poll_s", base.t_poll_s);
  seg.t_guard_s = num_field(j, path, "t_guard_s", base.t_guard_s);
  return seg;
}

json segment_to_json(const SegmentConfig& seg) {
  return json{{"rate_bps", seg.rate_bps},
              {"length_m", seg.length_m},
              {"t_poll_s", seg.t_poll_s},
              {"t_guard_s", seg.t_guard_s}};
}

DbaMode dba_mode_from(const std::string& text, const std::string& path) {
  if (text == "ls") return DbaMode::kLimitedService;
  if (text == "hmc") return DbaMode::kPredictive;
  fail(path, "dba_mode must be 'ls' or 'hmc', got '" + text + "'");
}

Predictor predictor_from(const std::string& text, const std::string& path) {
  if (text == "persistence") return Predictor::kPersistence;
  if (text == "moving_average") return Predictor::kMovingAverage;
  if (text == "arima") return Predictor::kArima;
  if (text == "bilstm") return Predictor::kBilstm;
  if (text == "oracle") return Predictor::kOracle;
  fail(path, "predictor must be one of persistence|moving_average|arima|bilstm|oracle");
}

}  // namespace

std::string_view dba_mode_name(DbaMode mode) {
  return mode == DbaMode::kLimitedService ? "ls" : "hmc";
}

std::string_view predictor_name(Predictor p) {
  switch (p) {
    case Predictor::kPersistence:
      return "persistence";
    case Predictor::kMovingAverage:
      return "moving_average";
    case Predictor::kArima:
      return "arima";
    case Predictor::kBilstm:
      return "bilstm";
    case Predictor::kOracle:
      return "oracle";
  }
  throw ConfigError("unknown predictor");
}

void validate(const ScenarioConfig& cfg) {
  const auto split_ok = [](int split) {
    return split == 2 || split == 4 || split == 8 || split == 16 ||
           split == 32;
  };
  if (!split_ok(cfg.fttp_split)) {
    fail("topology.fttp_split", "split must be one of 2, 4, 8, 16, 32");
  }
  if (!split_ok(cfg.fttr_split)) {
    fail("topology.fttr_split", "split must be one of 2, 4, 8, 16, 32");
  }
  if (cfg.n_pairs < 0 || cfg.n_background_sfus < 0) {
    fail("topology", "endpoint counts must be nonnegative");
  }
  const int capacity = cfg.fttp_split * cfg.fttr_split;
  if (2 * cfg.n_pairs + cfg.n_background_sfus > capacity) {
    fail("topology", std::to_string(2 * cfg.n_pairs + cfg.n_background_sfus) +
                         " endpoints exceed " + std::to_string(capacity) +
                         " SFUs");
  }
  if (cfg.duration_s <= 0.0) fail("duration_s", "must be positive");

  const auto check_segment = [](const SegmentConfig& seg, int n_onu,
                                const char* which) {
    if (seg.rate_bps <= 0.0) fail(std::string(which) + ".rate_bps", "must be positive");
    if (seg.length_m <= 0.0) fail(std::string(which) + ".length_m", "must be positive");
    if (seg.t_guard_s < 0.0) fail(std::string(which) + ".t_guard_s", "must be nonnegative");
    dba::PollingConfig poll;
    poll.t_poll_s = seg.t_poll_s;
    poll.t_guard_s = seg.t_guard_s;
    poll.n_onu = n_onu;
    poll.rate_Bps = seg.rate_bps / 8.0;
    dba::bw_max(poll);  // throws on a degenerate polling window
  };
  check_segment(cfg.fttp, cfg.fttp_split, "fttp");
  check_segment(cfg.fttr, cfg.fttr_split, "fttr");

  xr::resolution_class(cfg.resolution);
  if (cfg.horizon_s <= 0.0) fail("service.horizon_s", "must be positive");
  if (cfg.camera_speed_dps <= 0.0) {
    fail("service.camera_speed_dps", "must be positive");
  }

  if (cfg.xr.mean_gap_s <= 0.0) fail("xr.mean_gap_s", "must be positive");
  if (cfg.xr.gap_variance_s2 < 0.0) {
    fail("xr.gap_variance_s2", "must be nonnegative");
  }
  if (cfg.xr.min_gap_s < 0.0 || cfg.xr.min_gap_s >= cfg.xr.mean_gap_s) {
    fail("xr.min_gap_s", "must be nonnegative and below the mean gap");
  }
  if (cfg.xr.mode == traffic::XrSourceConfig::SizeMode::kEmpiricalGamma) {
    if (cfg.xr.gamma_shape <= 0.0 || cfg.xr.gamma_scale_kb <= 0.0) {
      fail("xr", "gamma shape and scale must be positive");
    }
  } else {
    xr::validate(cfg.xr.spec);
    if (cfg.xr.floor_bytes < 0.0) fail("xr.floor_bytes", "must be nonnegative");
  }

  if (cfg.hmd.gamma_shape <= 0.0 || cfg.hmd.gamma_scale_ms <= 0.0) {
    fail("hmd", "gamma shape and scale must be positive");
  }
  if (cfg.hmd.payload_bytes < 1 ||
      cfg.hmd.payload_bytes > traffic::kMaxPayloadBytes) {
    fail("hmd.payload_bytes", "must be in [1, 1500]");
  }

  if (cfg.background.load_fraction < 0.0 ||
      cfg.background.load_fraction >= 1.0) {
    fail("background.load_fraction", "must be in [0, 1)");
  }
  if (cfg.background.law == traffic::BackgroundConfig::GapLaw::kPareto &&
      cfg.background.pareto_shape <= 1.0) {
    fail("background.pareto_shape", "must exceed 1 for a finite mean");
  }
  if (cfg.background.packet_bytes < 1 ||
      cfg.background.packet_bytes > traffic::kMaxPayloadBytes) {
    fail("background.packet_bytes", "must be in [1, 1500]");
  }

  if (cfg.head_trace_files.empty()) {
    const auto& syn = cfg.synthetic_head;
    if (syn.duration_s <= 0.0 || syn.sample_period_s <= 0.0) {
      fail("head.synthetic", "duration and sample period must be positive");
    }
    if (syn.target_speed_dps < 0.0) {
      fail("head.synthetic.target_speed_dps", "must be nonnegative");
    }
    if (syn.mean_on_s <= 0.0 || syn.mean_off_s < 0.0) {
      fail("head.synthetic", "phase durations must be positive");
    }
  }

  if (cfg.wireless_latency_s < 0.0 || cfg.edge_ai_latency_s < 0.0) {
    fail("link", "latencies must be nonnegative");
  }
  if (cfg.mtu_bytes < 1 || cfg.mtu_bytes > traffic::kMaxPayloadBytes) {
    fail("link.mtu_bytes", "must be in [1, 1500]");
  }
  if (cfg.buffer_limit_bytes < 0.0) {
    fail("link.buffer_limit_bytes", "must be nonnegative");
  }
}

ScenarioConfig from_json(const nlohmann::json& j) {
  check_keys(j, "(root)",
             {"name", "seed", "duration_s", "topology", "fttp", "fttr",
              "service", "xr", "hmd", "background", "head", "link"});
  ScenarioConfig cfg;
  cfg.name = str_field(j, "(root)", "name", cfg.name);
  cfg.seed = u64_field(j, "(root)", "seed", cfg.seed);
  cfg.duration_s = num_field(j, "(root)", "duration_s", cfg.duration_s);

  if (j.contains("topology")) {
    const json& t = j.at("topology");
    check_keys(t, "topology",
               {"fttp_split", "fttr_split", "n_pairs", "n_background_sfus"});
    cfg.fttp_split = int_field(t, "topology", "fttp_split", cfg.fttp_split);
    cfg.fttr_split = int_field(t, "topology", "fttr_split", cfg.fttr_split);
    cfg.n_pairs = int_field(t, "topology", "n_pairs", cfg.n_pairs);
    cfg.n_background_sfus =
        int_field(t, "topology", "n_background_sfus", cfg.n_background_sfus);
  }
  if (j.contains("fttp")) {
    cfg.fttp = segment_from_json(j.at("fttp"), "fttp", cfg.fttp);
  }
  if (j.contains("fttr")) {
    cfg.fttr = segment_from_json(j.at("fttr"), "fttr", cfg.fttr);
  }

  if (j.contains("service")) {
    const json& s = j.at("service");
    check_keys(s, "service",
               {"resolution", "dba_mode", "predictor", "horizon_s",
                "camera_speed_dps"});
    cfg.resolution = str_field(s, "service", "resolution", cfg.resolution);
    cfg.dba_mode = dba_mode_from(
        str_field(s, "service", "dba_mode",
                  std::string(dba_mode_name(cfg.dba_mode))),
        "service.dba_mode");
    cfg.predictor = predictor_from(
        str_field(s, "service", "predictor",
                  std::string(predictor_name(cfg.predictor))),
        "service.predictor");
    cfg.horizon_s = num_field(s, "service", "horizon_s", cfg.horizon_s);
    cfg.camera_speed_dps =
        num_field(s, "service", "camera_speed_dps", cfg.camera_speed_dps);
  }

  if (j.contains("xr")) {
    const json& x = j.at("xr");
    check_keys(x, "xr",
               {"mean_gap_s", "gap_variance_s2", "min_gap_s", "size_mode",
                "gamma_shape", "gamma_scale_kb", "floor_bytes", "frame"});
    cfg.xr.mean_gap_s = num_field(x, "xr", "mean_gap_s", cfg.xr.mean_gap_s);
    cfg.xr.gap_variance_s2 =
        num_field(x, "xr", "gap_variance_s2", cfg.xr.gap_variance_s2);
    cfg.xr.min_gap_s = num_field(x, "xr", "min_gap_s", cfg.xr.min_gap_s);
    const std::string mode = str_field(
        x, "xr", "size_mode",
        cfg.xr.mode == traffic::XrSourceConfig::SizeMode::kEmpiricalGamma
            ? "empirical_gamma"
            : "head_driven");
    if (mode == "empirical_gamma") {
      cfg.xr.mode = traffic::XrSourceConfig::SizeMode::kEmpiricalGamma;
    } else if (mode == "head_driven") {
      cfg.xr.mode = traffic::XrSourceConfig::SizeMode::kHeadDriven;
    } else {
      fail("xr.size_mode", "must be 'empirical_gamma' or 'head_driven'");
    }
    cfg.xr.gamma_shape = num_field(x, "xr", "gamma_shape", cfg.xr.gamma_shape);
    cfg.xr.gamma_scale_kb =
        num_field(x, "xr", "gamma_scale_kb", cfg.xr.gamma_scale_kb);
    cfg.xr.floor_bytes = num_field(x, "xr", "floor_bytes", cfg.xr.floor_bytes);
    if (x.contains("frame")) {
      const json& f = x.at("frame");
      check_keys(f, "xr.frame",
                 {"width_px", "height_px", "color_depth_bytes", "fov_deg",
                  "frame_rate_fps", "sensitivity_k"});
      auto& spec = cfg.xr.spec;
      spec.width_px = num_field(f, "xr.frame", "width_px", spec.width_px);
      spec.height_px = num_field(f, "xr.frame", "height_px", spec.height_px);
      spec.color_depth_bytes =
          num_field(f, "xr.frame", "color_depth_bytes", spec.color_depth_bytes);
      spec.fov_deg = num_field(f, "xr.frame", "fov_deg", spec.fov_deg);
      spec.frame_rate_fps =
          num_field(f, "xr.frame", "frame_rate_fps", spec.frame_rate_fps);
      spec.sensitivity_k =
          num_field(f, "xr.frame", "sensitivity_k", spec.sensitivity_k);
    }
  }

  if (j.contains("hmd")) {
    const json& h = j.at("hmd");
    check_keys(h, "hmd",
               {"gamma_shape", "gamma_scale_ms", "payload_bytes",
                "deterministic"});
    cfg.hmd.gamma_shape = num_field(h, "hmd", "gamma_shape", cfg.hmd.gamma_shape);
    cfg.hmd.gamma_scale_ms =
        num_field(h, "hmd", "gamma_scale_ms", cfg.hmd.gamma_scale_ms);
    cfg.hmd.payload_bytes = static_cast<std::uint32_t>(
        int_field(h, "hmd", "payload_bytes",
                  static_cast<int>(cfg.hmd.payload_bytes)));
    cfg.hmd.deterministic =
        bool_field(h, "hmd", "deterministic", cfg.hmd.deterministic);
  }

  if (j.contains("background")) {
    const json& b = j.at("background");
    check_keys(b, "background",
               {"law", "pareto_shape", "packet_bytes", "load_fraction"});
    const std::string law = str_field(
        b, "background", "law",
        cfg.background.law == traffic::BackgroundConfig::GapLaw::kExponential
            ? "exponential"
            : "pareto");
    if (law == "exponential") {
      cfg.background.law = traffic::BackgroundConfig::GapLaw::kExponential;
    } else if (law == "pareto") {
      cfg.background.law = traffic::BackgroundConfig::GapLaw::kPareto;
    } else {
      fail("background.law", "must be 'exponential' or 'pareto'");
    }
    cfg.background.pareto_shape =
        num_field(b, "background", "pareto_shape", cfg.background.pareto_shape);
    cfg.background.packet_bytes = static_cast<std::uint32_t>(
        int_field(b, "background", "packet_bytes",
                  static_cast<int>(cfg.background.packet_bytes)));
    cfg.background.load_fraction =
        num_field(b, "background", "load_fraction",
                  cfg.background.load_fraction);
  }

  if (j.contains("head")) {
    const json& h = j.at("head");
    check_keys(h, "head", {"trace_files", "synthetic"});
    if (h.contains("trace_files")) {
      const json& files = h.at("trace_files");
      if (!files.is_array()) fail("head.trace_files", "expected an array");
      cfg.head_trace_files.clear();
      for (std::size_t i = 0; i < files.size(); ++i) {
        if (!files[i].is_string()) {
          fail("head.trace_files[" + std::to_string(i) + "]",
               "expected a string");
        }
        cfg.head_trace_files.push_back(files[i].get<std::string>());
      }
    }
    if (h.contains("synthetic")) {
      const json& s = h.at("synthetic");
      check_keys(s, "head.synthetic",
                 {"target_speed_dps", "duration_s", "sample_period_s",
                  "mean_on_s", "mean_off_s", "seed"});
      auto& syn = cfg.synthetic_head;
      syn.target_speed_dps = num_field(s, "head.synthetic", "target_speed_dps",
                                       syn.target_speed_dps);
      syn.duration_s =
          num_field(s, "head.synthetic", "duration_s", syn.duration_s);
      syn.sample_period_s = num_field(s, "head.synthetic", "sample_period_s",
                                      syn.sample_period_s);
      syn.mean_on_s = num_field(s, "head.synthetic", "mean_on_s", syn.mean_on_s);
      syn.mean_off_s =
          num_field(s, "head.synthetic", "mean_off_s", syn.mean_off_s);
      syn.seed = u64_field(s, "head.synthetic", "seed", syn.seed);
    }
  }

  if (j.contains("link")) {
    const json& l = j.at("link");
    check_keys(l, "link",
               {"wireless_latency_s", "edge_ai_latency_s", "mtu_bytes",
                "buffer_limit_bytes"});
    cfg.wireless_latency_s =
        num_field(l, "link", "wireless_latency_s", cfg.wireless_latency_s);
    cfg.edge_ai_latency_s =
        num_field(l, "link", "edge_ai_latency_s", cfg.edge_ai_latency_s);
    cfg.mtu_bytes = static_cast<std::uint32_t>(
        int_field(l, "link", "mtu_bytes", static_cast<int>(cfg.mtu_bytes)));
    cfg.buffer_limit_bytes =
        num_field(l, "link", "buffer_limit_bytes", cfg.buffer_limit_bytes);
  }

  validate(cfg);
  return cfg;
}

nlohmann::json to_json(const ScenarioConfig& cfg) {
  return json{
      {"name", cfg.name},
      {"seed", cfg.seed},
      {"duration_s", cfg.duration_s},
      {"topology",
       {{"fttp_split", cfg.fttp_split},
        {"fttr_split", cfg.fttr_split},
        {"n_pairs", cfg.n_pairs},
        {"n_background_sfus", cfg.n_background_sfus}}},
      {"fttp", segment_to_json(cfg.fttp)},
      {"fttr", segment_to_json(cfg.fttr)},
      {"service",
       {{"resolution", cfg.resolution},
        {"dba_mode", std::string(dba_mode_name(cfg.dba_mode))},
        {"predictor", std::string(predictor_name(cfg.predictor))},
        {"horizon_s", cfg.horizon_s},
        {"camera_speed_dps", cfg.camera_speed_dps}}},
      {"xr",
       {{"mean_gap_s", cfg.xr.mean_gap_s},
        {"gap_variance_s2", cfg.xr.gap_variance_s2},
        {"min_gap_s", cfg.xr.min_gap_s},
        {"size_mode",
         cfg.xr.mode == traffic::XrSourceConfig::SizeMode::kEmpiricalGamma
             ? "empirical_gamma"
             : "head_driven"},
        {"gamma_shape", cfg.xr.gamma_shape},
        {"gamma_scale_kb", cfg.xr.gamma_scale_kb},
        {"floor_bytes", cfg.xr.floor_bytes},
        {"frame",
         {{"width_px", cfg.xr.spec.width_px},
          {"height_px", cfg.xr.spec.height_px},
          {"color_depth_bytes", cfg.xr.spec.color_depth_bytes},
          {"fov_deg", cfg.xr.spec.fov_deg},
          {"frame_rate_fps", cfg.xr.spec.frame_rate_fps},
          {"sensitivity_k", cfg.xr.spec.sensitivity_k}}}}},
      {"hmd",
       {{"gamma_shape", cfg.hmd.gamma_shape},
        {"gamma_scale_ms", cfg.hmd.gamma_scale_ms},
        {"payload_bytes", cfg.hmd.payload_bytes},
        {"deterministic", cfg.hmd.deterministic}}},
      {"background",
       {{"law",
         cfg.background.law == traffic::BackgroundConfig::GapLaw::kExponential
             ? "exponential"
             : "pareto"},
        {"pareto_shape", cfg.background.pareto_shape},
        {"packet_bytes", cfg.background.packet_bytes},
        {"load_fraction", cfg.background.load_fraction}}},
      {"head",
       {{"trace_files", cfg.head_trace_files},
        {"synthetic",
         {{"target_speed_dps", cfg.synthetic_head.target_speed_dps},
          {"duration_s", cfg.synthetic_head.duration_s},
          {"sample_period_s", cfg.synthetic_head.sample_period_s},
          {"mean_on_s", cfg.synthetic_head.mean_on_s},
          {"mean_off_s", cfg.synthetic_head.mean_off_s},
          {"seed", cfg.synthetic_head.seed}}}}},
      {"link",
       {{"wireless_latency_s", cfg.wireless_latency_s},
        {"edge_ai_latency_s", cfg.edge_ai_latency_s},
        {"mtu_bytes", cfg.mtu_bytes},
        {"buffer_limit_bytes", cfg.buffer_limit_bytes}}}};
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& err) {
    throw ConfigError("scenario '" + path + "': " + err.what());
  }
  ScenarioConfig cfg = from_json(j);
  if (!j.contains("name")) cfg.name = path;
  return cfg;
}

void save_scenario(const ScenarioConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write scenario '" + path + "'");
  out << to_json(cfg).dump(2) << '\n';
  if (!out.flush()) throw ConfigError("short write to '" + path + "'");
}

namespace {

// Head-driven frame parameters per quality tier: the still-head frame
// keeps the carried rate a hair above the tier's datarate floor, the
// envelope leaves the saturation law ~60% headroom for motion, and the
// sensitivity puts the floor/envelope crossover near 1 degree of
// desynchronization.
struct TierFrame {
  double width_px;
  double height_px;
  double depth_bytes;
  double sensitivity_k;
  double floor_bytes;
};

TierFrame tier_frame(const std::string& resolution) {
  if (resolution == "2K") return {2048.0, 1080.0, 0.1258, 4.0e-5, 173900.0};
  if (resolution == "4K") return {3840.0, 2160.0, 0.0755, 1.07e-5, 391400.0};
  if (resolution == "8K") return {7680.0, 4320.0, 0.0755, 2.7e-6, 1565000.0};
  throw ConfigError("no desk frame parameters for resolution '" + resolution +
                    "'");
}

void apply_head_driven_xr(ScenarioConfig& cfg, const std::string& resolution) {
  const TierFrame f = tier_frame(resolution);
  cfg.resolution = resolution;
  cfg.xr.mode = traffic::XrSourceConfig::SizeMode::kHeadDriven;
  cfg.xr.spec.width_px = f.width_px;
  cfg.xr.spec.height_px = f.height_px;
  cfg.xr.spec.color_depth_bytes = f.depth_bytes;
  cfg.xr.spec.fov_deg = 90.0;
  cfg.xr.spec.frame_rate_fps = 30.0;
  cfg.xr.spec.sensitivity_k = f.sensitivity_k;
  cfg.xr.floor_bytes = f.floor_bytes;
}

ScenarioConfig desk_preset(const std::string& resolution, DbaMode mode) {
  ScenarioConfig cfg;
  cfg.name = "desk-1to4-" + resolution + "-" +
             std::string(dba_mode_name(mode)) + "dba";
  cfg.seed = 7;
  cfg.duration_s = 60.0;
  cfg.fttp_split = 4;
  cfg.fttr_split = 4;
  cfg.n_pairs = 6;
  cfg.n_background_sfus = 4;
  cfg.fttp = {20e9, 20000.0, 0.5e-3, 1e-6};
  cfg.fttr = {10e9, 20.0, 2e-3, 2e-6};
  cfg.dba_mode = mode;
  cfg.predictor = Predictor::kOracle;
  cfg.horizon_s = 0.090;
  cfg.camera_speed_dps = 120.0;
  apply_head_driven_xr(cfg, resolution);
  cfg.background.law = traffic::BackgroundConfig::GapLaw::kExponential;
  cfg.background.load_fraction = 0.42;
  cfg.synthetic_head.target_speed_dps = 120.0;
  cfg.synthetic_head.duration_s = 60.0;
  cfg.synthetic_head.seed = 7;
  return cfg;
}

ScenarioConfig paper_preset(DbaMode mode) {
  ScenarioConfig cfg;
  cfg.name = "paper-5.1-1to16-8K-" + std::string(dba_mode_name(mode)) + "dba";
  cfg.seed = 1;
  cfg.duration_s = 1.0;
  cfg.dba_mode = mode;
  cfg.predictor = Predictor::kPersistence;
  cfg.horizon_s = 0.090;
  cfg.camera_speed_dps = 15.0;
  apply_head_driven_xr(cfg, "8K");
  cfg.background.law = traffic::BackgroundConfig::GapLaw::kPareto;
  cfg.background.load_fraction = 0.16;
  cfg.synthetic_head.target_speed_dps = 90.0;
  cfg.synthetic_head.duration_s = 60.0;
  return cfg;
}

ScenarioConfig idle_preset() {
  ScenarioConfig cfg;
  cfg.name = "idle";
  cfg.duration_s = 1.0;
  cfg.fttp_split = 4;
  cfg.fttr_split = 4;
  cfg.n_pairs = 0;
  cfg.n_background_sfus = 0;
  cfg.fttp = {20e9, 20000.0, 0.5e-3, 1e-6};
  return cfg;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> kNames = {
      "paper-5.1-1to16-8K-lsdba", "paper-5.1-1to16-8K-hmcdba",
      "desk-1to4-2K-lsdba",       "desk-1to4-2K-hmcdba",
      "desk-1to4-4K-lsdba",       "desk-1to4-4K-hmcdba",
      "desk-1to4-8K-lsdba",       "desk-1to4-8K-hmcdba",
      "idle",
  };
  return kNames;
}

ScenarioConfig preset(const std::string& name) {
  ScenarioConfig cfg;
  if (name == "paper-5.1-1to16-8K-lsdba") {
    cfg = paper_preset(DbaMode::kLimitedService);
  } else if (name == "paper-5.1-1to16-8K-hmcdba") {
    cfg = paper_preset(DbaMode::kPredictive);
  } else if (name == "idle") {
    cfg = idle_preset();
  } else {
    bool matched = false;
    for (const char* res : {"2K", "4K", "8K"}) {
      for (const DbaMode mode :
           {DbaMode::kLimitedService, DbaMode::kPredictive}) {
        const std::string candidate = "desk-1to4-" + std::string(res) + "-" +
                                      std::string(dba_mode_name(mode)) + "dba";
        if (name == candidate) {
          cfg = desk_preset(res, mode);
          matched = true;
        }
      }
    }
    if (!matched) {
      throw ConfigError("unknown preset '" + name +
                        "'; try one of the names from preset_names()");
    }
  }
  validate(cfg);
  return cfg;
}

}  // namespace h2msim::scenario
