#include "h2msim/trace_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

#include "h2msim/errors.hpp"
#include "h2msim/sim/rng.hpp"

namespace h2msim::io {

namespace {

[[noreturn]] void fail_at(const std::string& name, std::size_t line,
                          const std::string& what) {
  throw ConfigError(name + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

std::string strip(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_number(const std::string& raw, const std::string& name,
                    std::size_t line, const char* column) {
  const std::string text = strip(raw);
  if (text.empty()) {
    fail_at(name, line, std::string("empty ") + column + " field");
  }
  const char* begin = text.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end != begin + text.size() || !std::isfinite(value)) {
    fail_at(name, line, std::string("cannot parse ") + column + " '" + text + "'");
  }
  return value;
}

double median_gap_s(const std::vector<geo::HeadSample>& samples) {
  if (samples.size() < 2) return 0.015;
  std::vector<double> gaps;
  gaps.reserve(samples.size() - 1);
  for (std::size_t i = 1; i < samples.size(); ++i) {
    gaps.push_back(samples[i].t_s - samples[i - 1].t_s);
  }
  std::sort(gaps.begin(), gaps.end());
  return gaps[gaps.size() / 2];
}

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// A millisecond value whose division by 1000 lands exactly on t_s, so
// the written file reparses to the same double. The naive product can
// be one ulp off the preimage; its neighbors cover that case.
double exact_ms(double t_s) {
  const double ms = t_s * 1e3;
  if (ms / 1e3 == t_s) return ms;
  const double up = std::nextafter(ms, std::numeric_limits<double>::infinity());
  if (up / 1e3 == t_s) return up;
  return std::nextafter(ms, -std::numeric_limits<double>::infinity());
}

}  // namespace

geo::HeadTrace parse_head_trace(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) {
    fail_at(name, 1, "empty file, expected header");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  {
    const auto fields = split_csv(line);
    const char* expected[] = {"timestamp_ms", "yaw_deg", "pitch_deg",
                              "roll_deg"};
    if (fields.size() != 4) {
      fail_at(name, 1, "header must have 4 columns");
    }
    for (int i = 0; i < 4; ++i) {
      if (strip(fields[i]) != expected[i]) {
        fail_at(name, 1,
                "column " + std::to_string(i + 1) + " must be '" +
                    expected[i] + "', got '" + strip(fields[i]) + "'");
      }
    }
  }

  geo::HeadTrace trace;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (strip(line).empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 4) {
      fail_at(name, line_no,
              "expected 4 fields, got " + std::to_string(fields.size()));
    }
    geo::HeadSample sample;
    sample.t_s = parse_number(fields[0], name, line_no, "timestamp_ms") / 1e3;
    sample.angles.yaw_deg = parse_number(fields[1], name, line_no, "yaw_deg");
    sample.angles.pitch_deg =
        parse_number(fields[2], name, line_no, "pitch_deg");
    sample.angles.roll_deg =
        parse_number(fields[3], name, line_no, "roll_deg");
    try {
      geo::validate(sample.angles);
    } catch (const ValidationError& err) {
      fail_at(name, line_no, err.what());
    }
    if (!trace.samples.empty() && sample.t_s <= trace.samples.back().t_s) {
      fail_at(name, line_no, "timestamps must be strictly increasing");
    }
    trace.samples.push_back(sample);
  }
  if (trace.samples.empty()) {
    fail_at(name, line_no, "no samples after header");
  }
  trace.nominal_period_s = median_gap_s(trace.samples);
  geo::refresh_rate_flag(trace);
  geo::validate(trace);
  return trace;
}

geo::HeadTrace load_head_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open head trace '" + path + "'");
  return parse_head_trace(in, path);
}

void save_head_trace(const geo::HeadTrace& trace, std::ostream& out) {
  out << kTraceCsvHeader << '\n';
  for (const geo::HeadSample& s : trace.samples) {
    out << fmt_g17(exact_ms(s.t_s)) << ',' << fmt_g17(s.angles.yaw_deg) << ','
        << fmt_g17(s.angles.pitch_deg) << ',' << fmt_g17(s.angles.roll_deg)
        << '\n';
  }
}

void save_head_trace(const geo::HeadTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write head trace '" + path + "'");
  save_head_trace(trace, out);
  if (!out.flush()) throw ConfigError("short write to '" + path + "'");
}

namespace {

// Per-sample yaw/pitch/roll increments of the on-off walk, unit swing
// rate. Scaled afterwards to hit the requested mean speed.
struct WalkPlan {
  std::vector<std::array<double, 3>> deltas;
};

WalkPlan plan_walk(const SyntheticTraceConfig& cfg, std::size_t n_samples) {
  sim::RngStream rng(cfg.seed, 7701);
  WalkPlan plan;
  plan.deltas.assign(n_samples, {0.0, 0.0, 0.0});

  std::size_t i = 1;  // first sample is the starting pose
  bool moving = cfg.mean_off_s <= 0.0;
  while (i < n_samples) {
    const double mean_s = moving ? cfg.mean_on_s : cfg.mean_off_s;
    auto span = static_cast<std::size_t>(
        std::ceil(rng.exponential(mean_s) / cfg.sample_period_s));
    span = std::max<std::size_t>(span, 1);
    if (moving) {
      // One swing: fixed direction, yaw-dominant, mild speed wobble.
      double dir[3] = {rng.uniform(-1.0, 1.0), rng.uniform(-0.5, 0.5),
                       rng.uniform(-0.15, 0.15)};
      const double mag = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] +
                                   dir[2] * dir[2]);
      if (mag > 1e-12) {
        for (double& d : dir) d /= mag;
      } else {
        dir[0] = 1.0;
      }
      for (std::size_t k = 0; k < span && i < n_samples; ++k, ++i) {
        const double wobble = rng.uniform(0.7, 1.3);
        plan.deltas[i] = {dir[0] * wobble, dir[1] * wobble, dir[2] * wobble};
      }
    } else {
      i += span;
    }
    moving = !moving;
  }
  return plan;
}

geo::HeadTrace build_trace(const SyntheticTraceConfig& cfg,
                           const WalkPlan& plan, double step_deg) {
  geo::HeadTrace trace;
  trace.nominal_period_s = cfg.sample_period_s;
  trace.samples.reserve(plan.deltas.size());

  const double period_ms = cfg.sample_period_s * 1e3;
  // Soft walls keep every component well inside its legal range; a step
  // into a wall is reflected, preserving its magnitude.
  const double walls[3] = {160.0, 60.0, 30.0};
  double pose[3] = {0.0, 0.0, 0.0};
  double sign[3] = {1.0, 1.0, 1.0};
  for (std::size_t i = 0; i < plan.deltas.size(); ++i) {
    for (int c = 0; c < 3; ++c) {
      double next = pose[c] + sign[c] * plan.deltas[i][c] * step_deg;
      if (next > walls[c] || next < -walls[c]) {
        sign[c] = -sign[c];
        next = pose[c] + sign[c] * plan.deltas[i][c] * step_deg;
      }
      pose[c] = std::clamp(next, -walls[c], walls[c]);
    }
    geo::HeadSample sample;
    sample.t_s = static_cast<double>(i) * period_ms / 1e3;
    sample.angles = {pose[0], pose[1], pose[2]};
    trace.samples.push_back(sample);
  }
  geo::refresh_rate_flag(trace);
  return trace;
}

}  // namespace

geo::HeadTrace synthesize_head_trace(const SyntheticTraceConfig& cfg) {
  if (cfg.duration_s <= 0.0 || cfg.sample_period_s <= 0.0) {
    throw ValidationError("trace duration and sample period must be positive");
  }
  if (cfg.target_speed_dps < 0.0) {
    throw ValidationError("target speed must be nonnegative");
  }
  if (cfg.mean_on_s <= 0.0 || cfg.mean_off_s < 0.0) {
    throw ValidationError("phase durations must be positive");
  }

  const auto n_samples = static_cast<std::size_t>(
      std::floor(cfg.duration_s / cfg.sample_period_s)) + 1;
  const WalkPlan plan = plan_walk(cfg, n_samples);

  if (cfg.target_speed_dps == 0.0 || n_samples < 2) {
    return build_trace(cfg, plan, 0.0);
  }

  // The duty cycle makes the trace-wide mean speed a fraction of the
  // swing rate; two or three proportional corrections land within 0.2%.
  double step_deg = cfg.target_speed_dps * cfg.sample_period_s /
                    (cfg.mean_on_s / (cfg.mean_on_s + cfg.mean_off_s));
  geo::HeadTrace trace = build_trace(cfg, plan, step_deg);
  for (int iter = 0; iter < 8; ++iter) {
    const double measured = geo::average_speed_dps(trace);
    if (measured <= 0.0) break;
    if (std::abs(measured - cfg.target_speed_dps) <=
        2e-3 * cfg.target_speed_dps) {
      break;
    }
    step_deg *= cfg.target_speed_dps / measured;
    trace = build_trace(cfg, plan, step_deg);
  }
  geo::validate(trace);
  return trace;
}

}  // namespace h2msim::io
