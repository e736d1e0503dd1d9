#include "h2msim/xr_model.hpp"

#include <algorithm>
#include <cmath>

#include "h2msim/errors.hpp"

namespace h2msim::xr {

void validate(const FrameSpec& spec) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw h2msim::ValidationError(std::string("FrameSpec: ") + name +
                                    " must be positive");
    }
  };
  positive(spec.width_px, "width_px");
  positive(spec.height_px, "height_px");
  positive(spec.color_depth_bytes, "color_depth_bytes");
  positive(spec.fov_deg, "fov_deg");
  positive(spec.frame_rate_fps, "frame_rate_fps");
  positive(spec.sensitivity_k, "sensitivity_k");
}

double pixel_shift_px(const FrameSpec& spec, double theta_deg) {
  if (theta_deg < 0.0) {
    throw h2msim::ValidationError("pixel_shift: negative angular shift");
  }
  return spec.pixels() * theta_deg / spec.fov_deg;
}

double effective_datarate_Bps(const FrameSpec& spec, double theta_deg) {
  validate(spec);
  const double shift = pixel_shift_px(spec, theta_deg);
  return spec.raw_datarate_Bps() * (1.0 - std::exp(-spec.sensitivity_k * shift));
}

double effective_frame_bytes(const FrameSpec& spec, double theta_deg) {
  return effective_datarate_Bps(spec, theta_deg) / spec.frame_rate_fps;
}

std::vector<double> horizon_spread_demand(const FrameSpec& spec,
                                          double theta_total_deg,
                                          double horizon_s,
                                          double camera_speed_dps,
                                          double frame_period_s) {
  validate(spec);
  if (theta_total_deg < 0.0) {
    throw h2msim::ValidationError("horizon_spread_demand: negative shift");
  }
  if (!(camera_speed_dps > 0.0)) {
    throw h2msim::ValidationError(
        "horizon_spread_demand: camera speed must be positive");
  }
  if (!(frame_period_s > 0.0)) {
    throw h2msim::ValidationError(
        "horizon_spread_demand: frame period must be positive");
  }
  if (horizon_s < frame_period_s - 1e-12) {
    throw h2msim::ValidationError(
        "horizon_spread_demand: horizon shorter than one frame period");
  }
  if (theta_total_deg == 0.0) {
    const auto n = static_cast<std::size_t>(
        std::ceil(horizon_s / frame_period_s - 1e-12));
    return std::vector<double>(std::max<std::size_t>(n, 1),
                               effective_frame_bytes(spec, 0.0));
  }
  const double rate = std::min(camera_speed_dps, theta_total_deg / horizon_s);
  const double duration = theta_total_deg / rate;
  const auto n =
      static_cast<std::size_t>(std::ceil(duration / frame_period_s - 1e-12));
  const double per_frame = rate * frame_period_s;
  std::vector<double> sizes;
  sizes.reserve(n);
  double remaining = theta_total_deg;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    sizes.push_back(effective_frame_bytes(spec, per_frame));
    remaining -= per_frame;
  }
  sizes.push_back(effective_frame_bytes(spec, std::max(remaining, 0.0)));
  return sizes;
}

double calibrate_sensitivity(FrameSpec spec,
                             const std::vector<double>& per_frame_theta_deg,
                             double target_mean_bytes, double floor_bytes) {
  if (per_frame_theta_deg.empty()) {
    throw h2msim::ValidationError("calibrate_sensitivity: empty shift sequence");
  }
  if (floor_bytes < 0.0) {
    throw h2msim::ValidationError("calibrate_sensitivity: negative floor");
  }
  auto mean_for = [&](double k) {
    spec.sensitivity_k = k;
    double acc = 0.0;
    for (double theta : per_frame_theta_deg) {
      acc += std::max(floor_bytes, effective_frame_bytes(spec, theta));
    }
    return acc / static_cast<double>(per_frame_theta_deg.size());
  };
  const double lo_mean = std::max(floor_bytes, 0.0);
  if (target_mean_bytes <= lo_mean || target_mean_bytes >= spec.raw_frame_bytes()) {
    throw h2msim::FitError(
        "calibrate_sensitivity: target mean outside attainable range");
  }
  double k_lo = 1e-12;
  double k_hi = 1e-3;
  int guard = 0;
  while (mean_for(k_hi) < target_mean_bytes) {
    k_hi *= 4.0;
    if (++guard > 40) {
      throw h2msim::FitError(
          "calibrate_sensitivity: target unreachable (all shifts zero?)");
    }
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (k_lo + k_hi);
    if (mean_for(mid) < target_mean_bytes) {
      k_lo = mid;
    } else {
      k_hi = mid;
    }
  }
  return 0.5 * (k_lo + k_hi);
}

std::string_view tier_name(Tier tier) {
  switch (tier) {
    case Tier::kFair:
      return "Fair";
    case Tier::kComfortable:
      return "Comfortable";
    case Tier::kIdeal:
      return "Ideal";
  }
  return "?";
}

const std::vector<ResolutionClass>& resolution_table() {
  static const std::vector<ResolutionClass> kTable = {
      {"2K", Tier::kFair, 40e6, 80e6, 20e-3, 60.0},
      {"4K", Tier::kComfortable, 90e6, 260e6, 15e-3, 60.0},
      {"8K", Tier::kIdeal, 360e6, 1e9, 8e-3, 60.0},
      {"16K", Tier::kIdeal, 440e6, 1.5e9, 8e-3, 60.0},
  };
  return kTable;
}

const ResolutionClass& resolution_class(std::string_view name) {
  for (const auto& row : resolution_table()) {
    if (row.name == name) return row;
  }
  throw h2msim::ConfigError("unknown resolution class: " + std::string(name));
}

QoeVerdict qoe_classify(const ResolutionClass& res, double mean_latency_s,
                        double per_stream_datarate_bps) {
  QoeVerdict v;
  v.latency_budget_s = res.max_latency_s;
  v.datarate_floor_bps = res.min_datarate_bps;
  v.latency_ok = mean_latency_s <= res.max_latency_s;
  v.datarate_ok = per_stream_datarate_bps >= res.min_datarate_bps;
  v.satisfied = v.latency_ok && v.datarate_ok;
  return v;
}

}  // namespace h2msim::xr
