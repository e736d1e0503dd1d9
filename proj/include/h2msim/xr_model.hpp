#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace h2msim::xr {

// Camera/encoder description behind the frame-size model. color_depth is
// the encoder byte budget per pixel, so raw_frame_bytes() is the ceiling
// an all-new frame (no inter-frame correlation) would occupy.
struct FrameSpec {
  double width_px = 640.0;
  double height_px = 480.0;
  double color_depth_bytes = 0.25;
  double fov_deg = 90.0;
  double frame_rate_fps = 30.0;
  double sensitivity_k = 1e-5;  // saturation constant applied to the pixel shift

  double pixels() const { return width_px * height_px; }
  double raw_frame_bytes() const { return pixels() * color_depth_bytes; }
  double raw_datarate_Bps() const { return raw_frame_bytes() * frame_rate_fps; }
};

// Throws ValidationError unless every field is positive.
void validate(const FrameSpec& spec);

// Content shift proxy in pixels for an angular shift theta:
// pixels * theta / fov.
double pixel_shift_px(const FrameSpec& spec, double theta_deg);

// Saturating inter-frame model: raw datarate scaled by
// (1 - exp(-k * pixel_shift)). 0 at theta = 0, asymptotically the raw
// datarate for large shifts.
double effective_datarate_Bps(const FrameSpec& spec, double theta_deg);

// effective_datarate / frame rate.
double effective_frame_bytes(const FrameSpec& spec, double theta_deg);

// Per-frame byte demand when a total angular shift is executed over a
// prediction horizon instead of within one frame: the camera runs at
// min(camera_speed, theta_total/horizon), so per-frame shifts (and
// sizes) shrink while the shift total is conserved. horizon must be at
// least one frame period.
std::vector<double> horizon_spread_demand(const FrameSpec& spec,
                                          double theta_total_deg,
                                          double horizon_s,
                                          double camera_speed_dps,
                                          double frame_period_s);

// Finds sensitivity_k such that the mean of
// max(floor_bytes, effective_frame_bytes(theta_i)) over the given
// per-frame shift sequence hits target_mean_bytes. Bisection; throws
// FitError when the target is outside the attainable range.
double calibrate_sensitivity(FrameSpec spec,
                             const std::vector<double>& per_frame_theta_deg,
                             double target_mean_bytes, double floor_bytes);

enum class Tier { kFair, kComfortable, kIdeal };

std::string_view tier_name(Tier tier);

// One row of the quality-tier table: minimum per-stream datarate,
// minimum access bandwidth, and the inter-frame latency budget that the
// tier tolerates.
struct ResolutionClass {
  std::string name;
  Tier tier = Tier::kFair;
  double min_datarate_bps = 0.0;
  double min_bandwidth_bps = 0.0;
  double max_latency_s = 0.0;
  double frame_rate_fps = 60.0;
};

const std::vector<ResolutionClass>& resolution_table();

// Lookup by name ("2K", "4K", "8K", "16K"); throws ConfigError.
const ResolutionClass& resolution_class(std::string_view name);

struct QoeVerdict {
  bool latency_ok = false;
  bool datarate_ok = false;
  bool satisfied = false;
  double latency_budget_s = 0.0;
  double datarate_floor_bps = 0.0;
};

// Both bounds inclusive: latency == budget and datarate == floor pass.
QoeVerdict qoe_classify(const ResolutionClass& res, double mean_latency_s,
                        double per_stream_datarate_bps);

}  // namespace h2msim::xr
