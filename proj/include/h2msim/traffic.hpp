#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "h2msim/geometry.hpp"
#include "h2msim/sim/rng.hpp"
#include "h2msim/xr_model.hpp"

namespace h2msim::traffic {

inline constexpr std::uint32_t kMaxPayloadBytes = 1500;
inline constexpr std::uint32_t kMinPayloadBytes = 46;

struct EthernetPacket {
  std::uint32_t source_id = 0;
  std::uint64_t frame_id = 0;
  std::uint32_t payload_bytes = 0;
  double creation_time_s = 0.0;
};

struct XrFrame {
  std::uint64_t frame_id = 0;
  double generation_time_s = 0.0;
  std::uint64_t total_bytes = 0;
  int packet_count = 0;
};

// Splits a frame into MTU-sized packets; the last one carries the
// remainder. A zero-size frame still emits one minimum-size packet.
std::vector<EthernetPacket> segment_frame(const XrFrame& frame,
                                          std::uint32_t mtu_payload,
                                          std::uint32_t source_id = 0);

// ---------------------------------------------------------------------------
// XR video uplink: pseudo-periodic frames, sizes either from the measured
// Gamma fit or driven by the head's angular shift.

struct XrSourceConfig {
  double mean_gap_s = 33.13e-3;
  double gap_variance_s2 = 3.08e-6;  // STD 1.755 ms
  double min_gap_s = 1e-3;

  enum class SizeMode { kEmpiricalGamma, kHeadDriven };
  SizeMode mode = SizeMode::kEmpiricalGamma;

  // Empirical mode: frame size ~ Gamma(shape, scale) in KB (1 KB = 1024 B).
  double gamma_shape = 0.8839;
  double gamma_scale_kb = 33.6439;

  // Head-driven mode: saturation law applied to the per-frame shift, with a
  // keyframe floor.
  xr::FrameSpec spec;
  double floor_bytes = 0.0;
};

struct XrArrival {
  XrFrame frame;
  double next_gap_s = 0.0;
};

class XrSource {
 public:
  XrSource(const XrSourceConfig& config, std::uint64_t seed,
           std::uint64_t stream_id);

  // Head-driven mode reads theta_deg (the angular shift to render); the
  // empirical mode ignores it.
  XrArrival next(double now_s, double theta_deg = 0.0);

  const XrSourceConfig& config() const { return config_; }

 private:
  XrSourceConfig config_;
  sim::RngStream rng_;
  std::uint64_t next_frame_id_ = 0;
};

// ---------------------------------------------------------------------------
// HMD orientation uplink: small packets at a pseudo-periodic Gamma cadence,
// each carrying the head orientation at its creation time.

struct HmdSourceConfig {
  double gamma_shape = 51.844;
  double gamma_scale_ms = 0.273;  // mean 14.153 ms
  std::uint32_t payload_bytes = 64;
  bool deterministic = false;  // gap pinned to the distribution mean
};

struct HmdArrival {
  EthernetPacket packet;
  geo::EulerAngles orientation;
  double next_gap_s = 0.0;
};

class HmdSource {
 public:
  // trace may be null: the source then reports the identity orientation.
  HmdSource(const HmdSourceConfig& config, const geo::HeadTrace* trace,
            std::uint64_t seed, std::uint64_t stream_id);

  HmdArrival next(double now_s);

  // True once the cursor wrapped past the end of the trace.
  bool trace_looped() const { return looped_; }
  double mean_gap_s() const;

 private:
  HmdSourceConfig config_;
  const geo::HeadTrace* trace_;
  sim::RngStream rng_;
  std::uint64_t next_frame_id_ = 0;
  bool looped_ = false;
};

// ---------------------------------------------------------------------------
// Background best-effort load shaped to a fraction of the link rate.

struct BackgroundConfig {
  enum class GapLaw { kExponential, kPareto };
  GapLaw law = GapLaw::kExponential;
  double pareto_shape = 1.5;  // tail index, must exceed 1 for a finite mean
  std::uint32_t packet_bytes = 1500;
  double load_fraction = 0.0;  // of link_rate_bps, [0, 1)
  double link_rate_bps = 10e9;
};

struct BackgroundArrival {
  EthernetPacket packet;
  double next_gap_s = 0.0;
};

class BackgroundSource {
 public:
  BackgroundSource(const BackgroundConfig& config, std::uint64_t seed,
                   std::uint64_t stream_id);

  // Empty when the configured load is zero.
  std::optional<BackgroundArrival> next(double now_s);

  double mean_gap_s() const;

 private:
  BackgroundConfig config_;
  sim::RngStream rng_;
  std::uint64_t next_frame_id_ = 0;
};

}  // namespace h2msim::traffic
