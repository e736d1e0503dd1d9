#include "h2msim/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "h2msim/errors.hpp"

namespace h2msim::traffic {
namespace {

// Zero-order hold over the trace, looping past the end.
const geo::HeadSample& sample_at_time(const geo::HeadTrace& trace, double t_s,
                                      bool& looped) {
  const auto& s = trace.samples;
  const double t0 = s.front().t_s;
  const double span = s.back().t_s - t0;
  double t = t_s;
  if (span <= 0.0) {
    if (t > t0) looped = true;
    return s.front();
  }
  if (t > s.back().t_s) {
    looped = true;
    t = t0 + std::fmod(t - t0, span);
  }
  auto it = std::upper_bound(
      s.begin(), s.end(), t,
      [](double value, const geo::HeadSample& hs) { return value < hs.t_s; });
  if (it == s.begin()) return s.front();
  return *(it - 1);
}

}  // namespace

std::vector<EthernetPacket> segment_frame(const XrFrame& frame,
                                          std::uint32_t mtu_payload,
                                          std::uint32_t source_id) {
  if (mtu_payload == 0 || mtu_payload > kMaxPayloadBytes) {
    throw ValidationError("segment_frame: mtu_payload must be in [1, 1500]");
  }
  std::vector<EthernetPacket> out;
  if (frame.total_bytes == 0) {
    out.push_back({source_id, frame.frame_id, kMinPayloadBytes,
                   frame.generation_time_s});
    return out;
  }
  const std::uint64_t full = frame.total_bytes / mtu_payload;
  const std::uint32_t rest =
      static_cast<std::uint32_t>(frame.total_bytes % mtu_payload);
  out.reserve(full + (rest ? 1 : 0));
  for (std::uint64_t i = 0; i < full; ++i) {
    out.push_back(
        {source_id, frame.frame_id, mtu_payload, frame.generation_time_s});
  }
  if (rest) {
    out.push_back({source_id, frame.frame_id, rest, frame.generation_time_s});
  }
  return out;
}

// ---------------------------------------------------------------------------

XrSource::XrSource(const XrSourceConfig& config, std::uint64_t seed,
                   std::uint64_t stream_id)
    : config_(config), rng_(seed, stream_id) {
  if (!(config_.mean_gap_s > 0.0)) {
    throw ValidationError("XrSource: mean_gap_s must be > 0");
  }
  if (config_.gap_variance_s2 < 0.0) {
    throw ValidationError("XrSource: gap variance must be >= 0");
  }
  if (!(config_.min_gap_s > 0.0) || config_.min_gap_s >= config_.mean_gap_s) {
    throw ValidationError("XrSource: min_gap_s must sit below the mean");
  }
  if (config_.mode == XrSourceConfig::SizeMode::kEmpiricalGamma) {
    if (!(config_.gamma_shape > 0.0) || !(config_.gamma_scale_kb > 0.0)) {
      throw ValidationError("XrSource: gamma parameters must be > 0");
    }
  } else {
    xr::validate(config_.spec);
    if (config_.floor_bytes < 0.0) {
      throw ValidationError("XrSource: floor_bytes must be >= 0");
    }
  }
}

XrArrival XrSource::next(double now_s, double theta_deg) {
  XrArrival a;
  a.frame.frame_id = next_frame_id_++;
  a.frame.generation_time_s = now_s;
  if (config_.mode == XrSourceConfig::SizeMode::kEmpiricalGamma) {
    const double kb = rng_.gamma(config_.gamma_shape, config_.gamma_scale_kb);
    a.frame.total_bytes =
        std::max<std::uint64_t>(1, std::llround(kb * 1024.0));
  } else {
    const double bytes = std::max(
        config_.floor_bytes, xr::effective_frame_bytes(config_.spec,
                                                       theta_deg));
    a.frame.total_bytes = std::max<std::uint64_t>(1, std::llround(bytes));
  }
  a.next_gap_s = rng_.normal_at_least(
      config_.mean_gap_s, std::sqrt(config_.gap_variance_s2),
      config_.min_gap_s);
  return a;
}

// ---------------------------------------------------------------------------

HmdSource::HmdSource(const HmdSourceConfig& config,
                     const geo::HeadTrace* trace, std::uint64_t seed,
                     std::uint64_t stream_id)
    : config_(config), trace_(trace), rng_(seed, stream_id) {
  if (!(config_.gamma_shape > 0.0) || !(config_.gamma_scale_ms > 0.0)) {
    throw ValidationError("HmdSource: gamma parameters must be > 0");
  }
  if (config_.payload_bytes == 0 ||
      config_.payload_bytes > kMaxPayloadBytes) {
    throw ValidationError("HmdSource: payload must be in [1, 1500]");
  }
  if (trace_) {
    geo::validate(*trace_);
  }
}

double HmdSource::mean_gap_s() const {
  return config_.gamma_shape * config_.gamma_scale_ms * 1e-3;
}

HmdArrival HmdSource::next(double now_s) {
  HmdArrival a;
  a.packet.frame_id = next_frame_id_++;
  a.packet.payload_bytes = config_.payload_bytes;
  a.packet.creation_time_s = now_s;
  if (trace_) {
    const geo::HeadSample& s = sample_at_time(*trace_, now_s, looped_);
    a.orientation = s.angles;
  }
  a.next_gap_s = config_.deterministic
                     ? mean_gap_s()
                     : rng_.gamma(config_.gamma_shape,
                                  config_.gamma_scale_ms) *
                           1e-3;
  return a;
}

// ---------------------------------------------------------------------------

BackgroundSource::BackgroundSource(const BackgroundConfig& config,
                                   std::uint64_t seed,
                                   std::uint64_t stream_id)
    : config_(config), rng_(seed, stream_id) {
  if (config_.load_fraction < 0.0 || config_.load_fraction >= 1.0) {
    throw ValidationError("BackgroundSource: load_fraction must be in [0, 1)");
  }
  if (!(config_.link_rate_bps > 0.0)) {
    throw ValidationError("BackgroundSource: link_rate_bps must be > 0");
  }
  if (config_.packet_bytes == 0 || config_.packet_bytes > kMaxPayloadBytes) {
    throw ValidationError("BackgroundSource: packet size must be in [1, 1500]");
  }
  if (config_.law == BackgroundConfig::GapLaw::kPareto &&
      config_.pareto_shape <= 1.0) {
    throw ValidationError(
        "BackgroundSource: Pareto shape must exceed 1 for a finite mean");
  }
}

double BackgroundSource::mean_gap_s() const {
  if (config_.load_fraction == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return config_.packet_bytes * 8.0 /
         (config_.load_fraction * config_.link_rate_bps);
}

std::optional<BackgroundArrival> BackgroundSource::next(double now_s) {
  if (config_.load_fraction == 0.0) {
    return std::nullopt;
  }
  BackgroundArrival a;
  a.packet.frame_id = next_frame_id_++;
  a.packet.payload_bytes = config_.packet_bytes;
  a.packet.creation_time_s = now_s;
  const double mean = mean_gap_s();
  if (config_.law == BackgroundConfig::GapLaw::kExponential) {
    a.next_gap_s = rng_.exponential(mean);
  } else {
    const double alpha = config_.pareto_shape;
    // Scale chosen so the Pareto mean alpha*x_m/(alpha-1) hits the target.
    const double x_m = mean * (alpha - 1.0) / alpha;
    a.next_gap_s = rng_.pareto(alpha, x_m);
  }
  return a;
}

}  // namespace h2msim::traffic
