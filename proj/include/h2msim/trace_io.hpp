#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "h2msim/geometry.hpp"

namespace h2msim::io {

// Canonical head-trace schema. Parsing tolerates spaces after the
// commas; writing never emits them.
inline constexpr char kTraceCsvHeader[] =
    "timestamp_ms,yaw_deg,pitch_deg,roll_deg";

// Parses a head trace. Malformed rows, out-of-range angles, and
// non-increasing timestamps raise ConfigError tagged "<name>:<line>".
// The nominal period is set to the median inter-sample gap.
geo::HeadTrace parse_head_trace(std::istream& in, const std::string& name);
geo::HeadTrace load_head_trace(const std::string& path);

// Writes %.17g columns so that export followed by import reproduces
// every sample bit for bit.
void save_head_trace(const geo::HeadTrace& trace, std::ostream& out);
void save_head_trace(const geo::HeadTrace& trace, const std::string& path);

// Random on-off head motion: still phases alternating with constant-
// direction swings, the usual shape of tracked VR head movement. The
// swing rate is rescaled until the trace-wide mean angular speed hits
// target_speed_dps, so generated traces land in the intended speed bin.
struct SyntheticTraceConfig {
  double target_speed_dps = 90.0;
  double duration_s = 60.0;
  double sample_period_s = 0.015;
  double mean_on_s = 0.5;
  double mean_off_s = 0.5;
  std::uint64_t seed = 1;
};

// Throws ValidationError on nonpositive durations/period or a negative
// speed target. A zero target yields a constant trace.
geo::HeadTrace synthesize_head_trace(const SyntheticTraceConfig& cfg);

}  // namespace h2msim::io
