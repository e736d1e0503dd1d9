#pragma once

#include <array>
#include <vector>

namespace h2msim::geo {

// Intrinsic Z-Y-X rotation: yaw about Z, then pitch about Y', then roll
// about X''. Degrees everywhere at the API surface.
struct EulerAngles {
  double yaw_deg = 0.0;    // [-180, 180]
  double pitch_deg = 0.0;  // [-90, 90]
  double roll_deg = 0.0;   // [-180, 180]
};

struct Quaternion {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Throws ValidationError when a component is outside its range.
void validate(const EulerAngles& e);

double dot(const Quaternion& a, const Quaternion& b);
double norm(const Quaternion& q);
Quaternion normalized(const Quaternion& q);
Quaternion conjugate(const Quaternion& q);
Quaternion multiply(const Quaternion& a, const Quaternion& b);

Quaternion euler_to_quaternion(const EulerAngles& e);

// Requires a unit quaternion (|norm - 1| <= 1e-9); pitch is clamped into
// [-90, 90] at the asin singularity.
EulerAngles quaternion_to_euler(const Quaternion& q);

// Shortest-arc rotation angle in degrees: 2*acos(|<q1,q2>|), the inner
// product clamped into [-1, 1]. q and -q are the same rotation, so the
// result is 0 for them. Both inputs must be unit quaternions.
double angular_distance_deg(const Quaternion& a, const Quaternion& b);

// Geodesic step of at most max_step_deg from `from` toward `to`
// (shortest arc). max_step_deg < 0 means unlimited.
Quaternion rotate_towards(const Quaternion& from, const Quaternion& to,
                          double max_step_deg);

// Shifts `next_deg` by a multiple of 360 so it lies within 180 of
// `prev_deg`; used to build continuous series for forecasting.
double unwrap_angle_deg(double prev_deg, double next_deg);

struct HeadSample {
  double t_s = 0.0;
  EulerAngles angles;
};

struct HeadTrace {
  std::vector<HeadSample> samples;
  double nominal_period_s = 0.015;
  // Set when any inter-sample gap deviates from the nominal period by
  // more than 50%; consumers treat the trace as non-uniform.
  bool uniform_rate_violated = false;
};

// Throws ValidationError on an empty trace, non-increasing timestamps,
// or out-of-range angles.
void validate(const HeadTrace& trace);

// Recomputes the uniform_rate_violated flag from the timestamps.
void refresh_rate_flag(HeadTrace& trace);

Quaternion orientation_at(const HeadTrace& trace, std::size_t index);

// Mean angular rate in deg/s: average over consecutive sample pairs of
// angular distance divided by the time gap. Needs at least two samples.
double average_speed_dps(const HeadTrace& trace);

inline constexpr std::array<double, 6> kSpeedBinsDps = {30.0, 60.0,  90.0,
                                                        120.0, 150.0, 180.0};

// Nearest bin, ties toward the slower bin, clamped at both ends.
double classify_speed_bin(double speed_dps);

}  // namespace h2msim::geo
