#include "h2msim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "h2msim/errors.hpp"

namespace h2msim::geo {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kUnitNormTol = 1e-9;

double clamp1(double v) { return std::clamp(v, -1.0, 1.0); }

void require_unit(const Quaternion& q, const char* where) {
  if (std::abs(norm(q) - 1.0) > kUnitNormTol) {
    throw h2msim::ValidationError(std::string(where) +
                                  ": quaternion is not unit length");
  }
}

}  // namespace

void validate(const EulerAngles& e) {
  auto check = [](double v, double lo, double hi, const char* name) {
    if (!(v >= lo && v <= hi)) {
      throw h2msim::ValidationError(std::string("EulerAngles: ") + name + " " +
                                    std::to_string(v) + " outside [" +
                                    std::to_string(lo) + ", " +
                                    std::to_string(hi) + "]");
    }
  };
  check(e.yaw_deg, -180.0, 180.0, "yaw");
  check(e.pitch_deg, -90.0, 90.0, "pitch");
  check(e.roll_deg, -180.0, 180.0, "roll");
}

double dot(const Quaternion& a, const Quaternion& b) {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

double norm(const Quaternion& q) { return std::sqrt(dot(q, q)); }

Quaternion normalized(const Quaternion& q) {
  const double n = norm(q);
  if (n <= 0.0) {
    throw h2msim::ValidationError("normalized: zero quaternion");
  }
  return {q.w / n, q.x / n, q.y / n, q.z / n};
}

Quaternion conjugate(const Quaternion& q) { return {q.w, -q.x, -q.y, -q.z}; }

Quaternion multiply(const Quaternion& a, const Quaternion& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

Quaternion euler_to_quaternion(const EulerAngles& e) {
  validate(e);
  const double hy = 0.5 * e.yaw_deg * kDegToRad;
  const double hp = 0.5 * e.pitch_deg * kDegToRad;
  const double hr = 0.5 * e.roll_deg * kDegToRad;
  const double cy = std::cos(hy), sy = std::sin(hy);
  const double cp = std::cos(hp), sp = std::sin(hp);
  const double cr = std::cos(hr), sr = std::sin(hr);
  return {cy * cp * cr + sy * sp * sr, cy * cp * sr - sy * sp * cr,
          cy * sp * cr + sy * cp * sr, sy * cp * cr - cy * sp * sr};
}

EulerAngles quaternion_to_euler(const Quaternion& q_in) {
  require_unit(q_in, "quaternion_to_euler");
  const Quaternion q = normalized(q_in);
  EulerAngles e;
  e.pitch_deg = std::asin(clamp1(2.0 * (q.w * q.y - q.z * q.x))) * kRadToDeg;
  e.yaw_deg = std::atan2(2.0 * (q.w * q.z + q.x * q.y),
                         1.0 - 2.0 * (q.y * q.y + q.z * q.z)) *
              kRadToDeg;
  e.roll_deg = std::atan2(2.0 * (q.w * q.x + q.y * q.z),
                          1.0 - 2.0 * (q.x * q.x + q.y * q.y)) *
               kRadToDeg;
  return e;
}

double angular_distance_deg(const Quaternion& a, const Quaternion& b) {
  require_unit(a, "angular_distance");
  require_unit(b, "angular_distance");
  return 2.0 * std::acos(clamp1(std::abs(dot(a, b)))) * kRadToDeg;
}

Quaternion rotate_towards(const Quaternion& from, const Quaternion& to,
                          double max_step_deg) {
  require_unit(from, "rotate_towards");
  require_unit(to, "rotate_towards");
  Quaternion target = to;
  double d = dot(from, target);
  if (d < 0.0) {
    target = {-target.w, -target.x, -target.y, -target.z};
    d = -d;
  }
  const double theta_deg = 2.0 * std::acos(clamp1(d)) * kRadToDeg;
  if (max_step_deg < 0.0 || theta_deg <= max_step_deg || theta_deg == 0.0) {
    return target;
  }
  const double f = max_step_deg / theta_deg;
  const double omega = std::acos(clamp1(d));
  const double so = std::sin(omega);
  Quaternion out;
  if (so < 1e-9) {
    out = {from.w + f * (target.w - from.w), from.x + f * (target.x - from.x),
           from.y + f * (target.y - from.y), from.z + f * (target.z - from.z)};
  } else {
    const double wa = std::sin((1.0 - f) * omega) / so;
    const double wb = std::sin(f * omega) / so;
    out = {wa * from.w + wb * target.w, wa * from.x + wb * target.x,
           wa * from.y + wb * target.y, wa * from.z + wb * target.z};
  }
  return normalized(out);
}

double unwrap_angle_deg(double prev_deg, double next_deg) {
  double v = next_deg;
  while (v - prev_deg > 180.0) v -= 360.0;
  while (v - prev_deg < -180.0) v += 360.0;
  return v;
}

void validate(const HeadTrace& trace) {
  if (trace.samples.empty()) {
    throw h2msim::ValidationError("HeadTrace: empty trace");
  }
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    validate(trace.samples[i].angles);
    if (i > 0 && !(trace.samples[i].t_s > trace.samples[i - 1].t_s)) {
      throw h2msim::ValidationError(
          "HeadTrace: timestamps not strictly increasing at sample " +
          std::to_string(i));
    }
  }
}

void refresh_rate_flag(HeadTrace& trace) {
  trace.uniform_rate_violated = false;
  for (std::size_t i = 1; i < trace.samples.size(); ++i) {
    const double gap = trace.samples[i].t_s - trace.samples[i - 1].t_s;
    if (std::abs(gap - trace.nominal_period_s) > 0.5 * trace.nominal_period_s) {
      trace.uniform_rate_violated = true;
      return;
    }
  }
}

Quaternion orientation_at(const HeadTrace& trace, std::size_t index) {
  return euler_to_quaternion(trace.samples.at(index).angles);
}

double average_speed_dps(const HeadTrace& trace) {
  validate(trace);
  if (trace.samples.size() < 2) {
    throw h2msim::ValidationError("average_speed: needs at least two samples");
  }
  double acc = 0.0;
  Quaternion prev = orientation_at(trace, 0);
  for (std::size_t i = 1; i < trace.samples.size(); ++i) {
    const Quaternion cur = orientation_at(trace, i);
    const double dt = trace.samples[i].t_s - trace.samples[i - 1].t_s;
    acc += angular_distance_deg(prev, cur) / dt;
    prev = cur;
  }
  return acc / static_cast<double>(trace.samples.size() - 1);
}

double classify_speed_bin(double speed_dps) {
  double best = kSpeedBinsDps.front();
  double best_gap = std::abs(speed_dps - best);
  for (double bin : kSpeedBinsDps) {
    const double gap = std::abs(speed_dps - bin);
    if (gap < best_gap) {  // strict: ties keep the slower bin
      best = bin;
      best_gap = gap;
    }
  }
  return best;
}

}  // namespace h2msim::geo
