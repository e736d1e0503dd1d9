#include "h2msim/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "h2msim/errors.hpp"
#include "h2msim/geometry.hpp"

namespace h2msim::forecast {

double component_range_deg(Component c) {
  switch (c) {
    case Component::kYaw:
    case Component::kRoll:
      return 360.0;
    case Component::kPitch:
      return 180.0;
  }
  throw ValidationError("component_range_deg: unknown component");
}

void validate(const ForecastRequest& req) {
  if (req.history.empty()) {
    throw ValidationError("ForecastRequest: history is empty");
  }
  if (req.horizon_samples < 1) {
    throw ValidationError("ForecastRequest: horizon_samples must be >= 1");
  }
  if (!(req.sample_period_s > 0.0)) {
    throw ValidationError("ForecastRequest: sample_period_s must be > 0");
  }
  for (double v : req.history) {
    if (!std::isfinite(v)) {
      throw ValidationError("ForecastRequest: non-finite history value");
    }
  }
}

std::vector<double> unwrap_series(const std::vector<double>& wrapped_deg) {
  std::vector<double> out;
  out.reserve(wrapped_deg.size());
  for (double v : wrapped_deg) {
    out.push_back(out.empty() ? v : geo::unwrap_angle_deg(out.back(), v));
  }
  return out;
}

double predict_persistence(const ForecastRequest& req) {
  validate(req);
  return req.history.back();
}

double predict_moving_average(const ForecastRequest& req, double window_s) {
  validate(req);
  if (!(window_s > 0.0)) {
    throw ValidationError("predict_moving_average: window must be > 0 s");
  }
  // Samples with age k*period strictly inside the window count.
  const double raw = window_s / req.sample_period_s;
  std::size_t n = static_cast<std::size_t>(std::ceil(raw - 1e-12));
  n = std::clamp<std::size_t>(n, 1, req.history.size());
  double sum = 0.0;
  for (std::size_t i = req.history.size() - n; i < req.history.size(); ++i) {
    sum += req.history[i];
  }
  return sum / static_cast<double>(n);
}

double nrmse(const std::vector<double>& predicted,
             const std::vector<double>& actual, Component c) {
  if (predicted.size() != actual.size()) {
    char msg[96];
    std::snprintf(msg, sizeof(msg), "nrmse: length mismatch (%zu vs %zu)",
                  predicted.size(), actual.size());
    throw ValidationError(msg);
  }
  if (predicted.empty()) {
    throw ValidationError("nrmse: empty sequences");
  }
  double sq = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double e = predicted[i] - actual[i];
    sq += e * e;
  }
  const double rmse = std::sqrt(sq / static_cast<double>(predicted.size()));
  return rmse / component_range_deg(c);
}

int select_horizon(double head_speed_dps, double camera_speed_dps,
                   double sample_period_s) {
  if (!(camera_speed_dps > 0.0)) {
    throw ValidationError("select_horizon: camera speed must be > 0");
  }
  if (!(sample_period_s > 0.0)) {
    throw ValidationError("select_horizon: sample period must be > 0");
  }
  if (head_speed_dps < 0.0) {
    throw ValidationError("select_horizon: head speed must be >= 0");
  }
  const int h =
      static_cast<int>(std::ceil(head_speed_dps / camera_speed_dps - 1e-12));
  return std::max(1, h);
}

}  // namespace h2msim::forecast
