#pragma once

#include <cstddef>
#include <vector>

namespace h2msim::forecast {

// One Euler component to predict. Yaw and roll span 360 degrees, pitch 180.
enum class Component { kYaw, kPitch, kRoll };

double component_range_deg(Component c);

// A forecasting request over a single unwrapped angle series sampled at a
// uniform period. The last history entry is "now"; the forecast target sits
// horizon_samples periods later.
struct ForecastRequest {
  std::vector<double> history;
  int horizon_samples = 1;
  double sample_period_s = 0.015;
};

void validate(const ForecastRequest& req);

// Rebuilds a continuous series from wrapped angles by shifting each sample
// within a half turn of its predecessor.
std::vector<double> unwrap_series(const std::vector<double>& wrapped_deg);

// Repeats the most recent observation.
double predict_persistence(const ForecastRequest& req);

// Mean of the trailing samples younger than window_s.
double predict_moving_average(const ForecastRequest& req, double window_s);

// Root-mean-square error normalized by the component's nominal range.
double nrmse(const std::vector<double>& predicted,
             const std::vector<double>& actual, Component c);

// Number of samples the camera lags the head: ceil(head/camera), at least 1.
int select_horizon(double head_speed_dps, double camera_speed_dps,
                   double sample_period_s);

}  // namespace h2msim::forecast
