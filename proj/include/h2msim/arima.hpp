#pragma once

#include <string>
#include <vector>

#include "h2msim/forecast.hpp"

namespace h2msim::forecast {

struct ArimaOrder {
  int p = 0;
  int d = 0;
  int q = 0;
};

struct ArimaModel {
  ArimaOrder order;
  std::vector<double> ar;   // p autoregressive coefficients
  std::vector<double> ma;   // q moving-average coefficients
  double intercept = 0.0;   // of the d-times differenced series
  double sigma2 = 0.0;      // innovation variance, degrees^2
  bool fitted = false;
};

struct ArimaFitOptions {
  int max_iterations = 200;
  // Converged when the gradient infinity-norm of the mean squared residual
  // drops below tolerance * (1 + objective).
  double tolerance = 1e-6;
};

// Conditional-least-squares fit: pre-sample residuals are pinned to zero and
// the summed squared one-step residuals are minimized.
ArimaModel fit_arima(const std::vector<double>& series, ArimaOrder order,
                     const ArimaFitOptions& options = {});

// One value horizon_samples steps past the end of req.history.
double predict_arima(const ArimaModel& model, const ForecastRequest& req);

// The full forecast path 1..horizon steps ahead, in original (undifferenced)
// units.
std::vector<double> forecast_path_arima(const ArimaModel& model,
                                        const std::vector<double>& history,
                                        int horizon);

// Residuals of the model's one-step recursion over a differenced series.
std::vector<double> arima_residuals(const ArimaModel& model,
                                    const std::vector<double>& differenced);

// Applies d rounds of first differencing.
std::vector<double> difference(const std::vector<double>& series, int d);

void save_arima(const ArimaModel& model, const std::string& path);
ArimaModel load_arima(const std::string& path);

}  // namespace h2msim::forecast
