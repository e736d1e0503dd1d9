#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "h2msim/forecast.hpp"

namespace h2msim::forecast {

struct BiLstmConfig {
  int layers = 1;
  int hidden = 32;
  int window = 6;
  int horizon_samples = 6;
  double dropout = 0.0;  // applied between stacked layers, training only
  double learning_rate = 0.01;
  double momentum = 0.9;
  int max_epochs = 50;
  int patience = 5;  // epochs without validation improvement before stopping
  int batch_size = 64;
  double grad_clip = 5.0;  // global gradient norm ceiling
  double validation_fraction = 0.2;
  std::uint64_t seed = 1;
};

void validate(const BiLstmConfig& config);

// One recurrent direction: gate order [input, forget, cell, output] stacked
// row-wise, so wx is (4*hidden x in) and wh is (4*hidden x hidden).
struct LstmDirection {
  Eigen::MatrixXd wx;
  Eigen::MatrixXd wh;
  Eigen::VectorXd b;
};

struct LstmLayer {
  LstmDirection fwd;
  LstmDirection bwd;
};

// Full parameter set; also reused as the gradient container since the
// shapes coincide.
struct BiLstmParams {
  std::vector<LstmLayer> layers;
  Eigen::RowVectorXd w_out;
  double b_out = 0.0;
};

struct BiLstmModel {
  BiLstmConfig config;
  BiLstmParams params;
  // Angles map linearly from [norm_lo, norm_hi] onto [-1, 1].
  double norm_lo = -1.0;
  double norm_hi = 1.0;
  bool fitted = false;
};

// Mean squared error over a batch of already-normalized windows, plus
// parameter gradients when grads is non-null. Dropout masks (one matrix of
// keep-scales per inter-layer boundary per sample) are optional.
using DropoutMasks = std::vector<std::vector<Eigen::MatrixXd>>;
double bilstm_loss_and_gradients(const BiLstmModel& model,
                                 const std::vector<std::vector<double>>& windows,
                                 const std::vector<double>& targets,
                                 BiLstmParams* grads,
                                 const DropoutMasks* masks = nullptr);

// Deterministic inference on one normalized window.
double bilstm_forward_normalized(const BiLstmModel& model,
                                 const std::vector<double>& window);

// Trains one model per angle component on a set of unwrapped degree series.
BiLstmModel train_bilstm(const std::vector<std::vector<double>>& series_set,
                         const BiLstmConfig& config);

// Forecast horizon_samples past the end of req.history (degrees).
double predict_bilstm(const BiLstmModel& model, const ForecastRequest& req);

void save_bilstm(const BiLstmModel& model, const std::string& path);
BiLstmModel load_bilstm(const std::string& path);

}  // namespace h2msim::forecast
