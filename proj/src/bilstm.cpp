#include "h2msim/bilstm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numeric>

#include "h2msim/errors.hpp"
#include "h2msim/sim/rng.hpp"

namespace h2msim::forecast {
namespace {

using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;
using sim::RngStream;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Per-direction activations of one layer, indexed by time step.
struct DirectionCache {
  MatrixXd i, f, g, o;   // gate activations, hidden x window
  MatrixXd c, tc, h;     // cell state, tanh(cell), output
};

struct LayerCache {
  MatrixXd input;  // what this layer consumed (after any dropout)
  DirectionCache fwd, bwd;
  MatrixXd output;  // 2*hidden x window, fwd stacked over bwd
};

// Runs one direction across the window. backward_time flips the traversal
// order; outputs are still stored at their true time index.
void run_direction(const LstmDirection& p, const MatrixXd& x,
                   bool backward_time, DirectionCache& cache) {
  const int hidden = static_cast<int>(p.wh.rows()) / 4;
  const int window = static_cast<int>(x.cols());
  cache.i.resize(hidden, window);
  cache.f.resize(hidden, window);
  cache.g.resize(hidden, window);
  cache.o.resize(hidden, window);
  cache.c.resize(hidden, window);
  cache.tc.resize(hidden, window);
  cache.h.resize(hidden, window);

  VectorXd h = VectorXd::Zero(hidden);
  VectorXd c = VectorXd::Zero(hidden);
  for (int k = 0; k < window; ++k) {
    const int t = backward_time ? window - 1 - k : k;
    const VectorXd z = p.wx * x.col(t) + p.wh * h + p.b;
    for (int u = 0; u < hidden; ++u) {
      cache.i(u, t) = sigmoid(z(u));
      cache.f(u, t) = sigmoid(z(hidden + u));
      cache.g(u, t) = std::tanh(z(2 * hidden + u));
      cache.o(u, t) = sigmoid(z(3 * hidden + u));
    }
    c = cache.f.col(t).cwiseProduct(c) +
        cache.i.col(t).cwiseProduct(cache.g.col(t));
    cache.c.col(t) = c;
    cache.tc.col(t) = c.array().tanh().matrix();
    h = cache.o.col(t).cwiseProduct(cache.tc.col(t));
    cache.h.col(t) = h;
  }
}

// Backpropagates one direction. d_out carries gradients w.r.t. this
// direction's outputs per time step; dx accumulates input gradients.
void back_direction(const LstmDirection& p, const MatrixXd& x,
                    const DirectionCache& cache, bool backward_time,
                    const MatrixXd& d_out, LstmDirection& grad, MatrixXd& dx) {
  const int hidden = static_cast<int>(p.wh.rows()) / 4;
  const int window = static_cast<int>(x.cols());
  VectorXd dh_rec = VectorXd::Zero(hidden);
  VectorXd dc_rec = VectorXd::Zero(hidden);
  VectorXd dz(4 * hidden);
  for (int k = window - 1; k >= 0; --k) {
    const int t = backward_time ? window - 1 - k : k;
    const int t_prev = backward_time ? t + 1 : t - 1;
    const bool has_prev = k > 0;

    const VectorXd dh = d_out.col(t) + dh_rec;
    const VectorXd dov = dh.cwiseProduct(cache.tc.col(t));
    const VectorXd dc =
        dh.cwiseProduct(cache.o.col(t))
            .cwiseProduct((1.0 - cache.tc.col(t).array().square()).matrix()) +
        dc_rec;
    const VectorXd c_prev = has_prev ? VectorXd(cache.c.col(t_prev))
                                     : VectorXd(VectorXd::Zero(hidden));
    const VectorXd h_prev = has_prev ? VectorXd(cache.h.col(t_prev))
                                     : VectorXd(VectorXd::Zero(hidden));
    const VectorXd di = dc.cwiseProduct(cache.g.col(t));
    const VectorXd df = dc.cwiseProduct(c_prev);
    const VectorXd dg = dc.cwiseProduct(cache.i.col(t));

    for (int u = 0; u < hidden; ++u) {
      const double iv = cache.i(u, t);
      const double fv = cache.f(u, t);
      const double gv = cache.g(u, t);
      const double ov = cache.o(u, t);
      dz(u) = di(u) * iv * (1.0 - iv);
      dz(hidden + u) = df(u) * fv * (1.0 - fv);
      dz(2 * hidden + u) = dg(u) * (1.0 - gv * gv);
      dz(3 * hidden + u) = dov(u) * ov * (1.0 - ov);
    }

    grad.wx += dz * x.col(t).transpose();
    grad.wh += dz * h_prev.transpose();
    grad.b += dz;
    dx.col(t) += p.wx.transpose() * dz;
    dh_rec = p.wh.transpose() * dz;
    dc_rec = dc.cwiseProduct(cache.f.col(t));
  }
}

LstmDirection zero_like(const LstmDirection& p) {
  return {MatrixXd::Zero(p.wx.rows(), p.wx.cols()),
          MatrixXd::Zero(p.wh.rows(), p.wh.cols()),
          VectorXd::Zero(p.b.size())};
}

BiLstmParams zero_like(const BiLstmParams& p) {
  BiLstmParams z;
  z.layers.reserve(p.layers.size());
  for (const auto& l : p.layers) {
    z.layers.push_back({zero_like(l.fwd), zero_like(l.bwd)});
  }
  z.w_out = RowVectorXd::Zero(p.w_out.size());
  z.b_out = 0.0;
  return z;
}

// Forward pass through all layers for one sample. Returns the scalar output
// and fills the per-layer caches.
double forward_sample(const BiLstmConfig& cfg, const BiLstmParams& p,
                      const std::vector<double>& window,
                      const std::vector<Eigen::MatrixXd>* masks,
                      std::vector<LayerCache>& caches) {
  const int w = cfg.window;
  const int hidden = cfg.hidden;
  caches.resize(cfg.layers);

  MatrixXd x(1, w);
  for (int t = 0; t < w; ++t) x(0, t) = window[t];

  for (int l = 0; l < cfg.layers; ++l) {
    LayerCache& lc = caches[l];
    lc.input = x;
    run_direction(p.layers[l].fwd, lc.input, false, lc.fwd);
    run_direction(p.layers[l].bwd, lc.input, true, lc.bwd);
    lc.output.resize(2 * hidden, w);
    lc.output.topRows(hidden) = lc.fwd.h;
    lc.output.bottomRows(hidden) = lc.bwd.h;
    x = lc.output;
    if (masks && l + 1 < cfg.layers) {
      x = x.cwiseProduct((*masks)[l]);
    }
  }

  VectorXd feat(2 * hidden);
  feat.head(hidden) = caches.back().fwd.h.col(w - 1);
  feat.tail(hidden) = caches.back().bwd.h.col(0);
  return p.w_out * feat + p.b_out;
}

// Backward pass mirroring forward_sample; dy is dLoss/dOutput.
void backward_sample(const BiLstmConfig& cfg, const BiLstmParams& p,
                     const std::vector<Eigen::MatrixXd>* masks,
                     const std::vector<LayerCache>& caches, double dy,
                     BiLstmParams& grads) {
  const int w = cfg.window;
  const int hidden = cfg.hidden;

  VectorXd feat(2 * hidden);
  feat.head(hidden) = caches.back().fwd.h.col(w - 1);
  feat.tail(hidden) = caches.back().bwd.h.col(0);
  grads.w_out += dy * feat.transpose();
  grads.b_out += dy;

  const VectorXd dfeat = p.w_out.transpose() * dy;
  MatrixXd d_out = MatrixXd::Zero(2 * hidden, w);
  d_out.col(w - 1).head(hidden) += dfeat.head(hidden);
  d_out.col(0).tail(hidden) += dfeat.tail(hidden);

  for (int l = cfg.layers - 1; l >= 0; --l) {
    const LayerCache& lc = caches[l];
    MatrixXd dx = MatrixXd::Zero(lc.input.rows(), w);
    back_direction(p.layers[l].fwd, lc.input, lc.fwd, false,
                   d_out.topRows(hidden), grads.layers[l].fwd, dx);
    back_direction(p.layers[l].bwd, lc.input, lc.bwd, true,
                   d_out.bottomRows(hidden), grads.layers[l].bwd, dx);
    if (l > 0) {
      // dx is the gradient after the dropout that fed this layer.
      d_out = masks ? dx.cwiseProduct((*masks)[l - 1]) : dx;
    }
  }
}

double normalize(const BiLstmModel& m, double v) {
  return 2.0 * (v - m.norm_lo) / (m.norm_hi - m.norm_lo) - 1.0;
}

double denormalize(const BiLstmModel& m, double v) {
  return m.norm_lo + (v + 1.0) * (m.norm_hi - m.norm_lo) / 2.0;
}

double global_norm(const BiLstmParams& g) {
  double s = g.w_out.squaredNorm() + g.b_out * g.b_out;
  for (const auto& l : g.layers) {
    s += l.fwd.wx.squaredNorm() + l.fwd.wh.squaredNorm() +
         l.fwd.b.squaredNorm();
    s += l.bwd.wx.squaredNorm() + l.bwd.wh.squaredNorm() +
         l.bwd.b.squaredNorm();
  }
  return std::sqrt(s);
}

void scale_params(BiLstmParams& g, double k) {
  g.w_out *= k;
  g.b_out *= k;
  for (auto& l : g.layers) {
    l.fwd.wx *= k;
    l.fwd.wh *= k;
    l.fwd.b *= k;
    l.bwd.wx *= k;
    l.bwd.wh *= k;
    l.bwd.b *= k;
  }
}

void axpy_params(BiLstmParams& dst, const BiLstmParams& src, double k) {
  dst.w_out += k * src.w_out;
  dst.b_out += k * src.b_out;
  for (std::size_t l = 0; l < dst.layers.size(); ++l) {
    dst.layers[l].fwd.wx += k * src.layers[l].fwd.wx;
    dst.layers[l].fwd.wh += k * src.layers[l].fwd.wh;
    dst.layers[l].fwd.b += k * src.layers[l].fwd.b;
    dst.layers[l].bwd.wx += k * src.layers[l].bwd.wx;
    dst.layers[l].bwd.wh += k * src.layers[l].bwd.wh;
    dst.layers[l].bwd.b += k * src.layers[l].bwd.b;
  }
}

LstmDirection init_direction(int in, int hidden, RngStream& rng) {
  const double r = 1.0 / std::sqrt(static_cast<double>(hidden));
  LstmDirection d;
  d.wx.resize(4 * hidden, in);
  d.wh.resize(4 * hidden, hidden);
  d.b = VectorXd::Zero(4 * hidden);
  for (int row = 0; row < 4 * hidden; ++row) {
    for (int col = 0; col < in; ++col) d.wx(row, col) = rng.uniform(-r, r);
    for (int col = 0; col < hidden; ++col) d.wh(row, col) = rng.uniform(-r, r);
  }
  // Forget gates start open so early gradients reach across the window.
  d.b.segment(hidden, hidden).setOnes();
  return d;
}

nlohmann::json matrix_to_json(const MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

MatrixXd matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError("bilstm checkpoint: malformed matrix");
  }
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(j.at(0).size());
  MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j.at(r).size()) != cols) {
      throw ConfigError("bilstm checkpoint: ragged matrix");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = j.at(r).at(c).get<double>();
    }
  }
  return m;
}

nlohmann::json direction_to_json(const LstmDirection& d) {
  return {{"wx", matrix_to_json(d.wx)},
          {"wh", matrix_to_json(d.wh)},
          {"b", std::vector<double>(d.b.data(), d.b.data() + d.b.size())}};
}

LstmDirection direction_from_json(const nlohmann::json& j) {
  LstmDirection d;
  d.wx = matrix_from_json(j.at("wx"));
  d.wh = matrix_from_json(j.at("wh"));
  const auto bv = j.at("b").get<std::vector<double>>();
  d.b = Eigen::Map<const VectorXd>(bv.data(), bv.size());
  return d;
}

}  // namespace

void validate(const BiLstmConfig& c) {
  if (c.layers < 1) throw ValidationError("BiLstmConfig: layers must be >= 1");
  if (c.hidden < 1) throw ValidationError("BiLstmConfig: hidden must be >= 1");
  if (c.window < 2) throw ValidationError("BiLstmConfig: window must be >= 2");
  if (c.horizon_samples < 1) {
    throw ValidationError("BiLstmConfig: horizon_samples must be >= 1");
  }
  if (c.dropout < 0.0 || c.dropout >= 1.0) {
    throw ValidationError("BiLstmConfig: dropout must be in [0, 1)");
  }
  if (!(c.learning_rate > 0.0)) {
    throw ValidationError("BiLstmConfig: learning_rate must be > 0");
  }
  if (c.momentum < 0.0 || c.momentum >= 1.0) {
    throw ValidationError("BiLstmConfig: momentum must be in [0, 1)");
  }
  if (c.max_epochs < 1 || c.patience < 1 || c.batch_size < 1) {
    throw ValidationError("BiLstmConfig: epochs, patience, batch >= 1");
  }
  if (!(c.grad_clip > 0.0)) {
    throw ValidationError("BiLstmConfig: grad_clip must be > 0");
  }
  if (c.validation_fraction < 0.0 || c.validation_fraction >= 1.0) {
    throw ValidationError("BiLstmConfig: validation_fraction in [0, 1)");
  }
}

double bilstm_loss_and_gradients(const BiLstmModel& model,
                                 const std::vector<std::vector<double>>& windows,
                                 const std::vector<double>& targets,
                                 BiLstmParams* grads,
                                 const DropoutMasks* masks) {
  if (windows.size() != targets.size() || windows.empty()) {
    throw ValidationError("bilstm_loss_and_gradients: batch size mismatch");
  }
  const BiLstmConfig& cfg = model.config;
  if (grads) *grads = zero_like(model.params);

  double loss = 0.0;
  const double inv_b = 1.0 / static_cast<double>(windows.size());
  std::vector<LayerCache> caches;
  for (std::size_t s = 0; s < windows.size(); ++s) {
    if (static_cast<int>(windows[s].size()) != cfg.window) {
      throw ValidationError("bilstm_loss_and_gradients: wrong window length");
    }
    const std::vector<Eigen::MatrixXd>* sample_masks =
        masks ? &(*masks)[s] : nullptr;
    const double y =
        forward_sample(cfg, model.params, windows[s], sample_masks, caches);
    const double err = y - targets[s];
    loss += err * err * inv_b;
    if (grads) {
      backward_sample(cfg, model.params, sample_masks, caches,
                      2.0 * err * inv_b, *grads);
    }
  }
  return loss;
}

double bilstm_forward_normalized(const BiLstmModel& model,
                                 const std::vector<double>& window) {
  if (static_cast<int>(window.size()) != model.config.window) {
    throw ValidationError("bilstm_forward_normalized: wrong window length");
  }
  std::vector<LayerCache> caches;
  return forward_sample(model.config, model.params, window, nullptr, caches);
}

BiLstmModel train_bilstm(const std::vector<std::vector<double>>& series_set,
                         const BiLstmConfig& config) {
  validate(config);
  if (series_set.empty()) {
    throw ValidationError("train_bilstm: no training series");
  }

  // Assemble (window, target) pairs across all series.
  std::vector<std::vector<double>> windows;
  std::vector<double> targets;
  const int w = config.window;
  const int h = config.horizon_samples;
  double lo = 1e300;
  double hi = -1e300;
  for (const auto& series : series_set) {
    const int n = static_cast<int>(series.size());
    for (int t = w - 1; t + h < n; ++t) {
      windows.emplace_back(series.begin() + (t - w + 1),
                           series.begin() + t + 1);
      targets.push_back(series[t + h]);
      lo = std::min(lo, *std::min_element(windows.back().begin(),
                                          windows.back().end()));
      lo = std::min(lo, targets.back());
      hi = std::max(hi, *std::max_element(windows.back().begin(),
                                          windows.back().end()));
      hi = std::max(hi, targets.back());
    }
  }
  if (windows.empty()) {
    throw ValidationError("train_bilstm: series shorter than window + horizon");
  }
  if (!(hi > lo)) hi = lo + 1.0;

  BiLstmModel model;
  model.config = config;
  model.norm_lo = lo;
  model.norm_hi = hi;
  for (auto& win : windows) {
    for (double& v : win) v = normalize(model, v);
  }
  for (double& v : targets) v = normalize(model, v);

  RngStream rng(config.seed, 101);
  model.params.layers.clear();
  for (int l = 0; l < config.layers; ++l) {
    const int in = l == 0 ? 1 : 2 * config.hidden;
    model.params.layers.push_back({init_direction(in, config.hidden, rng),
                                   init_direction(in, config.hidden, rng)});
  }
  model.params.w_out = RowVectorXd::Zero(2 * config.hidden);
  const double r = 1.0 / std::sqrt(2.0 * config.hidden);
  for (int i = 0; i < 2 * config.hidden; ++i) {
    model.params.w_out(i) = rng.uniform(-r, r);
  }
  model.params.b_out = 0.0;

  // Shuffled split into train and validation.
  std::vector<std::size_t> order(windows.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    const std::size_t j = rng.next_u64() % (i + 1);
    std::swap(order[i], order[j]);
  }
  const std::size_t n_val = static_cast<std::size_t>(
      config.validation_fraction * static_cast<double>(order.size()));
  std::vector<std::size_t> train_idx(order.begin(), order.end() - n_val);
  std::vector<std::size_t> val_idx(order.end() - n_val, order.end());

  std::vector<std::vector<double>> val_w;
  std::vector<double> val_t;
  for (std::size_t i : val_idx) {
    val_w.push_back(windows[i]);
    val_t.push_back(targets[i]);
  }

  BiLstmParams velocity = zero_like(model.params);
  BiLstmParams grads;
  BiLstmParams best = model.params;
  double best_val = 1e300;
  int stale_epochs = 0;

  std::vector<std::vector<double>> batch_w;
  std::vector<double> batch_t;
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    for (std::size_t i = train_idx.size() - 1; i > 0; --i) {
      const std::size_t j = rng.next_u64() % (i + 1);
      std::swap(train_idx[i], train_idx[j]);
    }

    double epoch_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t at = 0; at < train_idx.size();
         at += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end = std::min(
          at + static_cast<std::size_t>(config.batch_size), train_idx.size());
      batch_w.clear();
      batch_t.clear();
      for (std::size_t i = at; i < end; ++i) {
        batch_w.push_back(windows[train_idx[i]]);
        batch_t.push_back(targets[train_idx[i]]);
      }

      DropoutMasks masks;
      const DropoutMasks* masks_ptr = nullptr;
      if (config.dropout > 0.0 && config.layers > 1) {
        const double keep = 1.0 - config.dropout;
        masks.resize(batch_w.size());
        for (auto& per_sample : masks) {
          per_sample.resize(config.layers - 1);
          for (auto& mask : per_sample) {
            mask.resize(2 * config.hidden, config.window);
            for (Eigen::Index rr = 0; rr < mask.rows(); ++rr) {
              for (Eigen::Index cc = 0; cc < mask.cols(); ++cc) {
                mask(rr, cc) = rng.uniform01() < keep ? 1.0 / keep : 0.0;
              }
            }
          }
        }
        masks_ptr = &masks;
      }

      const double loss =
          bilstm_loss_and_gradients(model, batch_w, batch_t, &grads, masks_ptr);
      if (!std::isfinite(loss)) {
        throw FitError(
            "train_bilstm: loss diverged; reduce the learning rate");
      }
      epoch_loss += loss;
      ++batches;

      const double gnorm = global_norm(grads);
      if (gnorm > config.grad_clip) {
        scale_params(grads, config.grad_clip / gnorm);
      }
      scale_params(velocity, config.momentum);
      axpy_params(velocity, grads, -config.learning_rate);
      axpy_params(model.params, velocity, 1.0);
    }

    const double monitored =
        val_w.empty()
            ? epoch_loss / static_cast<double>(std::max<std::size_t>(1, batches))
            : bilstm_loss_and_gradients(model, val_w, val_t, nullptr);
    if (monitored < best_val - 1e-12) {
      best_val = monitored;
      best = model.params;
      stale_epochs = 0;
    } else if (++stale_epochs >= config.patience) {
      break;
    }
  }

  model.params = best;
  model.fitted = true;
  return model;
}

double predict_bilstm(const BiLstmModel& model, const ForecastRequest& req) {
  if (!model.fitted) {
    throw ValidationError("predict_bilstm: model is not fitted");
  }
  validate(req);
  const int w = model.config.window;
  if (static_cast<int>(req.history.size()) < w) {
    char msg[96];
    std::snprintf(msg, sizeof(msg),
                  "predict_bilstm: need %d history samples, got %zu", w,
                  req.history.size());
    throw ValidationError(msg);
  }
  std::vector<double> window(req.history.end() - w, req.history.end());
  for (double& v : window) v = normalize(model, v);
  return denormalize(model, bilstm_forward_normalized(model, window));
}

void save_bilstm(const BiLstmModel& model, const std::string& path) {
  if (!model.fitted) {
    throw ValidationError("save_bilstm: model is not fitted");
  }
  nlohmann::json j;
  j["format"] = "bilstm/1";
  j["config"] = {{"layers", model.config.layers},
                 {"hidden", model.config.hidden},
                 {"window", model.config.window},
                 {"horizon_samples", model.config.horizon_samples},
                 {"dropout", model.config.dropout},
                 {"learning_rate", model.config.learning_rate},
                 {"momentum", model.config.momentum},
                 {"max_epochs", model.config.max_epochs},
                 {"patience", model.config.patience},
                 {"batch_size", model.config.batch_size},
                 {"grad_clip", model.config.grad_clip},
                 {"validation_fraction", model.config.validation_fraction},
                 {"seed", model.config.seed}};
  j["norm_lo"] = model.norm_lo;
  j["norm_hi"] = model.norm_hi;
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : model.params.layers) {
    layers.push_back({{"fwd", direction_to_json(l.fwd)},
                      {"bwd", direction_to_json(l.bwd)}});
  }
  j["layers"] = std::move(layers);
  j["w_out"] = std::vector<double>(
      model.params.w_out.data(),
      model.params.w_out.data() + model.params.w_out.size());
  j["b_out"] = model.params.b_out;

  std::ofstream out(path);
  if (!out) {
    throw ConfigError("save_bilstm: cannot open " + path);
  }
  out << j.dump() << "\n";
}

BiLstmModel load_bilstm(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("load_bilstm: cannot open " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("load_bilstm: " + std::string(e.what()));
  }
  if (j.value("format", "") != "bilstm/1") {
    throw ConfigError("load_bilstm: unsupported checkpoint format");
  }
  BiLstmModel m;
  try {
    const auto& c = j.at("config");
    m.config.layers = c.at("layers").get<int>();
    m.config.hidden = c.at("hidden").get<int>();
    m.config.window = c.at("window").get<int>();
    m.config.horizon_samples = c.at("horizon_samples").get<int>();
    m.config.dropout = c.at("dropout").get<double>();
    m.config.learning_rate = c.at("learning_rate").get<double>();
    m.config.momentum = c.at("momentum").get<double>();
    m.config.max_epochs = c.at("max_epochs").get<int>();
    m.config.patience = c.at("patience").get<int>();
    m.config.batch_size = c.at("batch_size").get<int>();
    m.config.grad_clip = c.at("grad_clip").get<double>();
    m.config.validation_fraction = c.at("validation_fraction").get<double>();
    m.config.seed = c.at("seed").get<std::uint64_t>();
    m.norm_lo = j.at("norm_lo").get<double>();
    m.norm_hi = j.at("norm_hi").get<double>();
    for (const auto& l : j.at("layers")) {
      m.params.layers.push_back({direction_from_json(l.at("fwd")),
                                 direction_from_json(l.at("bwd"))});
    }
    const auto wv = j.at("w_out").get<std::vector<double>>();
    m.params.w_out = Eigen::Map<const RowVectorXd>(wv.data(), wv.size());
    m.params.b_out = j.at("b_out").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("load_bilstm: " + std::string(e.what()));
  }
  validate(m.config);
  if (static_cast<int>(m.params.layers.size()) != m.config.layers) {
    throw ConfigError("load_bilstm: layer count disagrees with config");
  }
  for (int l = 0; l < m.config.layers; ++l) {
    const int in = l == 0 ? 1 : 2 * m.config.hidden;
    const auto& layer = m.params.layers[l];
    for (const LstmDirection* d : {&layer.fwd, &layer.bwd}) {
      if (d->wx.rows() != 4 * m.config.hidden || d->wx.cols() != in ||
          d->wh.rows() != 4 * m.config.hidden ||
          d->wh.cols() != m.config.hidden ||
          d->b.size() != 4 * m.config.hidden) {
        throw ConfigError("load_bilstm: weight shapes disagree with config");
      }
    }
  }
  if (m.params.w_out.size() != 2 * m.config.hidden) {
    throw ConfigError("load_bilstm: output head shape disagrees with config");
  }
  m.fitted = true;
  return m;
}

}  // namespace h2msim::forecast
