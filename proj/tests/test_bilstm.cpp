#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <vector>

#include "h2msim/bilstm.hpp"
#include "h2msim/errors.hpp"
#include "h2msim/forecast.hpp"
#include "h2msim/sim/rng.hpp"

using namespace h2msim::forecast;
using h2msim::ConfigError;
using h2msim::ValidationError;
using h2msim::sim::RngStream;

namespace {

BiLstmModel random_model(int layers, int hidden, int window, uint64_t seed) {
  BiLstmModel m;
  m.config.layers = layers;
  m.config.hidden = hidden;
  m.config.window = window;
  m.config.dropout = 0.0;
  m.norm_lo = -1.0;
  m.norm_hi = 1.0;
  RngStream rng(seed, 55);
  for (int l = 0; l < layers; ++l) {
    const int in = l == 0 ? 1 : 2 * hidden;
    LstmLayer layer;
    for (LstmDirection* d : {&layer.fwd, &layer.bwd}) {
      d->wx.resize(4 * hidden, in);
      d->wh.resize(4 * hidden, hidden);
      d->b.resize(4 * hidden);
      for (int r = 0; r < 4 * hidden; ++r) {
        for (int c = 0; c < in; ++c) d->wx(r, c) = rng.uniform(-0.6, 0.6);
        for (int c = 0; c < hidden; ++c) d->wh(r, c) = rng.uniform(-0.6, 0.6);
        d->b(r) = rng.uniform(-0.3, 0.3);
      }
    }
    m.params.layers.push_back(layer);
  }
  m.params.w_out.resize(2 * hidden);
  for (int i = 0; i < 2 * hidden; ++i) {
    m.params.w_out(i) = rng.uniform(-0.6, 0.6);
  }
  m.params.b_out = rng.uniform(-0.3, 0.3);
  m.fitted = true;
  return m;
}

// Enumerates every trainable scalar in a parameter set, in a fixed order.
std::vector<double*> all_params(BiLstmParams& p) {
  std::vector<double*> out;
  for (auto& l : p.layers) {
    for (LstmDirection* d : {&l.fwd, &l.bwd}) {
      for (Eigen::Index i = 0; i < d->wx.size(); ++i) {
        out.push_back(d->wx.data() + i);
      }
      for (Eigen::Index i = 0; i < d->wh.size(); ++i) {
        out.push_back(d->wh.data() + i);
      }
      for (Eigen::Index i = 0; i < d->b.size(); ++i) {
        out.push_back(d->b.data() + i);
      }
    }
  }
  for (Eigen::Index i = 0; i < p.w_out.size(); ++i) {
    out.push_back(p.w_out.data() + i);
  }
  out.push_back(&p.b_out);
  return out;
}

double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Plain-loop single-layer bidirectional forward pass, independent of the
// library's matrix formulation.
double loop_forward(const BiLstmModel& m, const std::vector<double>& win) {
  const int hidden = m.config.hidden;
  const int w = m.config.window;
  auto run = [&](const LstmDirection& d, bool reversed) {
    std::vector<std::vector<double>> hs(w, std::vector<double>(hidden));
    std::vector<double> h(hidden, 0.0), c(hidden, 0.0);
    for (int k = 0; k < w; ++k) {
      const int t = reversed ? w - 1 - k : k;
      std::vector<double> z(4 * hidden);
      for (int r = 0; r < 4 * hidden; ++r) {
        double acc = d.b(r) + d.wx(r, 0) * win[t];
        for (int u = 0; u < hidden; ++u) acc += d.wh(r, u) * h[u];
        z[r] = acc;
      }
      for (int u = 0; u < hidden; ++u) {
        const double iv = sig(z[u]);
        const double fv = sig(z[hidden + u]);
        const double gv = std::tanh(z[2 * hidden + u]);
        const double ov = sig(z[3 * hidden + u]);
        c[u] = fv * c[u] + iv * gv;
        h[u] = ov * std::tanh(c[u]);
      }
      hs[t] = h;
    }
    return hs;
  };
  const auto fwd = run(m.params.layers[0].fwd, false);
  const auto bwd = run(m.params.layers[0].bwd, true);
  double y = m.params.b_out;
  for (int u = 0; u < hidden; ++u) {
    y += m.params.w_out(u) * fwd[w - 1][u];
    y += m.params.w_out(hidden + u) * bwd[0][u];
  }
  return y;
}

}  // namespace

TEST_CASE("loss gradients match central finite differences") {
  // Two stacked layers of two hidden units exercise every gradient path.
  BiLstmModel m = random_model(2, 2, 3, 99);
  RngStream rng(7, 8);
  std::vector<std::vector<double>> windows;
  std::vector<double> targets;
  for (int s = 0; s < 4; ++s) {
    windows.push_back({rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                       rng.uniform(-1.0, 1.0)});
    targets.push_back(rng.uniform(-1.0, 1.0));
  }

  BiLstmParams grads;
  bilstm_loss_and_gradients(m, windows, targets, &grads);

  auto params = all_params(m.params);
  auto grad_view = all_params(grads);
  REQUIRE(params.size() == grad_view.size());

  double worst = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = *params[i];
    const double h = 1e-5 * std::max(1.0, std::fabs(saved));
    *params[i] = saved + h;
    const double fp = bilstm_loss_and_gradients(m, windows, targets, nullptr);
    *params[i] = saved - h;
    const double fm = bilstm_loss_and_gradients(m, windows, targets, nullptr);
    *params[i] = saved;
    const double numeric = (fp - fm) / (2.0 * h);
    const double analytic = *grad_view[i];
    const double rel = std::fabs(analytic - numeric) /
                       std::max({std::fabs(analytic), std::fabs(numeric), 1e-6});
    worst = std::max(worst, rel);
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("gradients under dropout masks match finite differences") {
  BiLstmModel m = random_model(2, 2, 3, 17);
  RngStream rng(3, 9);
  std::vector<std::vector<double>> windows{{0.2, -0.4, 0.9}, {-0.8, 0.1, 0.3}};
  std::vector<double> targets{0.5, -0.2};
  // Fixed masks: dropping two units, keep-scale 1/0.7 elsewhere.
  DropoutMasks masks(2);
  for (auto& per_sample : masks) {
    per_sample.assign(1, Eigen::MatrixXd::Constant(4, 3, 1.0 / 0.7));
  }
  masks[0][0](1, 2) = 0.0;
  masks[1][0](3, 0) = 0.0;

  BiLstmParams grads;
  bilstm_loss_and_gradients(m, windows, targets, &grads, &masks);
  auto params = all_params(m.params);
  auto grad_view = all_params(grads);
  double worst = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = *params[i];
    const double h = 1e-5 * std::max(1.0, std::fabs(saved));
    *params[i] = saved + h;
    const double fp =
        bilstm_loss_and_gradients(m, windows, targets, nullptr, &masks);
    *params[i] = saved - h;
    const double fm =
        bilstm_loss_and_gradients(m, windows, targets, nullptr, &masks);
    *params[i] = saved;
    const double numeric = (fp - fm) / (2.0 * h);
    const double rel = std::fabs(*grad_view[i] - numeric) /
                       std::max({std::fabs(*grad_view[i]), std::fabs(numeric),
                                 1e-6});
    worst = std::max(worst, rel);
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("matrix forward pass agrees with a plain-loop restatement") {
  const BiLstmModel m = random_model(1, 2, 4, 123);
  RngStream rng(4, 2);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> win(4);
    for (double& v : win) v = rng.uniform(-1.0, 1.0);
    CHECK(bilstm_forward_normalized(m, win) ==
          doctest::Approx(loop_forward(m, win)).epsilon(1e-12));
  }
}

TEST_CASE("zero weights leave only the output bias") {
  BiLstmModel m = random_model(1, 3, 4, 5);
  for (auto& l : m.params.layers) {
    for (LstmDirection* d : {&l.fwd, &l.bwd}) {
      d->wx.setZero();
      d->wh.setZero();
      d->b.setZero();
    }
  }
  m.params.w_out.setZero();
  m.params.b_out = 0.37;
  ForecastRequest req;
  req.history = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  CHECK(predict_bilstm(m, req) == doctest::Approx(0.37));
}

TEST_CASE("inference is deterministic") {
  const BiLstmModel m = random_model(2, 3, 5, 31);
  ForecastRequest req;
  req.history = {1.0, -3.0, 2.5, 0.25, -0.75};
  req.horizon_samples = 4;
  // norm range [-1,1] keeps these inputs in band after normalization.
  const double a = predict_bilstm(m, req);
  const double b = predict_bilstm(m, req);
  CHECK(a == b);
}

TEST_CASE("training on constant sequences reproduces the constant") {
  std::vector<std::vector<double>> series(2, std::vector<double>(200, 25.0));
  BiLstmConfig cfg;
  cfg.layers = 1;
  cfg.hidden = 8;
  cfg.window = 6;
  cfg.horizon_samples = 6;
  cfg.max_epochs = 150;
  cfg.batch_size = 16;
  cfg.learning_rate = 0.05;
  cfg.patience = 25;
  cfg.seed = 11;
  const BiLstmModel m = train_bilstm(series, cfg);
  ForecastRequest req;
  req.history = std::vector<double>(10, 25.0);
  req.horizon_samples = 6;
  CHECK(predict_bilstm(m, req) == doctest::Approx(25.0).epsilon(4e-4));
}

TEST_CASE("sine prediction beats persistence at horizon six") {
  const double period_s = 0.015;
  auto make_sine = [&](double phase, int n) {
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
      y[i] = 40.0 * std::sin(2.0 * M_PI * 0.5 * (i * period_s) + phase);
    }
    return y;
  };
  std::vector<std::vector<double>> train{make_sine(0.0, 1500),
                                         make_sine(2.1, 1500)};
  BiLstmConfig cfg;
  cfg.layers = 1;
  cfg.hidden = 16;
  cfg.window = 6;
  cfg.horizon_samples = 6;
  cfg.max_epochs = 25;
  cfg.learning_rate = 0.02;
  cfg.seed = 3;
  const BiLstmModel m = train_bilstm(train, cfg);

  const auto held_out = make_sine(4.0, 400);
  std::vector<double> lstm_pred, persist_pred, actual;
  for (int t = 5; t + 6 < static_cast<int>(held_out.size()); ++t) {
    ForecastRequest req;
    req.history.assign(held_out.begin(), held_out.begin() + t + 1);
    req.horizon_samples = 6;
    lstm_pred.push_back(predict_bilstm(m, req));
    persist_pred.push_back(held_out[t]);
    actual.push_back(held_out[t + 6]);
  }
  const double lstm_err = nrmse(lstm_pred, actual, Component::kYaw);
  const double persist_err = nrmse(persist_pred, actual, Component::kYaw);
  CHECK(lstm_err < persist_err);
  CHECK(lstm_err < 0.15);
}

TEST_CASE("checkpoint round trip reproduces inference bit for bit") {
  std::vector<std::vector<double>> series(1);
  RngStream rng(21, 0);
  series[0].push_back(0.0);
  for (int i = 0; i < 300; ++i) {
    series[0].push_back(series[0].back() + rng.normal(0.0, 1.5));
  }
  BiLstmConfig cfg;
  cfg.layers = 2;
  cfg.hidden = 4;
  cfg.window = 6;
  cfg.horizon_samples = 2;
  cfg.max_epochs = 5;
  cfg.dropout = 0.2;
  cfg.seed = 9;
  const BiLstmModel m = train_bilstm(series, cfg);

  const char* path = "bilstm_ckpt_test.json";
  save_bilstm(m, path);
  const BiLstmModel back = load_bilstm(path);
  std::remove(path);

  for (int trial = 0; trial < 20; ++trial) {
    ForecastRequest req;
    for (int i = 0; i < 8; ++i) {
      req.history.push_back(rng.uniform(-30.0, 30.0));
    }
    CHECK(predict_bilstm(m, req) == predict_bilstm(back, req));
  }
}

TEST_CASE("config and request validation") {
  BiLstmConfig bad;
  bad.dropout = 1.0;
  CHECK_THROWS_AS(validate(bad), ValidationError);
  bad = BiLstmConfig{};
  bad.layers = 0;
  CHECK_THROWS_AS(validate(bad), ValidationError);
  bad = BiLstmConfig{};
  bad.window = 1;
  CHECK_THROWS_AS(validate(bad), ValidationError);

  const BiLstmModel m = random_model(1, 2, 6, 77);
  ForecastRequest req;
  req.history = {1.0, 2.0, 3.0};  // shorter than the window
  CHECK_THROWS_AS(predict_bilstm(m, req), ValidationError);

  BiLstmModel unfitted = random_model(1, 2, 6, 78);
  unfitted.fitted = false;
  req.history = {1, 2, 3, 4, 5, 6};
  CHECK_THROWS_AS(predict_bilstm(unfitted, req), ValidationError);
  CHECK_THROWS_AS(save_bilstm(unfitted, "nope.json"), ValidationError);
  CHECK_THROWS_AS(load_bilstm("missing_file.json"), ConfigError);
}
