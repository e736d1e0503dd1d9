#include "h2msim/arima.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>

#include "h2msim/errors.hpp"

namespace h2msim::forecast {
namespace {

void validate_order(const ArimaOrder& o) {
  if (o.p < 0 || o.d < 0 || o.q < 0) {
    throw ValidationError("ArimaOrder: p, d, q must be nonnegative");
  }
  if (o.d > 2) {
    throw ValidationError("ArimaOrder: d > 2 is not supported");
  }
}

void require_fitted(const ArimaModel& m, const char* where) {
  if (!m.fitted) {
    std::string msg = where;
    throw ValidationError(msg + ": model is not fitted");
  }
}

// Packs [intercept, ar..., ma...] for the optimizer.
std::vector<double> pack(const ArimaModel& m) {
  std::vector<double> x;
  x.reserve(1 + m.ar.size() + m.ma.size());
  x.push_back(m.intercept);
  x.insert(x.end(), m.ar.begin(), m.ar.end());
  x.insert(x.end(), m.ma.begin(), m.ma.end());
  return x;
}

void unpack(const std::vector<double>& x, ArimaModel& m) {
  m.intercept = x[0];
  for (int i = 0; i < m.order.p; ++i) m.ar[i] = x[1 + i];
  for (int j = 0; j < m.order.q; ++j) m.ma[j] = x[1 + m.order.p + j];
}

// One-step residuals with zero pre-sample residuals, starting at t = p.
void residuals_into(const std::vector<double>& z, const ArimaModel& m,
                    std::vector<double>& eps, std::vector<double>& out) {
  const int n = static_cast<int>(z.size());
  const int p = m.order.p;
  const int q = m.order.q;
  eps.assign(z.size(), 0.0);
  out.clear();
  out.reserve(n - p);
  for (int t = p; t < n; ++t) {
    double pred = m.intercept;
    for (int i = 0; i < p; ++i) pred += m.ar[i] * z[t - 1 - i];
    for (int j = 0; j < q; ++j) {
      if (t - 1 - j >= 0) pred += m.ma[j] * eps[t - 1 - j];
    }
    eps[t] = z[t] - pred;
    out.push_back(eps[t]);
  }
}

// Least-squares regression of z_t on an intercept, p lags of z, and q lags
// of the supplied residual proxy. Used to seed the optimizer.
void seed_coefficients(const std::vector<double>& z, ArimaModel& m) {
  const int p = m.order.p;
  const int q = m.order.q;
  const int n = static_cast<int>(z.size());

  std::vector<double> proxy(z.size(), 0.0);
  if (q > 0) {
    // Long-AR pass: residuals of a generous AR fit stand in for the
    // unobserved innovations.
    const int pl = std::min(n / 4, std::max(2 * (p + q), p + 4));
    ArimaModel long_ar;
    long_ar.order = {pl, 0, 0};
    long_ar.ar.assign(pl, 0.0);
    seed_coefficients(z, long_ar);
    std::vector<double> tail;
    residuals_into(z, long_ar, proxy, tail);
  }

  const int start = std::max(p, q);
  const int rows = n - start;
  const int cols = 1 + p + q;
  if (rows < cols) {
    throw ValidationError("fit_arima: series too short for the order");
  }
  Eigen::MatrixXd X(rows, cols);
  Eigen::VectorXd y(rows);
  for (int r = 0; r < rows; ++r) {
    const int t = start + r;
    y(r) = z[t];
    X(r, 0) = 1.0;
    for (int i = 0; i < p; ++i) X(r, 1 + i) = z[t - 1 - i];
    for (int j = 0; j < q; ++j) X(r, 1 + p + j) = proxy[t - 1 - j];
  }
  const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
  m.intercept = beta(0);
  for (int i = 0; i < p; ++i) m.ar[i] = beta(1 + i);
  for (int j = 0; j < q; ++j) m.ma[j] = beta(1 + p + j);
}

}  // namespace

std::vector<double> difference(const std::vector<double>& series, int d) {
  std::vector<double> z = series;
  for (int round = 0; round < d; ++round) {
    if (z.size() < 2) {
      throw ValidationError("difference: series too short");
    }
    std::vector<double> next(z.size() - 1);
    for (std::size_t i = 1; i < z.size(); ++i) next[i - 1] = z[i] - z[i - 1];
    z = std::move(next);
  }
  return z;
}

std::vector<double> arima_residuals(const ArimaModel& model,
                                    const std::vector<double>& differenced) {
  require_fitted(model, "arima_residuals");
  if (static_cast<int>(differenced.size()) <= model.order.p) {
    throw ValidationError("arima_residuals: series shorter than AR order");
  }
  std::vector<double> eps, out;
  residuals_into(differenced, model, eps, out);
  return out;
}

ArimaModel fit_arima(const std::vector<double>& series, ArimaOrder order,
                     const ArimaFitOptions& options) {
  validate_order(order);
  if (options.max_iterations < 1) {
    throw ValidationError("fit_arima: max_iterations must be >= 1");
  }
  for (double v : series) {
    if (!std::isfinite(v)) {
      throw ValidationError("fit_arima: non-finite sample");
    }
  }
  const std::vector<double> z = difference(series, order.d);
  const int n = static_cast<int>(z.size());
  const int min_len = std::max(10 * (order.p + order.q), order.p + 2);
  if (n < min_len) {
    char msg[96];
    std::snprintf(msg, sizeof(msg),
                  "fit_arima: need >= %d differenced samples, got %d", min_len,
                  n);
    throw ValidationError(msg);
  }

  ArimaModel m;
  m.order = order;
  m.ar.assign(order.p, 0.0);
  m.ma.assign(order.q, 0.0);
  seed_coefficients(z, m);

  const int k = 1 + order.p + order.q;
  std::vector<double> x = pack(m);
  std::vector<double> eps, r;
  const auto eval = [&](const std::vector<double>& params,
                        std::vector<double>& res) {
    unpack(params, m);
    residuals_into(z, m, eps, res);
  };

  eval(x, r);
  const int mlen = static_cast<int>(r.size());
  auto objective = [&](const std::vector<double>& res) {
    double s = 0.0;
    for (double e : res) s += e * e;
    return s / static_cast<double>(mlen);
  };
  double f = objective(r);

  Eigen::MatrixXd J(mlen, k);
  Eigen::VectorXd rv(mlen);
  std::vector<double> xp, rp, rm2;
  double lambda = 1e-3;
  double grad_norm = 0.0;
  bool converged = false;
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    // Central-difference Jacobian of the residual vector.
    for (int c = 0; c < k; ++c) {
      const double h = 1e-6 * std::max(1.0, std::fabs(x[c]));
      xp = x;
      xp[c] = x[c] + h;
      eval(xp, rp);
      xp[c] = x[c] - h;
      eval(xp, rm2);
      for (int row = 0; row < mlen; ++row) {
        J(row, c) = (rp[row] - rm2[row]) / (2.0 * h);
      }
    }
    eval(x, r);
    for (int row = 0; row < mlen; ++row) rv(row) = r[row];

    const Eigen::VectorXd g = 2.0 / mlen * (J.transpose() * rv);
    grad_norm = g.lpNorm<Eigen::Infinity>();
    if (grad_norm <= options.tolerance * (1.0 + f)) {
      converged = true;
      break;
    }

    const Eigen::MatrixXd jtj = J.transpose() * J;
    bool accepted = false;
    for (int tries = 0; tries < 30; ++tries) {
      Eigen::MatrixXd a = jtj;
      for (int c = 0; c < k; ++c) {
        a(c, c) += lambda * std::max(jtj(c, c), 1e-12);
      }
      const Eigen::VectorXd delta = a.ldlt().solve(-(J.transpose() * rv));
      xp = x;
      for (int c = 0; c < k; ++c) xp[c] += delta(c);
      eval(xp, rp);
      const double fp = objective(rp);
      if (std::isfinite(fp) && fp < f) {
        x = xp;
        f = fp;
        lambda = std::max(lambda * 0.3, 1e-12);
        accepted = true;
        break;
      }
      lambda = std::min(lambda * 3.0, 1e10);
    }
    if (!accepted) break;  // stalled; the gradient test below decides
  }

  eval(x, r);
  f = objective(r);
  if (!converged && grad_norm > options.tolerance * (1.0 + f)) {
    char msg[128];
    std::snprintf(msg, sizeof(msg),
                  "fit_arima: no convergence after %d iterations "
                  "(gradient %.3e, objective %.3e)",
                  iter, grad_norm, f);
    throw FitError(msg);
  }

  unpack(x, m);
  m.sigma2 = f;
  for (double c : m.ar) {
    if (!std::isfinite(c)) throw FitError("fit_arima: non-finite coefficient");
  }
  for (double c : m.ma) {
    if (!std::isfinite(c)) throw FitError("fit_arima: non-finite coefficient");
  }
  m.fitted = true;
  return m;
}

std::vector<double> forecast_path_arima(const ArimaModel& model,
                                        const std::vector<double>& history,
                                        int horizon) {
  require_fitted(model, "forecast_path_arima");
  if (horizon < 1) {
    throw ValidationError("forecast_path_arima: horizon must be >= 1");
  }
  const int p = model.order.p;
  const int d = model.order.d;
  const int q = model.order.q;
  if (static_cast<int>(history.size()) < std::max(p + d, d + 1)) {
    throw ValidationError("forecast_path_arima: history shorter than p + d");
  }

  // Tails of each differencing level, for re-integration.
  std::vector<std::vector<double>> levels(d + 1);
  levels[0] = history;
  for (int j = 1; j <= d; ++j) levels[j] = difference(history, j);
  const std::vector<double>& z = levels[d];

  std::vector<double> eps, tail;
  residuals_into(z, model, eps, tail);

  std::vector<double> zext = z;
  std::vector<double> out;
  out.reserve(horizon);
  std::vector<double> last(d + 1);
  for (int j = 0; j <= d; ++j) last[j] = levels[j].back();

  for (int step = 0; step < horizon; ++step) {
    const int t = static_cast<int>(zext.size());
    double pred = model.intercept;
    for (int i = 0; i < p; ++i) pred += model.ar[i] * zext[t - 1 - i];
    for (int j = 0; j < q; ++j) {
      const int idx = t - 1 - j;
      if (idx >= 0 && idx < static_cast<int>(eps.size())) {
        pred += model.ma[j] * eps[idx];
      }
      // Future innovations are taken at their zero mean.
    }
    zext.push_back(pred);

    // Integrate back up through the differencing levels.
    double value = pred;
    for (int j = d - 1; j >= 0; --j) {
      value = last[j] + value;
      last[j] = value;
    }
    if (d > 0) last[d] = pred;
    out.push_back(value);
  }
  return out;
}

double predict_arima(const ArimaModel& model, const ForecastRequest& req) {
  validate(req);
  return forecast_path_arima(model, req.history, req.horizon_samples).back();
}

void save_arima(const ArimaModel& model, const std::string& path) {
  require_fitted(model, "save_arima");
  nlohmann::json j;
  j["format"] = "arima/1";
  j["order"] = {model.order.p, model.order.d, model.order.q};
  j["ar"] = model.ar;
  j["ma"] = model.ma;
  j["intercept"] = model.intercept;
  j["sigma2"] = model.sigma2;
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("save_arima: cannot open " + path);
  }
  out << j.dump(2) << "\n";
}

ArimaModel load_arima(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("load_arima: cannot open " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("load_arima: " + std::string(e.what()));
  }
  if (j.value("format", "") != "arima/1") {
    throw ConfigError("load_arima: unsupported checkpoint format");
  }
  ArimaModel m;
  m.order.p = j.at("order").at(0).get<int>();
  m.order.d = j.at("order").at(1).get<int>();
  m.order.q = j.at("order").at(2).get<int>();
  m.ar = j.at("ar").get<std::vector<double>>();
  m.ma = j.at("ma").get<std::vector<double>>();
  m.intercept = j.at("intercept").get<double>();
  m.sigma2 = j.at("sigma2").get<double>();
  validate_order(m.order);
  if (static_cast<int>(m.ar.size()) != m.order.p ||
      static_cast<int>(m.ma.size()) != m.order.q) {
    throw ConfigError("load_arima: coefficient counts disagree with order");
  }
  m.fitted = true;
  return m;
}

}  // namespace h2msim::forecast
