#include "h2msim/dba.hpp"

#include <algorithm>
#include <cmath>

#include "h2msim/errors.hpp"

namespace h2msim::dba {

double fiber_delay_s(double length_km) {
  if (length_km < 0.0) {
    throw ValidationError("fiber_delay_s: negative length");
  }
  return length_km * 5e-6;
}

void validate(const PollingConfig& cfg) {
  if (cfg.n_onu < 1) {
    throw ConfigError("PollingConfig: n_onu must be >= 1");
  }
  if (!(cfg.rate_Bps > 0.0)) {
    throw ConfigError("PollingConfig: rate must be > 0");
  }
  if (cfg.t_guard_s < 0.0) {
    throw ConfigError("PollingConfig: guard time must be >= 0");
  }
  if (!(cfg.t_poll_s > cfg.n_onu * cfg.t_guard_s)) {
    throw ConfigError(
        "PollingConfig: T_poll must exceed N * T_g, otherwise no payload "
        "window remains");
  }
  if (!cfg.rtt_s.empty() &&
      static_cast<int>(cfg.rtt_s.size()) != cfg.n_onu) {
    throw ConfigError("PollingConfig: rtt list must match n_onu");
  }
  for (double r : cfg.rtt_s) {
    if (r < 0.0) throw ConfigError("PollingConfig: negative RTT");
  }
}

double bw_max(const PollingConfig& cfg) {
  validate(cfg);
  return (cfg.t_poll_s - cfg.n_onu * cfg.t_guard_s) / cfg.n_onu * cfg.rate_Bps;
}

GrantMsg ls_dba_grant(const RequestMsg& req, const PollingConfig& cfg) {
  if (req.bw_req_bytes < 0.0) {
    throw ValidationError("ls_dba_grant: negative request");
  }
  return {req.onu_id, std::min(req.bw_req_bytes, bw_max(cfg)), 0.0};
}

GrantMsg hmc_dba_grant(const PredictedDemand& pred, const PollingConfig& cfg) {
  if (pred.bw_pred_bytes < 0.0) {
    throw ValidationError("hmc_dba_grant: negative predicted demand");
  }
  return {pred.onu_id, std::min(pred.bw_pred_bytes, bw_max(cfg)), 0.0};
}

double pre_grant_lead_s(double period_mean_s, double period_std_s) {
  if (!(period_mean_s > period_std_s)) {
    throw ValidationError("pre_grant_lead_s: mean must exceed std");
  }
  if (period_std_s < 0.0) {
    throw ValidationError("pre_grant_lead_s: negative std");
  }
  return period_mean_s - period_std_s;
}

int pre_grant_schedule(double period_mean_s, double period_std_s,
                       double cycle_s) {
  if (!(cycle_s > 0.0)) {
    throw ValidationError("pre_grant_schedule: cycle must be > 0");
  }
  return static_cast<int>(
      std::floor(pre_grant_lead_s(period_mean_s, period_std_s) / cycle_s));
}

GrantSchedule grant_times(const std::vector<GrantMsg>& grants,
                          const PollingConfig& cfg, double cycle_start_s) {
  validate(cfg);
  GrantSchedule out;
  out.grants = grants;
  double prev_start = cycle_start_s;
  double prev_tx = 0.0;
  double prev_rtt = cfg.rtt_s.empty() ? 0.0 : cfg.rtt_s.front();
  double end = cycle_start_s;
  for (std::size_t k = 0; k < out.grants.size(); ++k) {
    const double rtt =
        cfg.rtt_s.empty() ? 0.0 : cfg.rtt_s.at(static_cast<std::size_t>(k));
    double start = prev_start;
    if (k > 0) {
      start = prev_start + prev_tx + cfg.t_guard_s + (rtt - prev_rtt);
    }
    out.grants[k].start_time_s = start;
    prev_start = start;
    prev_tx = out.grants[k].grant_bytes / cfg.rate_Bps;
    prev_rtt = rtt;
    end = start + prev_tx;
  }
  out.overload = end - cycle_start_s > cfg.t_poll_s + 1e-15;
  return out;
}

int extra_cycles(double rho_bytes, double bw_max_bytes) {
  if (!(bw_max_bytes > 0.0)) {
    throw ValidationError("extra_cycles: BW_max must be > 0");
  }
  if (rho_bytes >= 0.0) return 0;
  return static_cast<int>(std::ceil(-rho_bytes / bw_max_bytes));
}

double analytic_latency(const LatencyModelInput& in) {
  return in.t_poll_s * (1.0 + extra_cycles(in.rho_bytes, in.bw_max_bytes)) +
         in.t_tx_s;
}

double analytic_jitter(const std::vector<double>& rho_samples,
                       double bw_max_bytes, double t_poll_s) {
  if (rho_samples.empty()) {
    throw ValidationError("analytic_jitter: empty sample set");
  }
  double mean = 0.0;
  for (double rho : rho_samples) {
    mean += t_poll_s * (1.0 + extra_cycles(rho, bw_max_bytes));
  }
  mean /= static_cast<double>(rho_samples.size());
  double var = 0.0;
  for (double rho : rho_samples) {
    const double l = t_poll_s * (1.0 + extra_cycles(rho, bw_max_bytes));
    var += (l - mean) * (l - mean);
  }
  return var / static_cast<double>(rho_samples.size());
}

BoundCheck polling_bound_check(const PollingConfig& cfg) {
  validate(cfg);
  if (cfg.rtt_s.empty()) {
    throw ConfigError("polling_bound_check: RTTs are required");
  }
  const double t_rtt = *std::max_element(cfg.rtt_s.begin(), cfg.rtt_s.end());
  BoundCheck out;
  out.bound_s = 2.0 * cfg.n_onu * t_rtt + cfg.t_guard_s * (cfg.n_onu - 1);
  out.slack_s = out.bound_s - cfg.t_poll_s;
  out.pass = out.slack_s >= 0.0;
  return out;
}

}  // namespace h2msim::dba
