#pragma once

#include <vector>

namespace h2msim::dba {

// One-way propagation delay of standard fiber, 5 us per km.
double fiber_delay_s(double length_km);

struct PollingConfig {
  double t_poll_s = 2e-3;
  double t_guard_s = 2e-6;
  int n_onu = 1;
  double rate_Bps = 1.25e9;     // line rate in bytes/second
  std::vector<double> rtt_s;    // per-ONU round trip; empty when unused
};

void validate(const PollingConfig& cfg);

// Per-ONU byte budget of one polling cycle:
// ((T_poll - N*T_g) / N) * R.
double bw_max(const PollingConfig& cfg);

struct RequestMsg {
  int onu_id = 0;
  double bw_req_bytes = 0.0;
};

struct GrantMsg {
  int onu_id = 0;
  double grant_bytes = 0.0;
  double start_time_s = 0.0;
};

// Baseline limited service: grant = min(request, BW_max).
GrantMsg ls_dba_grant(const RequestMsg& req, const PollingConfig& cfg);

struct PredictedDemand {
  enum class Class { kHmd, kXr, kBkg };
  Class cls = Class::kXr;
  int onu_id = 0;
  double bw_pred_bytes = 0.0;
};

// Predictive grant: min(predicted demand, BW_max). Demand left over after
// the cap stays pending and is granted on later cycles.
GrantMsg hmc_dba_grant(const PredictedDemand& pred, const PollingConfig& cfg);

// Pre-granting begins (mean - std) after the previous burst.
double pre_grant_lead_s(double period_mean_s, double period_std_s);
// The polling cycle index containing that instant.
int pre_grant_schedule(double period_mean_s, double period_std_s,
                       double cycle_s);

struct GrantSchedule {
  std::vector<GrantMsg> grants;  // start_time_s filled in
  bool overload = false;         // windows spill past the polling cycle
};

// Serializes grants into upstream windows: each window starts one guard
// after the previous window ends, shifted by the ONUs' RTT difference.
GrantSchedule grant_times(const std::vector<GrantMsg>& grants,
                          const PollingConfig& cfg, double cycle_start_s);

struct LatencyModelInput {
  double rho_bytes = 0.0;       // prediction error, predicted - actual
  double bw_max_bytes = 0.0;
  double t_poll_s = 0.0;
  double t_tx_s = 0.0;          // transmission + propagation of the burst
};

// Extra request/grant rounds caused by under-prediction.
int extra_cycles(double rho_bytes, double bw_max_bytes);

// Uplink latency: T_poll * (1 + extra_cycles) + T_tx.
double analytic_latency(const LatencyModelInput& in);

// Population variance of T_poll * (1 + extra_cycles(rho)) over the samples.
double analytic_jitter(const std::vector<double>& rho_samples,
                       double bw_max_bytes, double t_poll_s);

struct BoundCheck {
  bool pass = false;
  double bound_s = 0.0;
  double slack_s = 0.0;  // bound - T_poll
};

// Rule-of-thumb ceiling: T_poll <= 2*N*T_RTT + T_g*(N-1), with T_RTT the
// largest configured round trip.
BoundCheck polling_bound_check(const PollingConfig& cfg);

}  // namespace h2msim::dba
