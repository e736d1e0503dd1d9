#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "h2msim/dba.hpp"
#include "h2msim/errors.hpp"
#include "h2msim/sim/rng.hpp"

using namespace h2msim::dba;
using h2msim::ConfigError;
using h2msim::ValidationError;

namespace {

PollingConfig fttr_cfg() {
  PollingConfig cfg;
  cfg.t_poll_s = 2e-3;
  cfg.t_guard_s = 2e-6;
  cfg.n_onu = 8;
  cfg.rate_Bps = 1.25e9;  // 10 Gbps
  return cfg;
}

}  // namespace

TEST_CASE("per-cycle byte budget matches hand arithmetic exactly") {
  CHECK(bw_max(fttr_cfg()) == 310000.0);

  PollingConfig trunk;
  trunk.t_poll_s = 0.5e-3;
  trunk.t_guard_s = 1e-6;
  trunk.n_onu = 16;
  trunk.rate_Bps = 6.25e9;  // 50 Gbps
  CHECK(bw_max(trunk) == 189062.5);

  PollingConfig solo;
  solo.t_poll_s = 1e-3;
  solo.t_guard_s = 0.0;
  solo.n_onu = 1;
  solo.rate_Bps = 2e9;
  CHECK(bw_max(solo) == 1e-3 * 2e9);

  PollingConfig broken = fttr_cfg();
  broken.t_poll_s = 8 * 2e-6;  // no payload window left
  CHECK_THROWS_AS(bw_max(broken), ConfigError);
}

TEST_CASE("limited service grants") {
  const PollingConfig cfg = fttr_cfg();
  CHECK(ls_dba_grant({3, 100e3}, cfg).grant_bytes == 100e3);
  CHECK(ls_dba_grant({3, 100e3}, cfg).onu_id == 3);
  CHECK(ls_dba_grant({0, 500e3}, cfg).grant_bytes == 310000.0);
  CHECK(ls_dba_grant({0, 0.0}, cfg).grant_bytes == 0.0);
  CHECK_THROWS_AS(ls_dba_grant({0, -1.0}, cfg), ValidationError);
}

TEST_CASE("predictive grants cap at the cycle budget") {
  const PollingConfig cfg = fttr_cfg();
  PredictedDemand d;
  d.cls = PredictedDemand::Class::kXr;
  d.bw_pred_bytes = 200e3;
  CHECK(hmc_dba_grant(d, cfg).grant_bytes == 200e3);
  d.bw_pred_bytes = 400e3;
  CHECK(hmc_dba_grant(d, cfg).grant_bytes == 310000.0);
}

TEST_CASE("pre-grant lead sits one std before the mean period") {
  CHECK(pre_grant_lead_s(33.13e-3, 1.76e-3) ==
        doctest::Approx(31.37e-3).epsilon(1e-12));
  CHECK(pre_grant_schedule(33.13e-3, 1.76e-3, 2e-3) == 15);
  CHECK(pre_grant_lead_s(14.13e-3, 1.96e-3) ==
        doctest::Approx(12.17e-3).epsilon(1e-12));
  CHECK(pre_grant_schedule(14.13e-3, 1.96e-3, 2e-3) == 6);
  // Zero spread: the lead lands exactly on the mean.
  CHECK(pre_grant_lead_s(20e-3, 0.0) == 20e-3);
  CHECK(pre_grant_schedule(20e-3, 0.0, 2e-3) == 10);
  CHECK_THROWS_AS(pre_grant_lead_s(1e-3, 2e-3), ValidationError);
}

TEST_CASE("grant windows pack with one guard between bursts") {
  PollingConfig cfg = fttr_cfg();
  cfg.n_onu = 3;

  std::vector<GrantMsg> grants{{0, 100e3, 0}, {1, 50e3, 0}, {2, 0.0, 0}};
  const GrantSchedule sched = grant_times(grants, cfg, 10e-3);
  CHECK(sched.grants[0].start_time_s == doctest::Approx(10e-3));
  CHECK(sched.grants[1].start_time_s ==
        doctest::Approx(10e-3 + 100e3 / 1.25e9 + 2e-6).epsilon(1e-12));
  CHECK(sched.grants[2].start_time_s ==
        doctest::Approx(sched.grants[1].start_time_s + 50e3 / 1.25e9 + 2e-6)
            .epsilon(1e-12));
  CHECK_FALSE(sched.overload);

  // All-zero grants: polling slots separated by exactly one guard.
  std::vector<GrantMsg> zeros{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  const GrantSchedule polls = grant_times(zeros, cfg, 0.0);
  CHECK(polls.grants[1].start_time_s == doctest::Approx(2e-6));
  CHECK(polls.grants[2].start_time_s == doctest::Approx(4e-6));

  // RTT spread shifts the later window by the difference.
  cfg.rtt_s = {100e-6, 140e-6, 140e-6};
  const GrantSchedule shifted = grant_times(zeros, cfg, 0.0);
  CHECK(shifted.grants[1].start_time_s ==
        doctest::Approx(2e-6 + 40e-6).epsilon(1e-12));
  CHECK(shifted.grants[2].start_time_s ==
        doctest::Approx(shifted.grants[1].start_time_s + 2e-6).epsilon(1e-12));
}

TEST_CASE("full-budget cycle fits; anything more overloads") {
  const PollingConfig cfg = fttr_cfg();
  const double b = bw_max(cfg);
  std::vector<GrantMsg> full;
  for (int k = 0; k < 8; ++k) full.push_back({k, b, 0});
  const GrantSchedule ok = grant_times(full, cfg, 0.0);
  CHECK_FALSE(ok.overload);
  // Eight budget windows plus seven guards end one guard before T_poll.
  const GrantMsg& last = ok.grants.back();
  CHECK(last.start_time_s + b / cfg.rate_Bps ==
        doctest::Approx(2e-3 - 2e-6).epsilon(1e-9));

  std::vector<GrantMsg> over = full;
  over[7].grant_bytes += 5000.0;
  CHECK(grant_times(over, cfg, 0.0).overload);
}

TEST_CASE("uplink latency formula") {
  LatencyModelInput in;
  in.bw_max_bytes = 310000.0;
  in.t_poll_s = 2e-3;
  in.t_tx_s = 0.3e-3;

  in.rho_bytes = 0.0;
  CHECK(analytic_latency(in) == doctest::Approx(2.3e-3));
  in.rho_bytes = 5e4;  // over-prediction costs nothing extra
  CHECK(analytic_latency(in) == doctest::Approx(2.3e-3));
  in.rho_bytes = -2.5 * 310000.0;
  CHECK(analytic_latency(in) == doctest::Approx(2e-3 * 4 + 0.3e-3));
  in.rho_bytes = -1.0;  // any shortfall costs at least one extra cycle
  CHECK(analytic_latency(in) == doctest::Approx(2e-3 * 2 + 0.3e-3));
  in.rho_bytes = -310000.0;  // exactly one budget
  CHECK(analytic_latency(in) == doctest::Approx(2e-3 * 2 + 0.3e-3));

  // Monotone: more capacity never hurts, deeper shortfall never helps.
  double prev = 1e9;
  for (double b : {1e5, 2e5, 4e5, 8e5}) {
    in.bw_max_bytes = b;
    in.rho_bytes = -5e5;
    const double l = analytic_latency(in);
    CHECK(l <= prev);
    prev = l;
  }
  in.bw_max_bytes = 310000.0;
  prev = 0.0;
  for (double rho : {-1e4, -2e5, -4e5, -1e6}) {
    in.rho_bytes = rho;
    const double l = analytic_latency(in);
    CHECK(l >= prev);
    prev = l;
  }
}

TEST_CASE("jitter is the variance of the cycle-count latency") {
  const double b = 310000.0;
  const double t = 2e-3;

  CHECK(analytic_jitter({0.0, 1e3, 5e5}, b, t) == doctest::Approx(0.0));

  // Half on time, half needing two extra cycles: {T, 3T} has variance T^2.
  CHECK(analytic_jitter({0.0, -1.5 * b}, b, t) ==
        doctest::Approx(t * t).epsilon(1e-12));

  // Definitional consistency against sample-wise latency.
  h2msim::sim::RngStream rng(8, 1);
  std::vector<double> rho(5000);
  for (double& r : rho) r = rng.normal(0.0, 2.0 * b);
  LatencyModelInput in;
  in.bw_max_bytes = b;
  in.t_poll_s = t;
  in.t_tx_s = 0.7e-3;  // constant offset, must not affect variance
  std::vector<double> lat;
  for (double r : rho) {
    in.rho_bytes = r;
    lat.push_back(analytic_latency(in));
  }
  double mean = 0.0;
  for (double l : lat) mean += l;
  mean /= static_cast<double>(lat.size());
  double var = 0.0;
  for (double l : lat) var += (l - mean) * (l - mean);
  var /= static_cast<double>(lat.size());
  CHECK(analytic_jitter(rho, b, t) == doctest::Approx(var).epsilon(1e-12));

  CHECK_THROWS_AS(analytic_jitter({}, b, t), ValidationError);
}

TEST_CASE("polling cycle rule-of-thumb bound") {
  PollingConfig trunk;
  trunk.t_poll_s = 0.5e-3;
  trunk.t_guard_s = 1e-6;
  trunk.n_onu = 16;
  trunk.rate_Bps = 6.25e9;
  trunk.rtt_s.assign(16, 2.0 * fiber_delay_s(20.0));
  CHECK(fiber_delay_s(20.0) == doctest::Approx(100e-6));

  const BoundCheck ok = polling_bound_check(trunk);
  CHECK(ok.pass);
  CHECK(ok.bound_s == doctest::Approx(6.415e-3).epsilon(1e-12));
  CHECK(ok.slack_s == doctest::Approx(6.415e-3 - 0.5e-3).epsilon(1e-9));

  PollingConfig tight = trunk;
  tight.t_poll_s = 7e-3;
  const BoundCheck bad = polling_bound_check(tight);
  CHECK_FALSE(bad.pass);
  CHECK(bad.slack_s < 0.0);

  PollingConfig one;
  one.t_poll_s = 0.1e-3;
  one.t_guard_s = 5e-6;
  one.n_onu = 1;
  one.rate_Bps = 1e9;
  one.rtt_s = {200e-6};
  CHECK(polling_bound_check(one).bound_s == doctest::Approx(400e-6));

  PollingConfig no_rtt = fttr_cfg();
  CHECK_THROWS_AS(polling_bound_check(no_rtt), ConfigError);
}
