#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "h2msim/errors.hpp"
#include "h2msim/traffic.hpp"
#include "h2msim/xr_model.hpp"

using namespace h2msim::traffic;
using h2msim::ValidationError;

namespace {

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
};

Moments two_pass(const std::vector<double>& xs) {
  Moments m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - m.mean) * (x - m.mean);
  m.stddev = std::sqrt(var / static_cast<double>(xs.size()));
  return m;
}

h2msim::xr::FrameSpec small_spec() {
  h2msim::xr::FrameSpec s;
  s.width_px = 640;
  s.height_px = 480;
  s.color_depth_bytes = 0.25;
  s.fov_deg = 90.0;
  s.frame_rate_fps = 30.0;
  s.sensitivity_k = 2e-4;
  return s;
}

}  // namespace

TEST_CASE("xr inter-arrival and size moments") {
  XrSourceConfig cfg;
  XrSource src(cfg, 2024, 1);
  const int n = 100000;
  std::vector<double> gaps, sizes;
  gaps.reserve(n);
  sizes.reserve(n);
  double now = 0.0;
  for (int i = 0; i < n; ++i) {
    const XrArrival a = src.next(now);
    gaps.push_back(a.next_gap_s);
    sizes.push_back(static_cast<double>(a.frame.total_bytes));
    now += a.next_gap_s;
    CHECK(a.next_gap_s >= 1e-3);
  }
  const Moments g = two_pass(gaps);
  CHECK(g.mean == doctest::Approx(33.13e-3).epsilon(0.02));
  CHECK(g.stddev == doctest::Approx(std::sqrt(3.08) * 1e-3).epsilon(0.10));

  // Gamma(0.8839, 33.6439) KB: mean = shape * scale = 29.74 KB.
  const double mean_bytes = 0.8839 * 33.6439 * 1024.0;
  CHECK(0.8839 * 33.6439 == doctest::Approx(29.74).epsilon(2e-4));
  const Moments s = two_pass(sizes);
  CHECK(s.mean == doctest::Approx(mean_bytes).epsilon(0.05));

  // Frame ids are sequential.
  const XrArrival a = src.next(now);
  CHECK(a.frame.frame_id == static_cast<std::uint64_t>(n));
}

TEST_CASE("head-driven sizes follow the saturation law with a floor") {
  XrSourceConfig cfg;
  cfg.mode = XrSourceConfig::SizeMode::kHeadDriven;
  cfg.spec = small_spec();
  cfg.floor_bytes = 0.05 * cfg.spec.raw_frame_bytes();
  XrSource src(cfg, 7, 2);

  // Static head: every frame sits exactly on the keyframe floor.
  for (int i = 0; i < 10; ++i) {
    const XrArrival a = src.next(i * 0.033, 0.0);
    CHECK(a.frame.total_bytes ==
          static_cast<std::uint64_t>(std::llround(cfg.floor_bytes)));
  }

  // Moving head: size matches the saturation law once above the floor.
  for (double theta : {2.0, 5.0, 11.0}) {
    const XrArrival a = src.next(1.0, theta);
    const double want = std::max(
        cfg.floor_bytes, h2msim::xr::effective_frame_bytes(cfg.spec, theta));
    CHECK(a.frame.total_bytes ==
          static_cast<std::uint64_t>(std::llround(want)));
  }
}

TEST_CASE("hmd cadence moments and trace following") {
  HmdSourceConfig cfg;
  HmdSource src(cfg, nullptr, 99, 3);
  const int n = 100000;
  std::vector<double> gaps;
  gaps.reserve(n);
  double now = 0.0;
  for (int i = 0; i < n; ++i) {
    const HmdArrival a = src.next(now);
    CHECK(a.packet.payload_bytes == 64);
    gaps.push_back(a.next_gap_s);
    now += a.next_gap_s;
  }
  const Moments g = two_pass(gaps);
  // Configured Gamma(51.844, 0.273 ms): mean 14.153 ms, std 1.966 ms.
  CHECK(g.mean == doctest::Approx(14.13e-3).epsilon(0.02));
  CHECK(g.stddev == doctest::Approx(1.96e-3).epsilon(0.10));

  // Deterministic mode pins the gap at the distribution mean.
  cfg.deterministic = true;
  HmdSource det(cfg, nullptr, 99, 4);
  const HmdArrival a = det.next(0.0);
  CHECK(a.next_gap_s == doctest::Approx(51.844 * 0.273 * 1e-3).epsilon(1e-12));

  // Orientations come from the trace, and the cursor loops when exhausted.
  h2msim::geo::HeadTrace trace;
  trace.samples = {{0.0, {0.0, 0.0, 0.0}},
                   {0.015, {10.0, 1.0, 0.0}},
                   {0.030, {20.0, 2.0, 0.0}}};
  HmdSource follow(cfg, &trace, 99, 5);
  CHECK(follow.next(0.016).orientation.yaw_deg == doctest::Approx(10.0));
  CHECK(follow.next(0.030).orientation.yaw_deg == doctest::Approx(20.0));
  CHECK_FALSE(follow.trace_looped());
  CHECK(follow.next(0.031).orientation.yaw_deg == doctest::Approx(0.0));
  CHECK(follow.trace_looped());
}

TEST_CASE("background load targeting") {
  BackgroundConfig cfg;
  cfg.load_fraction = 0.8 * 1e9 / 10e9;  // 0.8 Gbps on a 10 Gbps link
  cfg.link_rate_bps = 10e9;
  BackgroundSource src(cfg, 5, 6);

  // 1 Gbps with 1500 B packets would mean a 12 us mean gap; at 0.8 Gbps the
  // gap is 15 us.
  CHECK(src.mean_gap_s() == doctest::Approx(15e-6).epsilon(1e-12));
  BackgroundConfig gig = cfg;
  gig.load_fraction = 1e9 / 10e9;
  CHECK(BackgroundSource(gig, 5, 7).mean_gap_s() ==
        doctest::Approx(12e-6).epsilon(1e-12));

  const int n = 200000;
  double elapsed = 0.0;
  std::uint64_t bytes = 0;
  for (int i = 0; i < n; ++i) {
    const auto a = src.next(elapsed);
    REQUIRE(a.has_value());
    bytes += a->packet.payload_bytes;
    elapsed += a->next_gap_s;
    CHECK(a->next_gap_s > 0.0);
  }
  const double offered = bytes * 8.0 / elapsed;
  CHECK(offered == doctest::Approx(cfg.load_fraction * cfg.link_rate_bps)
                       .epsilon(0.02));
}

TEST_CASE("pareto background gaps keep the tail index and the load") {
  BackgroundConfig cfg;
  cfg.law = BackgroundConfig::GapLaw::kPareto;
  cfg.pareto_shape = 1.5;
  cfg.load_fraction = 0.05;
  BackgroundSource src(cfg, 31, 8);

  const int n = 200000;
  std::vector<double> gaps;
  gaps.reserve(n);
  for (int i = 0; i < n; ++i) {
    gaps.push_back(src.next(0.0)->next_gap_s);
  }
  // Hill estimator over the largest 2000 order statistics.
  std::sort(gaps.begin(), gaps.end());
  const int k = 2000;
  const double x_k = gaps[n - k - 1];
  double acc = 0.0;
  for (int i = n - k; i < n; ++i) acc += std::log(gaps[i] / x_k);
  const double hill = k / acc;
  CHECK(hill == doctest::Approx(1.5).epsilon(0.2));
  CHECK(std::fabs(hill - 1.5) < 0.3);
}

TEST_CASE("zero load emits nothing") {
  BackgroundConfig cfg;
  cfg.load_fraction = 0.0;
  BackgroundSource src(cfg, 1, 9);
  CHECK_FALSE(src.next(0.0).has_value());
  CHECK(std::isinf(src.mean_gap_s()));
}

TEST_CASE("segmentation arithmetic") {
  XrFrame f;
  f.frame_id = 12;
  f.generation_time_s = 0.5;

  f.total_bytes = 30000;
  auto packets = segment_frame(f, 1500);
  CHECK(packets.size() == 20);
  for (const auto& p : packets) {
    CHECK(p.payload_bytes == 1500);
    CHECK(p.frame_id == 12);
    CHECK(p.creation_time_s == 0.5);
  }

  f.total_bytes = 1501;
  packets = segment_frame(f, 1500);
  REQUIRE(packets.size() == 2);
  CHECK(packets[0].payload_bytes == 1500);
  CHECK(packets[1].payload_bytes == 1);

  f.total_bytes = 30447;
  packets = segment_frame(f, 1500);
  REQUIRE(packets.size() == 21);
  CHECK(packets[20].payload_bytes == 447);

  f.total_bytes = 0;
  packets = segment_frame(f, 1500);
  REQUIRE(packets.size() == 1);
  CHECK(packets[0].payload_bytes == kMinPayloadBytes);

  CHECK_THROWS_AS(segment_frame(f, 0), ValidationError);
  CHECK_THROWS_AS(segment_frame(f, 1501), ValidationError);
}

TEST_CASE("segmentation is lossless") {
  h2msim::sim::RngStream rng(3, 3);
  for (int trial = 0; trial < 300; ++trial) {
    XrFrame f;
    f.total_bytes = 1 + (rng.next_u64() % 200000);
    const std::uint32_t mtu = 100 + (rng.next_u64() % 1401);
    const auto packets = segment_frame(f, mtu);
    std::uint64_t sum = 0;
    for (const auto& p : packets) {
      CHECK(p.payload_bytes <= mtu);
      CHECK(p.payload_bytes >= 1);
      sum += p.payload_bytes;
    }
    CHECK(sum == f.total_bytes);
    CHECK(packets.size() == (f.total_bytes + mtu - 1) / mtu);
  }
}

TEST_CASE("source configuration validation") {
  XrSourceConfig xr;
  xr.mean_gap_s = 0.0;
  CHECK_THROWS_AS(XrSource(xr, 1, 1), ValidationError);
  xr = XrSourceConfig{};
  xr.min_gap_s = 0.05;  // above the mean
  CHECK_THROWS_AS(XrSource(xr, 1, 1), ValidationError);

  HmdSourceConfig hmd;
  hmd.payload_bytes = 0;
  CHECK_THROWS_AS(HmdSource(hmd, nullptr, 1, 1), ValidationError);

  BackgroundConfig bg;
  bg.load_fraction = 1.0;
  CHECK_THROWS_AS(BackgroundSource(bg, 1, 1), ValidationError);
  bg = BackgroundConfig{};
  bg.law = BackgroundConfig::GapLaw::kPareto;
  bg.pareto_shape = 1.0;
  bg.load_fraction = 0.1;
  CHECK_THROWS_AS(BackgroundSource(bg, 1, 1), ValidationError);
}
