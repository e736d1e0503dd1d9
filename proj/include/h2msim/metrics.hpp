#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "h2msim/xr_model.hpp"

namespace h2msim::metrics {

enum class TrafficClass { kXr, kHmd, kBackground, kCameraCmd };

std::string_view class_name(TrafficClass cls);

// One delivered packet. The four breakdown components must sum to
// delivered_s - created_s within 1e-9 s. frame_id < 0 marks packets that
// do not belong to a video frame (HMD samples, background, commands).
struct LatencyRecord {
  std::uint64_t packet_id = 0;
  TrafficClass cls = TrafficClass::kXr;
  std::int64_t frame_id = -1;
  double size_bytes = 0.0;
  double created_s = 0.0;
  double delivered_s = 0.0;
  double wait_s = 0.0;       // idle time until the first usable grant
  double queue_s = 0.0;      // backlog drained ahead of this packet
  double transmit_s = 0.0;   // serialization at line rate
  double propagate_s = 0.0;  // fiber flight time
};

double total_latency_s(const LatencyRecord& rec);

// Throws ValidationError on delivery before creation, a negative
// breakdown component, negative size, or a breakdown that does not sum
// to the total.
void validate(const LatencyRecord& rec);

// First-packet creation to last-packet delivery of one video frame.
// Always at least the largest single-packet latency of the frame.
struct FrameLatency {
  std::int64_t frame_id = -1;
  double created_s = 0.0;
  double delivered_s = 0.0;

  double latency_s() const { return delivered_s - created_s; }
};

struct ByteTotals {
  double generated = 0.0;
  double delivered = 0.0;
  double dropped = 0.0;

  double in_flight() const { return generated - delivered - dropped; }
};

// Per-class latency statistics. Percentiles use the nearest-rank
// definition on the sorted sample. jitter_std_s is the sample standard
// deviation and is absent below two records. A zero count leaves every
// statistic at zero.
struct ClassSummary {
  std::size_t count = 0;
  double mean_s = 0.0;
  double p50_s = 0.0;
  double p95_s = 0.0;
  double p99_s = 0.0;
  double max_s = 0.0;
  std::optional<double> jitter_std_s;
};

// Single-writer store fed by the event loop. Records keep insertion
// order so exports are reproducible run to run. Long runs can switch
// full per-packet retention off; latency samples, frame spans, and the
// byte ledger are always kept, so every summary stays exact.
class MetricsStore {
 public:
  void set_keep_records(bool keep) { keep_records_ = keep; }
  bool keep_records() const { return keep_records_; }

  void record_generated(TrafficClass cls, double bytes);
  void record_dropped(TrafficClass cls, double bytes);
  // Validates the record and accounts its bytes as delivered. Throws
  // ValidationError when delivered + dropped would exceed generated.
  void record_delivery(const LatencyRecord& rec);

  // Empty when record retention is off.
  const std::vector<LatencyRecord>& records() const { return records_; }
  std::vector<const LatencyRecord*> records_of(TrafficClass cls) const;

  const std::vector<double>& latencies(TrafficClass cls) const;
  const std::vector<FrameLatency>& frames(TrafficClass cls) const;

  const ByteTotals& totals(TrafficClass cls) const;
  ByteTotals totals_all() const;

 private:
  bool keep_records_ = true;
  std::vector<LatencyRecord> records_;
  std::vector<double> latencies_[4];
  std::vector<FrameLatency> frames_[4];
  std::unordered_map<std::int64_t, std::size_t> frame_index_[4];
  ByteTotals totals_[4];
};

// Sample standard deviation (n - 1 divisor); absent below two values.
std::optional<double> jitter_std(const std::vector<double>& latencies_s);

// Nearest-rank percentile, p in (0, 100].
double percentile(std::vector<double> values, double p);

ClassSummary summarize(const MetricsStore& store, TrafficClass cls);

// The class's deliveries grouped by frame id (negative ids are
// skipped): creation is the earliest packet creation, delivery the
// latest packet delivery. Ordered by first appearance.
const std::vector<FrameLatency>& frame_latencies(
    const MetricsStore& store, TrafficClass cls = TrafficClass::kXr);

// Link context needed to place a run on a load axis: offered load is
// generated uplink bits / capacity over the run.
struct RunAccounting {
  double duration_s = 0.0;
  double uplink_capacity_bps = 0.0;
  int n_xr_streams = 1;
};

struct QoeReport {
  std::string resolution_name;
  xr::QoeVerdict verdict;  // latency axis = worst frame, rate axis = carried
  ClassSummary xr;
  ClassSummary hmd;
  ClassSummary background;
  ClassSummary camera_cmd;
  std::size_t frame_count = 0;
  double frame_latency_mean_s = 0.0;
  double frame_latency_p99_s = 0.0;
  double frame_latency_max_s = 0.0;
  double per_stream_datarate_bps = 0.0;
  double offered_load_fraction = 0.0;
  double carried_load_fraction = 0.0;
  double duration_s = 0.0;
  ByteTotals totals;
};

// Throws ValidationError on nonpositive duration, capacity, or stream
// count. A run with no frames passes the latency axis vacuously.
QoeReport qoe_report(const MetricsStore& store, const xr::ResolutionClass& res,
                     const RunAccounting& acct);

nlohmann::json to_json(const QoeReport& report);

// Per-packet dump, one row per delivered packet in insertion order.
// Doubles are printed with %.17g so equal stores produce equal bytes.
extern const char kPacketCsvHeader[];
void write_packet_csv(const MetricsStore& store, std::ostream& out);

}  // namespace h2msim::metrics
