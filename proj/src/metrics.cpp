#include "h2msim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "h2msim/errors.hpp"

namespace h2msim::metrics {

namespace {

constexpr double kBreakdownTol = 1e-9;
constexpr double kByteTol = 1e-9;

double kahan_sum(const std::vector<double>& values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string_view class_name(TrafficClass cls) {
  switch (cls) {
    case TrafficClass::kXr:
      return "xr";
    case TrafficClass::kHmd:
      return "hmd";
    case TrafficClass::kBackground:
      return "background";
    case TrafficClass::kCameraCmd:
      return "camera_cmd";
  }
  throw ValidationError("unknown traffic class");
}

double total_latency_s(const LatencyRecord& rec) {
  return rec.delivered_s - rec.created_s;
}

void validate(const LatencyRecord& rec) {
  if (rec.delivered_s < rec.created_s) {
    throw ValidationError("packet " + std::to_string(rec.packet_id) +
                          " delivered before creation");
  }
  if (rec.size_bytes < 0.0) {
    throw ValidationError("packet " + std::to_string(rec.packet_id) +
                          " has negative size");
  }
  const double parts[] = {rec.wait_s, rec.queue_s, rec.transmit_s,
                          rec.propagate_s};
  double sum = 0.0;
  for (double p : parts) {
    if (p < 0.0) {
      throw ValidationError("packet " + std::to_string(rec.packet_id) +
                            " has a negative breakdown component");
    }
    sum += p;
  }
  if (std::abs(sum - total_latency_s(rec)) > kBreakdownTol) {
    char msg[128];
    std::snprintf(msg, sizeof(msg),
                  "packet %llu breakdown sums to %.12g s, total is %.12g s",
                  static_cast<unsigned long long>(rec.packet_id), sum,
                  total_latency_s(rec));
    throw ValidationError(msg);
  }
}

void MetricsStore::record_generated(TrafficClass cls, double bytes) {
  if (bytes < 0.0) throw ValidationError("negative generated byte count");
  totals_[static_cast<int>(cls)].generated += bytes;
}

void MetricsStore::record_dropped(TrafficClass cls, double bytes) {
  if (bytes < 0.0) throw ValidationError("negative dropped byte count");
  ByteTotals& t = totals_[static_cast<int>(cls)];
  if (t.delivered + t.dropped + bytes > t.generated + kByteTol) {
    throw ValidationError("dropping more bytes than were generated");
  }
  t.dropped += bytes;
}

void MetricsStore::record_delivery(const LatencyRecord& rec) {
  validate(rec);
  const int cls = static_cast<int>(rec.cls);
  ByteTotals& t = totals_[cls];
  if (t.delivered + t.dropped + rec.size_bytes > t.generated + kByteTol) {
    throw ValidationError("delivering more bytes than were generated");
  }
  t.delivered += rec.size_bytes;
  latencies_[cls].push_back(total_latency_s(rec));
  if (rec.frame_id >= 0) {
    auto [it, inserted] =
        frame_index_[cls].try_emplace(rec.frame_id, frames_[cls].size());
    if (inserted) {
      frames_[cls].push_back({rec.frame_id, rec.created_s, rec.delivered_s});
    } else {
      FrameLatency& f = frames_[cls][it->second];
      f.created_s = std::min(f.created_s, rec.created_s);
      f.delivered_s = std::max(f.delivered_s, rec.delivered_s);
    }
  }
  if (keep_records_) records_.push_back(rec);
}

const std::vector<double>& MetricsStore::latencies(TrafficClass cls) const {
  return latencies_[static_cast<int>(cls)];
}

const std::vector<FrameLatency>& MetricsStore::frames(TrafficClass cls) const {
  return frames_[static_cast<int>(cls)];
}

std::vector<const LatencyRecord*> MetricsStore::records_of(
    TrafficClass cls) const {
  std::vector<const LatencyRecord*> out;
  for (const LatencyRecord& rec : records_) {
    if (rec.cls == cls) out.push_back(&rec);
  }
  return out;
}

const ByteTotals& MetricsStore::totals(TrafficClass cls) const {
  return totals_[static_cast<int>(cls)];
}

ByteTotals MetricsStore::totals_all() const {
  ByteTotals all;
  for (const ByteTotals& t : totals_) {
    all.generated += t.generated;
    all.delivered += t.delivered;
    all.dropped += t.dropped;
  }
  return all;
}

std::optional<double> jitter_std(const std::vector<double>& latencies_s) {
  const std::size_t n = latencies_s.size();
  if (n < 2) return std::nullopt;
  const double mean = kahan_sum(latencies_s) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : latencies_s) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(n - 1));
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw ValidationError("percentile of an empty sample");
  if (p <= 0.0 || p > 100.0) {
    throw ValidationError("percentile rank must be in (0, 100]");
  }
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
  rank = std::max<std::size_t>(rank, 1);
  return values[rank - 1];
}

ClassSummary summarize(const MetricsStore& store, TrafficClass cls) {
  const std::vector<double>& lat = store.latencies(cls);
  ClassSummary s;
  s.count = lat.size();
  if (lat.empty()) return s;
  s.mean_s = kahan_sum(lat) / static_cast<double>(lat.size());
  s.max_s = *std::max_element(lat.begin(), lat.end());
  s.p50_s = percentile(lat, 50.0);
  s.p95_s = percentile(lat, 95.0);
  s.p99_s = percentile(lat, 99.0);
  s.jitter_std_s = jitter_std(lat);
  return s;
}

const std::vector<FrameLatency>& frame_latencies(const MetricsStore& store,
                                                 TrafficClass cls) {
  return store.frames(cls);
}

QoeReport qoe_report(const MetricsStore& store, const xr::ResolutionClass& res,
                     const RunAccounting& acct) {
  if (acct.duration_s <= 0.0) throw ValidationError("run duration must be positive");
  if (acct.uplink_capacity_bps <= 0.0) {
    throw ValidationError("uplink capacity must be positive");
  }
  if (acct.n_xr_streams <= 0) {
    throw ValidationError("stream count must be positive");
  }

  QoeReport rep;
  rep.resolution_name = res.name;
  rep.duration_s = acct.duration_s;
  rep.xr = summarize(store, TrafficClass::kXr);
  rep.hmd = summarize(store, TrafficClass::kHmd);
  rep.background = summarize(store, TrafficClass::kBackground);
  rep.camera_cmd = summarize(store, TrafficClass::kCameraCmd);
  rep.totals = store.totals_all();

  std::vector<double> frame_lat;
  for (const FrameLatency& f : frame_latencies(store, TrafficClass::kXr)) {
    frame_lat.push_back(f.latency_s());
  }
  rep.frame_count = frame_lat.size();
  if (!frame_lat.empty()) {
    rep.frame_latency_mean_s =
        kahan_sum(frame_lat) / static_cast<double>(frame_lat.size());
    rep.frame_latency_p99_s = percentile(frame_lat, 99.0);
    rep.frame_latency_max_s =
        *std::max_element(frame_lat.begin(), frame_lat.end());
  }

  const ByteTotals& xr_bytes = store.totals(TrafficClass::kXr);
  rep.per_stream_datarate_bps = xr_bytes.delivered * 8.0 / acct.duration_s /
                                static_cast<double>(acct.n_xr_streams);
  rep.offered_load_fraction = rep.totals.generated * 8.0 / acct.duration_s /
                              acct.uplink_capacity_bps;
  rep.carried_load_fraction = rep.totals.delivered * 8.0 / acct.duration_s /
                              acct.uplink_capacity_bps;
  rep.verdict = xr::qoe_classify(res, rep.frame_latency_max_s,
                                 rep.per_stream_datarate_bps);
  return rep;
}

namespace {

nlohmann::json summary_json(const ClassSummary& s) {
  nlohmann::json j{{"count", s.count},        {"mean_s", s.mean_s},
                   {"p50_s", s.p50_s},        {"p95_s", s.p95_s},
                   {"p99_s", s.p99_s},        {"max_s", s.max_s}};
  if (s.jitter_std_s) {
    j["jitter_std_s"] = *s.jitter_std_s;
  } else {
    j["jitter_std_s"] = nullptr;
  }
  return j;
}

}  // namespace

nlohmann::json to_json(const QoeReport& rep) {
  return nlohmann::json{
      {"resolution", rep.resolution_name},
      {"verdict",
       {{"satisfied", rep.verdict.satisfied},
        {"latency_ok", rep.verdict.latency_ok},
        {"datarate_ok", rep.verdict.datarate_ok},
        {"latency_budget_s", rep.verdict.latency_budget_s},
        {"datarate_floor_bps", rep.verdict.datarate_floor_bps}}},
      {"classes",
       {{"xr", summary_json(rep.xr)},
        {"hmd", summary_json(rep.hmd)},
        {"background", summary_json(rep.background)},
        {"camera_cmd", summary_json(rep.camera_cmd)}}},
      {"frames",
       {{"count", rep.frame_count},
        {"mean_s", rep.frame_latency_mean_s},
        {"p99_s", rep.frame_latency_p99_s},
        {"max_s", rep.frame_latency_max_s}}},
      {"per_stream_datarate_bps", rep.per_stream_datarate_bps},
      {"offered_load_fraction", rep.offered_load_fraction},
      {"carried_load_fraction", rep.carried_load_fraction},
      {"duration_s", rep.duration_s},
      {"bytes",
       {{"generated", rep.totals.generated},
        {"delivered", rep.totals.delivered},
        {"dropped", rep.totals.dropped},
        {"in_flight", rep.totals.in_flight()}}}};
}

const char kPacketCsvHeader[] =
    "packet_id,class,frame_id,size_bytes,created_s,delivered_s,wait_s,queue_s,"
    "transmit_s,propagate_s";

void write_packet_csv(const MetricsStore& store, std::ostream& out) {
  if (!store.keep_records() && store.latencies(TrafficClass::kXr).size() +
                                       store.latencies(TrafficClass::kHmd).size() +
                                       store.latencies(TrafficClass::kBackground).size() +
                                       store.latencies(TrafficClass::kCameraCmd).size() >
                                   store.records().size()) {
    throw ValidationError("per-packet records were not kept for this run");
  }
  out << kPacketCsvHeader << '\n';
  for (const LatencyRecord& rec : store.records()) {
    out << rec.packet_id << ',' << class_name(rec.cls) << ',' << rec.frame_id
        << ',' << fmt_g17(rec.size_bytes) << ',' << fmt_g17(rec.created_s)
        << ',' << fmt_g17(rec.delivered_s) << ',' << fmt_g17(rec.wait_s) << ','
        << fmt_g17(rec.queue_s) << ',' << fmt_g17(rec.transmit_s) << ','
        << fmt_g17(rec.propagate_s) << '\n';
  }
}

}  // namespace h2msim::metrics
