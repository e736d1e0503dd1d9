#pragma once

#include <cstdint>
#include <queue>
#include <vector>

namespace h2msim::sim {

// One scheduled occurrence. `kind`, `node`, `a`, `b` are owned by the
// handler; the engine only orders and dispatches.
struct Event {
  double time = 0.0;
  std::uint64_t seq = 0;
  int kind = 0;
  std::uint32_t node = 0;
  std::uint64_t a = 0;
  std::uint64_t b = 0;
};

class EventHandler {
 public:
  virtual ~EventHandler() = default;
  virtual void handle(const Event& ev) = 0;
};

// Deterministic discrete-event core. Dequeue order is strictly
// (time, seq) lexicographic; seq is the global schedule counter, so
// same-instant events fire in the order they were scheduled.
class Engine {
 public:
  explicit Engine(EventHandler& handler) : handler_(&handler) {}

  double now() const { return now_; }

  // Scheduling into the past is a hard fault.
  std::uint64_t schedule(double time, int kind, std::uint32_t node = 0,
                         std::uint64_t a = 0, std::uint64_t b = 0);

  // Processes every event with time <= t_end (including events scheduled
  // at the current instant while running); the clock lands on t_end.
  void run_until(double t_end);

  // Drains the queue completely.
  void run_all();

  // Pops and dispatches a single event; false when the queue is empty.
  bool run_one();

  std::size_t pending() const { return queue_.size(); }
  std::uint64_t processed() const { return processed_; }

  // FNV-1a fold over (time bits, seq, kind, node) of every processed
  // event; equal hashes across runs certify an identical event sequence.
  std::uint64_t state_hash() const { return hash_; }

 private:
  struct Later {
    bool operator()(const Event& x, const Event& y) const {
      if (x.time != y.time) return x.time > y.time;
      return x.seq > y.seq;
    }
  };

  void dispatch(const Event& ev);

  EventHandler* handler_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  double now_ = 0.0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t processed_ = 0;
  std::uint64_t hash_ = 1469598103934665603ULL;
};

}  // namespace h2msim::sim
