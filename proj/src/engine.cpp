#include "h2msim/sim/engine.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace h2msim::sim {

std::uint64_t Engine::schedule(double time, int kind, std::uint32_t node,
                               std::uint64_t a, std::uint64_t b) {
  if (!std::isfinite(time)) {
    throw std::logic_error("Engine::schedule: non-finite time");
  }
  if (time < now_) {
    throw std::logic_error("Engine::schedule: time " + std::to_string(time) +
                           " is before now " + std::to_string(now_));
  }
  const std::uint64_t seq = next_seq_++;
  queue_.push(Event{time, seq, kind, node, a, b});
  return seq;
}

void Engine::dispatch(const Event& ev) {
  now_ = ev.time;
  ++processed_;
  auto fold = [this](std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      hash_ ^= (word >> (8 * i)) & 0xffULL;
      hash_ *= 1099511628211ULL;
    }
  };
  fold(std::bit_cast<std::uint64_t>(ev.time));
  fold(ev.seq);
  fold(static_cast<std::uint64_t>(ev.kind) << 32 | ev.node);
  handler_->handle(ev);
}

void Engine::run_until(double t_end) {
  if (t_end < now_) {
    throw std::logic_error("Engine::run_until: t_end is before now");
  }
  while (!queue_.empty() && queue_.top().time <= t_end) {
    Event ev = queue_.top();
    queue_.pop();
    dispatch(ev);
  }
  now_ = t_end;
}

void Engine::run_all() {
  while (run_one()) {
  }
}

bool Engine::run_one() {
  if (queue_.empty()) return false;
  Event ev = queue_.top();
  queue_.pop();
  dispatch(ev);
  return true;
}

}  // namespace h2msim::sim
