#pragma once

#include <cstdint>
#include <random>

namespace h2msim::sim {

// Seeded random stream. Every consumer gets its own (seed, stream_id)
// pair so event interleaving cannot perturb draw sequences. All samplers
// are implemented on top of raw 64-bit draws, keeping sequences identical
// across standard libraries.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64() { return gen_(); }

  // [0, 1), 53-bit resolution.
  double uniform01();
  double uniform(double lo, double hi);

  // Box-Muller with cached spare.
  double normal(double mean, double std_dev);

  // Normal draw resampled until >= floor (floor must sit well below the
  // mean; the loop is a guard, not a shaping device).
  double normal_at_least(double mean, double std_dev, double floor);

  // Marsaglia-Tsang; shape < 1 handled via the boost trick.
  double gamma(double shape, double scale);

  double exponential(double mean);

  // Pareto with scale x_m and tail index `shape`; mean exists for shape > 1.
  double pareto(double shape, double x_m);

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace h2msim::sim
