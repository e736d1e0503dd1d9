#include "h2msim/sim/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace h2msim::sim {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) {
  std::uint64_t state = seed;
  splitmix64(state);
  state ^= 0xd1b54a32d192ed03ULL * (stream_id + 1);
  gen_.seed(splitmix64(state));
}

double RngStream::uniform01() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

double RngStream::normal(double mean, double std_dev) {
  if (has_spare_) {
    has_spare_ = false;
    return mean + std_dev * spare_;
  }
  const double u1 = 1.0 - uniform01();  // (0, 1]
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return mean + std_dev * r * std::cos(theta);
}

double RngStream::normal_at_least(double mean, double std_dev, double floor) {
  for (int i = 0; i < 1000000; ++i) {
    const double v = normal(mean, std_dev);
    if (v >= floor) return v;
  }
  throw std::runtime_error("RngStream::normal_at_least: floor rejects nearly all mass");
}

double RngStream::gamma(double shape, double scale) {
  if (shape <= 0.0 || scale <= 0.0) {
    throw std::invalid_argument("RngStream::gamma: shape and scale must be positive");
  }
  if (shape < 1.0) {
    const double boost = std::pow(uniform01(), 1.0 / shape);
    return gamma(shape + 1.0, scale) * boost;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = normal(0.0, 1.0);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
      return d * v * scale;
    }
  }
}

double RngStream::exponential(double mean) {
  if (mean <= 0.0) {
    throw std::invalid_argument("RngStream::exponential: mean must be positive");
  }
  return -mean * std::log(1.0 - uniform01());
}

double RngStream::pareto(double shape, double x_m) {
  if (shape <= 0.0 || x_m <= 0.0) {
    throw std::invalid_argument("RngStream::pareto: shape and x_m must be positive");
  }
  return x_m * std::pow(1.0 - uniform01(), -1.0 / shape);
}

}  // namespace h2msim::sim
