#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace mmapgame {

// Seeded generator with platform-stable integer and unit-interval draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, n); n > 0.
  std::size_t below(std::size_t n) { return next() % n; }

  // Uniform double in [0, 1).
  double unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {  // inclusive
    return lo + static_cast<std::int64_t>(below(
                    static_cast<std::size_t>(hi - lo + 1)));
  }

  bool chance(double p) { return unit() < p; }

  // Dirichlet(alpha, ..., alpha) sample of the given size.
  std::vector<double> dirichlet(double alpha, std::size_t size) {
    std::gamma_distribution<double> gamma(alpha, 1.0);
    std::vector<double> out(size);
    double sum = 0.0;
    for (double& x : out) {
      x = gamma(engine_);
      sum += x;
    }
    if (sum <= 0.0) {
      for (double& x : out) x = 1.0 / static_cast<double>(size);
    } else {
      for (double& x : out) x /= sum;
    }
    return out;
  }

  int poisson(double mean) {
    if (mean <= 0.0) return 0;
    std::poisson_distribution<int> dist(mean);
    return dist(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mmapgame
