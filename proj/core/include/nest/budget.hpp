#pragma once

#include <chrono>
#include <cstdint>
#include <limits>

namespace nest {

/// Search budget for one phase, measured either in wall-clock seconds or in
/// separation iterations. Iteration budgets make runs reproducible
/// independent of machine speed.
class Budget {
 public:
  using Clock = std::chrono::steady_clock;

  static Budget seconds(double s) { return Budget(s, 0); }
  static Budget iterations(std::uint64_t n) { return Budget(0.0, n); }
  static Budget unlimited() { return Budget(std::numeric_limits<double>::infinity(), 0); }

  bool by_iterations() const { return max_iterations_ > 0; }
  bool expired() const { return progress() >= 1.0; }
  void tick() { ++iterations_; }
  std::uint64_t iterations() const { return iterations_; }

  double elapsed_seconds() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

  /// Fraction of the budget spent, in [0, 1].
  double progress() const {
    const double p = by_iterations() ? static_cast<double>(iterations_) / static_cast<double>(max_iterations_)
                                     : elapsed_seconds() / seconds_;
    return p < 1.0 ? p : 1.0;
  }

 private:
  Budget(double s, std::uint64_t n) : seconds_(s), max_iterations_(n), start_(Clock::now()) {}

  double seconds_;
  std::uint64_t max_iterations_;
  std::uint64_t iterations_ = 0;
  Clock::time_point start_;
};

}  // namespace nest
