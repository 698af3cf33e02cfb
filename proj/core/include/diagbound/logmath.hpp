#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace diagbound {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

/// log(exp(a) + exp(b)) without overflow; either argument may be log(0).
inline double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kLogZero) return a;
  return a + std::log1p(std::exp(b - a));
}

/// log(exp(a) - exp(b)) for b <= a. Returns log(0) when b >= a.
inline double log_sub(double a, double b) {
  if (b == kLogZero) return a;
  if (b >= a) return kLogZero;
  return a + std::log(-std::expm1(b - a));
}

/// log(1 + exp(x)).
inline double log1p_exp(double x) {
  if (x == kLogZero) return 0.0;
  if (x > 35.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

inline double log_sum_exp(std::span<const double> values) {
  if (values.empty()) return kLogZero;
  double peak = *std::max_element(values.begin(), values.end());
  if (peak == kLogZero || !std::isfinite(peak)) return peak;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - peak);
  return peak + std::log(sum);
}

/// Running log-space sum. Additions only.
class LogAccumulator {
 public:
  void add(double log_value) { total_ = log_add(total_, log_value); }
  double log_total() const { return total_; }

 private:
  double total_ = kLogZero;
};

/// Log-space sums over slots that can be set and cleared individually.
///
/// Each internal node holds log_add of its children, so clearing a slot that
/// dominated the sum leaves the remainder exact to rounding, which a running
/// subtract would not.
class LogSumTree {
 public:
  void assign(std::size_t slot, double log_value) {
    ensure(slot + 1);
    std::size_t i = slot + capacity_;
    tree_[i] = log_value;
    for (i >>= 1; i >= 1; i >>= 1) tree_[i] = log_add(tree_[2 * i], tree_[2 * i + 1]);
  }
  void clear(std::size_t slot) {
    if (slot < capacity_) assign(slot, kLogZero);
  }
  double log_total() const { return capacity_ == 0 ? kLogZero : tree_[1]; }

 private:
  void ensure(std::size_t size) {
    if (size <= capacity_) return;
    std::size_t cap = std::max<std::size_t>(capacity_, 64);
    while (cap < size) cap *= 2;
    std::vector<double> next(2 * cap, kLogZero);
    for (std::size_t s = 0; s < capacity_; ++s) next[cap + s] = tree_[capacity_ + s];
    capacity_ = cap;
    tree_ = std::move(next);
    for (std::size_t i = capacity_ - 1; i >= 1; --i)
      tree_[i] = log_add(tree_[2 * i], tree_[2 * i + 1]);
  }

  std::size_t capacity_ = 0;
  std::vector<double> tree_;
};

}  // namespace diagbound
