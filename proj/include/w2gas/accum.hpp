// Neumaier-compensated accumulation for moment sums and transport costs.
#pragma once

#include <cmath>
#include <cstddef>

namespace w2gas {

class Kahan {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

template <class Range, class Fn>
double compensated_sum(const Range& range, Fn&& term) {
  Kahan acc;
  for (const auto& x : range) acc.add(term(x));
  return acc.value();
}

inline double compensated_mean(const double* data, std::size_t n) {
  Kahan acc;
  for (std::size_t i = 0; i < n; ++i) acc.add(data[i]);
  return n ? acc.value() / static_cast<double>(n) : 0.0;
}

}  // namespace w2gas
