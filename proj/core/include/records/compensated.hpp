#pragma once

#include <cmath>

namespace records {

/// Neumaier (improved Kahan-Babuska) running sum.
class NeumaierSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) comp_ += (sum_ - t) + x;
    else comp_ += (x - t) + sum_;
    sum_ = t;
  }

  NeumaierSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

  void merge(const NeumaierSum& other) noexcept {
    add(other.sum_);
    add(other.comp_);
  }

  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace records
