#pragma once

#include <cmath>

namespace secrelay {

/// C(n, k) via the multiplicative recurrence, evaluated in double.
/// Exact to within ~1e-14 relative for n <= 64 and avoids factorial
/// overflow.
double binomial_coefficient(int n, int k);

/// Neumaier-compensated accumulator for alternating sums that would
/// otherwise lose digits to cancellation.
class NeumaierSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Standard normal quantile, full double precision (rational approximation
/// polished by one Halley step against erfc). Requires 0 < p < 1.
double normal_quantile(double p);

}  // namespace secrelay
