#pragma once

#include <cfloat>
#include <cmath>

#include "bratteli/numeric.hpp"

namespace bratteli::detail {

// x1 w1 + x2 w2 for integer x with a floating-point fast path whose error is
// bounded rigorously; falls back to interval arithmetic near the decision
// boundary.
class LinearForm {
 public:
  explicit LinearForm(const IntervalVector& w) : w_(w) {
    for (int i = 0; i < 2; ++i) {
      d_[i] = w[i].mid_double();
      double lo = w[i].lower_double(), hi = w[i].upper_double();
      e_[i] = std::max(std::fabs(hi - d_[i]), std::fabs(d_[i] - lo)) * (1 + 4 * DBL_EPSILON) + DBL_MIN;
    }
  }

  double approx(long x1, long x2, double& err) const {
    const double a = static_cast<double>(x1) * d_[0];
    const double b = static_cast<double>(x2) * d_[1];
    err = (std::fabs(static_cast<double>(x1)) * e_[0] + std::fabs(static_cast<double>(x2)) * e_[1] +
           4 * DBL_EPSILON * (std::fabs(a) + std::fabs(b))) * 1.01 + 4 * DBL_MIN;
    return a + b;
  }

  Interval exact(long x1, long x2) const { return Interval(x1) * w_[0] + Interval(x2) * w_[1]; }

  // +1 if certainly > 0, -1 if certainly <= 0, 0 if undecided.
  int sign(long x1, long x2) const {
    double err = 0;
    double v = approx(x1, x2, err);
    if (v > err) return 1;
    if (v < -err) return -1;
    Interval iv = exact(x1, x2);
    if (iv.certainly_positive()) return 1;
    if (mpfr_sgn(iv.hi()) <= 0) return -1;
    return 0;
  }

  // +1 if x.w certainly > bound, -1 if certainly <= bound, 0 if undecided.
  int compare(long x1, long x2, const Interval& bound, double bound_lo, double bound_hi) const {
    double err = 0;
    double v = approx(x1, x2, err);
    if (v + err <= bound_lo) return -1;
    if (v - err > bound_hi) return 1;
    Interval iv = exact(x1, x2);
    if (iv.certainly_less_equal(bound)) return -1;
    if (bound.certainly_less(iv)) return 1;
    return 0;
  }

  // The same comparison for |x.w|.
  int compare_abs(long x1, long x2, const Interval& bound, double bound_lo, double bound_hi) const {
    double err = 0;
    double v = std::fabs(approx(x1, x2, err));
    if (v + err <= bound_lo) return -1;
    if (v - err > bound_hi) return 1;
    Interval iv = exact(x1, x2).abs();
    if (iv.certainly_less_equal(bound)) return -1;
    if (bound.certainly_less(iv)) return 1;
    return 0;
  }

 private:
  const IntervalVector& w_;
  double d_[2];
  double e_[2];
};

// Conversion of a word-length quantity to long, refusing values past 2^52.
inline long to_long(const BigInt& x) {
  if (!x.fits_slong_p() || abs(x) > (BigInt(1) << 52)) {
    throw Error(ErrorCode::cap_exceeded, "word length exceeds the supported range");
  }
  return x.get_si();
}

}  // namespace bratteli::detail
