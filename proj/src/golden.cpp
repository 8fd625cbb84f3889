#include <algorithm>

#include "bratteli/constructions.hpp"
#include "detail/linear_form.hpp"

namespace bratteli {

using detail::LinearForm;
using detail::to_long;

GoldenData golden_data() {
  GoldenData g;
  g.phi = golden_ratio();
  g.c = Interval::sqrt(Interval(1L) + g.phi * g.phi);
  g.e_u = {g.phi / g.c, Interval(1L) / g.c};
  g.e_s = {Interval(-1L) / g.c, g.phi / g.c};
  return g;
}

IntMatrix golden_matrix() { return IntMatrix{{1, 1}, {1, 0}}; }

IntMatrix golden_power(unsigned long k) {
  IntMatrix result = IntMatrix::identity(2);
  IntMatrix base = golden_matrix();
  while (k) {
    if (k & 1) result = result * base;
    base = base * base;
    k >>= 1;
  }
  return result;
}

std::vector<LatticePoint> lattice_candidates(const Interval& bound, const GoldenData& golden,
                                             std::size_t count, std::size_t b_cap) {
  if (!bound.certainly_positive()) throw Error(ErrorCode::invalid_argument, "lattice bound must be positive");
  if (count == 0) return {};
  std::vector<LatticePoint> best;
  auto worse = [](const LatticePoint& x, const LatticePoint& y) {
    // Distinct lattice points have distinct t (phi is irrational).
    if (x.t.certainly_less(y.t)) return false;
    if (y.t.certainly_less(x.t)) return true;
    return x.zbar > y.zbar;
  };
  for (std::size_t b = 0; b < b_cap; ++b) {
    // t >= b (phi^2 + 1) / c = b c for every admissible a.
    if (best.size() == count && best.back().t.certainly_less(Interval(BigInt(b)) * golden.c)) {
      return best;
    }
    Interval bphi = Interval(BigInt(b)) * golden.phi;
    BigInt fl = bphi.floor_lower();
    if (b != 0 && (bphi.upper_rational() >= Rational(fl + 1))) {
      throw Error(ErrorCode::precision_exhausted, "cannot separate b*phi from an integer");
    }
    for (BigInt a = fl + 1;; ++a) {
      Interval s = (Interval(a) - bphi) / golden.c;
      if (!s.certainly_less(bound)) break;
      if (!s.certainly_positive()) continue;
      LatticePoint pt{{a, BigInt(b)}, (Interval(a) * golden.phi + Interval(BigInt(b))) / golden.c, s};
      best.push_back(std::move(pt));
      std::sort(best.begin(), best.end(), [&](const LatticePoint& x, const LatticePoint& y) {
        return worse(y, x);
      });
      if (best.size() > count) best.pop_back();
    }
  }
  if (best.size() < count) {
    throw Error(ErrorCode::cap_exceeded, "lattice search exhausted its cap");
  }
  return best;
}

LatticePoint lattice_step(const Interval& bound, const GoldenData& golden, std::size_t b_cap) {
  return lattice_candidates(bound, golden, 1, b_cap).front();
}

BestOrderWord best_ordering(const IntervalVector& w, const IntVector& h, bool compat) {
  if (w.size() != 2 || h.size() != 2) throw Error(ErrorCode::invalid_argument, "best ordering is two-dimensional");
  if (!w[1].certainly_nonnegative()) throw Error(ErrorCode::invalid_argument, "best ordering needs w_2 >= 0");
  const long h1 = to_long(h[0]), h2 = to_long(h[1]);
  if (h1 <= 0 || h2 <= 0) throw Error(ErrorCode::invalid_argument, "best ordering needs positive h");
  // Slope condition |w1| h1 < h2 w2.
  if (!(w[0].abs() * Interval(h1)).certainly_less(Interval(h2) * w[1])) {
    throw Error(ErrorCode::invalid_argument, "best ordering needs |w1|/|w2| < h2/h1");
  }

  BestOrderWord out;
  out.w = w;
  out.h = h;
  out.compat = compat;
  LinearForm form(w);
  const long l = h1 + h2;
  out.p.reserve(static_cast<std::size_t>(l) + (compat ? 1 : 0));
  long c1 = 0, c2 = 0;
  long first_one = -1;
  for (long i = 0; i < l; ++i) {
    const int sg = form.sign(c1 - h1, c2 - h2);
    if (sg == 0) throw Error(ErrorCode::precision_exhausted, "sign of <S - h, w> undecided");
    Letter next = sg > 0 ? 0 : 1;
    if (next == 0) {
      ++c1;
      if (first_one < 0) first_one = i + 1;
    } else {
      ++c2;
    }
    out.p.push_back(next);
  }
  if (c1 != h1 || c2 != h2) {
    throw Error(ErrorCode::invalid_argument, "best ordering letter counts differ from h");
  }
  out.K = first_one - 2;

  // K(p) <= h2 + sign(w1) f h1.
  Interval f = w[0].abs() / w[1];
  Interval fh = f * Interval(h1);
  if (w[0].certainly_negative()) {
    out.k_bound = Interval(h2) - fh;
  } else if (w[0].certainly_positive()) {
    out.k_bound = Interval(h2) + fh;
  } else {
    out.k_bound = Interval::hull(Interval(h2) - fh, Interval(h2) + fh);
  }
  out.k_bound_ok = Interval(out.K).certainly_less_equal(out.k_bound);

  // Tail sums over j = l down to K + 1 (1-based).
  const Interval norm = max_norm(w);
  const double norm_lo = norm.lower_double(), norm_hi = norm.upper_double();
  long t1 = 0, t2 = 0;
  long arg1 = 0, arg2 = 0;
  double best = -1;
  out.tail_ok = true;
  for (long j = l; j >= 1; --j) {
    if (out.p[static_cast<std::size_t>(j - 1)] == 0) ++t1; else ++t2;
    if (j == out.K) out.tail_at_K = form.exact(t1, t2).abs();
    if (j < out.K + 1) continue;
    const int cmp = form.compare_abs(t1, t2, norm, norm_lo, norm_hi);
    if (cmp == 0) throw Error(ErrorCode::precision_exhausted, "comparison with ||w|| undecided");
    if (cmp > 0) out.tail_ok = false;
    double err = 0;
    double v = std::fabs(form.approx(t1, t2, err));
    if (v > best) {
      best = v;
      arg1 = t1;
      arg2 = t2;
    }
  }
  out.tail_max = form.exact(arg1, arg2).abs();

  if (compat) {
    out.p.push_back(0);
    IntVector expect{h[0] + 1, h[1]};
    if (letter_counts(out.p, 2) != expect) {
      throw Error(ErrorCode::invalid_argument, "compatibility word counts differ from h + e_1");
    }
  }
  return out;
}

}  // namespace bratteli
