#include <algorithm>
#include <map>

#include "bratteli/spectra.hpp"

namespace bratteli {

const RatVector& PhaseSchedule::at(std::size_t n) const {
  if (n == 0 || n > rho.size()) {
    throw Error(ErrorCode::out_of_range, "phase schedule has no entry for level " + std::to_string(n));
  }
  return rho[n - 1];
}

PhaseSchedule constant_schedule(std::size_t depth, const RatVector& per_vertex) {
  PhaseSchedule s;
  s.rho.assign(depth, per_vertex);
  return s;
}

namespace {

// lambda^x written as the angle alpha * x (in turns).
Interval turns(const Alpha& alpha, const Rational& x) {
  if (alpha.is_rational()) return Interval(fractional_part(alpha.exact() * x));
  return alpha.interval() * Interval(x);
}

}  // namespace

MartingaleReport martingale_series(const OrderedDiagram& diagram,
                                   const std::vector<MeasureVector>& mus, const Alpha& alpha,
                                   const PhaseSchedule* schedule, std::size_t n_from,
                                   std::size_t n_to, double threshold) {
  if (n_from == 0 || n_from > n_to || n_to + 1 > diagram.depth()) {
    throw Error(ErrorCode::out_of_range, "martingale range needs 1 <= n_from <= n_to < depth");
  }
  std::map<std::size_t, const MeasureVector*> by_level;
  for (const auto& mu : mus) by_level[mu.level] = &mu;
  for (std::size_t n = n_from; n <= n_to + 1; ++n) {
    if (!by_level.count(n)) {
      throw Error(ErrorCode::invalid_argument, "missing measure at level " + std::to_string(n));
    }
  }

  MartingaleReport out;
  out.n_from = n_from;
  out.n_to = n_to;
  out.optimized = schedule == nullptr;
  out.threshold = threshold;

  CleanReport clean = clean_diagnostic(diagram, mus, threshold);
  out.clean_set = clean.kept;

  // J: pairs inside the clean set whose joint mass stays above the threshold
  // over the second half of the range.
  const std::size_t levels = n_to - n_from + 1;
  const std::size_t tail_start = n_from + levels / 2;
  for (std::size_t l : clean.kept) {
    for (std::size_t k : clean.kept) {
      bool keep = true;
      for (std::size_t n = tail_start; n <= n_to; ++n) {
        if (l >= diagram.rank(n) || k >= diagram.rank(n + 1)) {
          keep = false;
          break;
        }
        Interval mass = joint_mass(diagram, *by_level[n + 1], l, k);
        if (mass.upper_double() < threshold) keep = false;
      }
      if (keep) out.J.emplace_back(l, k);
    }
  }
  if (out.J.empty()) {
    throw Error(ErrorCode::not_clean, "no vertex pair carries joint mass above the threshold");
  }

  for (std::size_t n = n_from; n <= n_to; ++n) {
    IntVector h = diagram.heights(n);
    const IntMatrix& m = diagram.matrix(n + 1);
    Interval level_max(0L);
    std::vector<Interval> pair_terms;
    for (auto [l, k] : out.J) {
      const BigInt& count = m.at(k, l);
      if (count == 0) {
        pair_terms.emplace_back(0L);
        continue;
      }
      // <s, H(n)> for every occurrence of l, reading the word from the end.
      std::vector<BigInt> exponents;
      const Word& w = diagram.word(n + 1, k);
      BigInt acc = 0;
      for (std::size_t pos = w.size(); pos-- > 0;) {
        if (w[pos] == l) exponents.push_back(acc);
        acc += h[w[pos]];
      }
      Interval term(0L);
      if (schedule) {
        const Rational shift = schedule->at(n)[l] - schedule->at(n + 1)[k];
        for (const auto& e : exponents) {
          term += Interval(2L) - Interval(2L) * Interval::cos_2pi(turns(alpha, Rational(e) + shift));
        }
        term /= Interval(count);
      } else {
        Interval c(0L), s(0L);
        for (const auto& e : exponents) {
          Interval t = turns(alpha, Rational(e));
          c += Interval::cos_2pi(t);
          s += Interval::sin_2pi(t);
        }
        Interval r = Interval::sqrt(c.pow(2) + s.pow(2)) / Interval(count);
        term = Interval(2L) - Interval(2L) * r;
      }
      level_max = Interval::max(level_max, term);
      pair_terms.push_back(term);
    }
    out.terms.push_back(level_max);
    out.pair_terms.push_back(std::move(pair_terms));
  }
  return out;
}

}  // namespace bratteli
