#include "bratteli/measures.hpp"

#include <algorithm>
#include <numeric>

namespace bratteli {

MeasureVector measure_from_rationals(std::size_t level, const RatVector& values) {
  MeasureVector mu;
  mu.level = level;
  mu.values = to_intervals(values);
  mu.exact = values;
  return mu;
}

MeasureSetReport measure_candidates(const OrderedDiagram& diagram, std::size_t m, std::size_t N,
                                    double tol) {
  if (m == 0 || m > N || N > diagram.depth()) {
    throw Error(ErrorCode::out_of_range, "measure_candidates needs 1 <= m <= N <= depth");
  }
  if (!(tol > 0)) throw Error(ErrorCode::invalid_argument, "tolerance must be positive");
  MeasureSetReport report;
  report.level = m;
  report.horizon = N;
  report.tolerance = tol;
  IntMatrix p = diagram.product(m, N);
  IntVector h_top = diagram.heights(N);
  const std::size_t d = p.rows();
  for (std::size_t k = 0; k < d; ++k) {
    IntVector row = p.row(k);  // column k of P^T
    if (std::all_of(row.begin(), row.end(), [](const BigInt& x) { return x == 0; })) {
      throw Error(ErrorCode::invalid_diagram, "degenerate candidate: zero row in P(N,m)");
    }
    RatVector c(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) {
      c[i] = Rational(row[i], h_top[k]);
      c[i].canonicalize();
    }
    report.candidates.push_back(std::move(c));
  }

  // Pairwise max-norm distances.
  std::vector<std::vector<Rational>> dist(d, std::vector<Rational>(d, Rational(0)));
  report.diameter = 0;
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a + 1; b < d; ++b) {
      Rational best = 0;
      for (std::size_t i = 0; i < report.candidates[a].size(); ++i) {
        best = std::max(best, Rational(abs(report.candidates[a][i] - report.candidates[b][i])));
      }
      dist[a][b] = dist[b][a] = best;
      report.diameter = std::max(report.diameter, best);
    }
  }

  // Single-linkage clustering by union-find; roots are the smallest index.
  std::vector<std::size_t> parent(d);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  const Rational threshold(tol);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a + 1; b < d; ++b) {
      if (dist[a][b] < threshold) {
        std::size_t ra = find(a), rb = find(b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
      }
    }
  }
  std::vector<std::vector<std::size_t>> groups(d);
  for (std::size_t k = 0; k < d; ++k) groups[find(k)].push_back(k);
  for (auto& g : groups)
    if (!g.empty()) report.clusters.push_back(std::move(g));
  report.unique_ergodicity = report.diameter < threshold;
  return report;
}

MeasureVector certified_measure(const MeasureSetReport& report) {
  const auto& cs = report.candidates;
  if (cs.empty()) throw Error(ErrorCode::invalid_argument, "no candidates");
  if (report.diameter == 0) return measure_from_rationals(report.level, cs.front());
  MeasureVector mu;
  mu.level = report.level;
  for (std::size_t i = 0; i < cs.front().size(); ++i) {
    Rational lo = cs.front()[i], hi = cs.front()[i];
    for (const auto& c : cs) {
      lo = std::min(lo, c[i]);
      hi = std::max(hi, c[i]);
    }
    mu.values.emplace_back(lo, hi);
  }
  return mu;
}

std::vector<MeasureVector> measure_sequence(const OrderedDiagram& diagram, const MeasureVector& top) {
  const std::size_t N = top.level;
  if (N == 0 || N > diagram.depth()) throw Error(ErrorCode::out_of_range, "measure level out of range");
  std::vector<MeasureVector> out(N);
  out[N - 1] = top;
  for (std::size_t n = N - 1; n >= 1; --n) {
    const IntMatrix mt = diagram.matrix(n + 1).transpose();
    MeasureVector& mu = out[n - 1];
    const MeasureVector& above = out[n];
    mu.level = n;
    if (above.exact) {
      mu.exact = mt.apply(*above.exact);
      mu.values = to_intervals(*mu.exact);
    } else {
      mu.values = mt.apply(above.values);
    }
  }
  return out;
}

bool satisfies_relation(const OrderedDiagram& diagram, const MeasureVector& lower,
                        const MeasureVector& upper) {
  if (upper.level != lower.level + 1) return false;
  const IntMatrix mt = diagram.matrix(upper.level).transpose();
  if (lower.exact && upper.exact) return mt.apply(*upper.exact) == *lower.exact;
  IntervalVector pushed = mt.apply(upper.values);
  for (std::size_t i = 0; i < pushed.size(); ++i)
    if (!pushed[i].overlaps(lower.values[i])) return false;
  return true;
}

bool is_normalized(const OrderedDiagram& diagram, const MeasureVector& mu) {
  IntVector h = diagram.heights(mu.level);
  if (mu.exact) {
    RatVector hr(h.begin(), h.end());
    return dot(hr, *mu.exact) == 1;
  }
  return dot(h, mu.values).contains(Rational(1));
}

Interval tower_mass(const OrderedDiagram& diagram, const MeasureVector& mu, std::size_t k) {
  IntVector h = diagram.heights(mu.level);
  if (k >= h.size()) throw Error(ErrorCode::out_of_range, "vertex out of range");
  return Interval(h[k]) * mu.values[k];
}

Interval joint_mass(const OrderedDiagram& diagram, const MeasureVector& mu_next, std::size_t l,
                    std::size_t k) {
  const std::size_t n1 = mu_next.level;
  if (n1 < 2) throw Error(ErrorCode::out_of_range, "joint mass needs mu at level >= 2");
  const IntMatrix& m = diagram.matrix(n1);
  IntVector h = diagram.heights(n1 - 1);
  return Interval(BigInt(m.at(k, l) * h[l])) * mu_next.values[k];
}

CleanReport clean_diagnostic(const OrderedDiagram& diagram, const std::vector<MeasureVector>& mus,
                             double threshold) {
  if (mus.empty()) throw Error(ErrorCode::invalid_argument, "no measures supplied");
  CleanReport report;
  report.threshold = threshold;
  const std::size_t d = mus.back().values.size();
  report.masses.assign(d, {});
  for (const auto& mu : mus) {
    if (mu.values.size() != d) continue;  // levels of a different rank are skipped
    for (std::size_t k = 0; k < d; ++k) {
      report.masses[k].push_back(tower_mass(diagram, mu, k).upper_double());
    }
  }
  for (std::size_t k = 0; k < d; ++k) {
    const auto& ms = report.masses[k];
    const std::size_t start = ms.size() / 2;
    double tail_min = ms.empty() ? 0.0 : ms[start];
    for (std::size_t i = start; i < ms.size(); ++i) tail_min = std::min(tail_min, ms[i]);
    double sum = std::accumulate(ms.begin(), ms.end(), 0.0);
    std::size_t ratios = 0;
    bool decaying = true;
    for (std::size_t i = std::max<std::size_t>(start, 1); i < ms.size(); ++i) {
      if (ms[i - 1] <= 0) continue;
      ++ratios;
      if (ms[i] / ms[i - 1] >= 0.5) decaying = false;
    }
    decaying = decaying && ratios >= 2;
    report.tail_minimum.push_back(tail_min);
    report.partial_sums.push_back(sum);
    report.geometric_decay.push_back(decaying);
    if (tail_min >= threshold && !decaying) {
      report.kept.push_back(k);
    } else {
      report.discarded.push_back(k);
    }
  }
  return report;
}

}  // namespace bratteli
