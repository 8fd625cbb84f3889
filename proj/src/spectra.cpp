#include "bratteli/spectra.hpp"

#include <algorithm>
#include <cmath>

namespace bratteli {

// ---------------------------------------------------------------------------
// Alpha

Alpha Alpha::rational(const Rational& value) {
  Alpha a;
  a.exact_ = value;
  a.exact_->canonicalize();
  return a;
}

Alpha Alpha::real(const Interval& value) {
  Alpha a;
  a.real_ = value;
  return a;
}

const Rational& Alpha::exact() const {
  if (!exact_) throw Error(ErrorCode::invalid_argument, "alpha is not rational");
  return *exact_;
}

Interval Alpha::interval() const {
  if (exact_) return Interval(*exact_);
  return *real_;
}

std::string Alpha::describe() const {
  if (exact_) return exact_->get_str();
  return "[" + real_->lower_string(30) + ", " + real_->upper_string(30) + "]";
}

Interval golden_ratio() {
  return (Interval(1L) + Interval::sqrt(Interval(5L))) / Interval(2L);
}

Alpha parse_alpha(const std::string& text) {
  const std::string prefix = "real:";
  if (text.rfind(prefix, 0) != 0) return Alpha::rational(parse_rational(text));
  const std::string body = text.substr(prefix.size());
  if (body == "1/phi") return Alpha::real(Interval(1L) / golden_ratio());
  if (body == "phi") return Alpha::real(golden_ratio());
  Rational center = parse_rational(body);
  auto dot = body.find('.');
  std::size_t digits = dot == std::string::npos ? 0 : body.size() - dot - 1;
  BigInt unit;
  mpz_ui_pow_ui(unit.get_mpz_t(), 10, digits);
  Rational slack(BigInt(1), unit);
  return Alpha::real(Interval(center - slack, center + slack));
}

// ---------------------------------------------------------------------------
// Continuous-eigenvalue tests

namespace {

// Distance of r/b to the nearest integer, for 0 <= r < b.
Rational residue_distance(const BigInt& r, const BigInt& b) {
  BigInt other = b - r;
  return Rational(std::min(r, other), b);
}

BigInt mod_nonneg(const BigInt& x, const BigInt& b) {
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), b.get_mpz_t());
  return r;
}

// Rounds every component, or nothing when some component is ambiguous.
std::optional<IntVector> round_vector(const Alpha& alpha, const IntVector& h) {
  IntVector w;
  w.reserve(h.size());
  if (alpha.is_rational()) {
    for (const auto& x : h) {
      Rational y = alpha.exact() * Rational(x);
      Rational shifted = y + Rational(1, 2);
      BigInt f;
      mpz_fdiv_q(f.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
      if (Rational(f) == shifted) return std::nullopt;  // exactly half-way
      w.push_back(f);
    }
    return w;
  }
  Interval a = alpha.interval();
  for (const auto& x : h) {
    auto r = (a * Interval(x)).unique_round();
    if (!r) return std::nullopt;
    w.push_back(*r);
  }
  return w;
}

IntervalVector alpha_times(const Alpha& alpha, const IntVector& h) {
  if (alpha.is_rational()) {
    IntervalVector out;
    for (const auto& x : h) out.emplace_back(alpha.exact() * Rational(x));
    return out;
  }
  return scale(alpha.interval(), h);
}

// Unique rational solution of A x = b for square invertible A, if any.
std::optional<RatVector> solve_square(const IntMatrix& a, const IntVector& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n) return std::nullopt;
  std::vector<RatVector> rows(n, RatVector(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) rows[i][j] = Rational(a.at(i, j));
    rows[i][n] = Rational(b[i]);
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && rows[p][c] == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(rows[c], rows[p]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || rows[i][c] == 0) continue;
      Rational f = rows[i][c] / rows[c][c];
      for (std::size_t j = c; j <= n; ++j) rows[i][j] -= f * rows[c][j];
    }
  }
  RatVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rows[i][n] / rows[i][i];
  return x;
}

}  // namespace

Interval alpha_height_distance(const OrderedDiagram& diagram, const Alpha& alpha, std::size_t n) {
  IntVector h = diagram.heights(n);
  if (alpha.is_rational()) {
    const Rational& q = alpha.exact();
    Rational best = 0;
    for (const auto& x : h) {
      best = std::max(best, residue_distance(mod_nonneg(q.get_num() * x, q.get_den()), q.get_den()));
    }
    return Interval(best);
  }
  return nearest_integer_distance(scale(alpha.interval(), h));
}

SeriesReport continuous_necessary_series(const OrderedDiagram& diagram, const Alpha& alpha,
                                         std::size_t N) {
  if (N == 0 || N > diagram.depth()) throw Error(ErrorCode::out_of_range, "series horizon out of range");
  SeriesReport report;
  Interval sum(0L);
  for (std::size_t n = 1; n <= N; ++n) {
    Interval t = alpha_height_distance(diagram, alpha, n);
    if (alpha.is_rational()) report.exact_terms.push_back(t.lower_rational());
    sum += t;
    report.terms.push_back(t);
    report.partial_sums.push_back(sum);
  }
  if (alpha.is_rational() && report.exact_terms.back() == 0) {
    // b | h_k(N) for all k forces b | h_k(n) for every n >= N.
    report.classification = "plausibly-summable";
    report.exact = true;
    return report;
  }
  const std::size_t window = std::min<std::size_t>(4, N - 1);
  if (window == 0) {
    report.classification = "inconclusive";
    return report;
  }
  double ratio_sum = 0;
  std::size_t ratios = 0;
  for (std::size_t i = N - window; i < N; ++i) {
    double prev = report.terms[i - 1].upper_double();
    double cur = report.terms[i].upper_double();
    if (prev > 0) {
      ratio_sum += cur / prev;
      ++ratios;
    }
  }
  const double last = report.terms.back().upper_double();
  const double ratio = ratios ? ratio_sum / static_cast<double>(ratios) : 1.0;
  if (last == 0 || ratio < 0.95) {
    report.classification = "plausibly-summable";
  } else if (ratio >= 0.999 && last > 1e-3) {
    report.classification = "diverging";
  } else {
    report.classification = "inconclusive";
  }
  return report;
}

UniformReport uniform_convergence_test(const OrderedDiagram& diagram, const Alpha& alpha,
                                       std::size_t n0, std::size_t N, std::size_t cap) {
  if (n0 >= N || N > diagram.depth()) {
    throw Error(ErrorCode::out_of_range, "uniform test needs n0 < N <= depth");
  }
  std::size_t letters = 0;
  for (std::size_t k = n0; k < N; ++k) {
    for (std::size_t j = 0; j < diagram.rank(k + 1); ++j) letters += diagram.word(k + 1, j).size();
  }
  if (letters > cap) throw Error(ErrorCode::cap_exceeded, "suffix enumeration exceeds cap");

  UniformReport report;
  report.n0 = n0;
  report.N = N;
  if (alpha.is_rational()) {
    report.exact = true;
    report.exact_worst_tail = 0;
    const Rational& q = alpha.exact();
    const BigInt& b = q.get_den();
    for (std::size_t k = n0; k < N; ++k) {
      IntVector h = diagram.heights(k);
      IntVector c(h.size());
      for (std::size_t i = 0; i < h.size(); ++i) c[i] = mod_nonneg(q.get_num() * h[i], b);
      BigInt best = 0;  // best value of min(r, b - r)
      for (std::size_t j = 0; j < diagram.rank(k + 1); ++j) {
        const Word& w = diagram.word(k + 1, j);
        BigInt acc = 0;
        for (std::size_t pos = w.size(); pos-- > 0;) {
          best = std::max(best, std::min(acc, BigInt(b - acc)));
          acc += c[w[pos]];
          if (acc >= b) acc -= b;
        }
      }
      Rational level(best, b);
      level.canonicalize();
      report.exact_level_max.push_back(level);
      report.exact_worst_tail += level;
      report.level_max.emplace_back(level);
    }
    report.worst_tail = Interval(report.exact_worst_tail);
    return report;
  }

  Interval a = alpha.interval();
  Interval total(0L);
  for (std::size_t k = n0; k < N; ++k) {
    IntervalVector c;
    for (const auto& x : diagram.heights(k)) c.push_back(reduce_mod_one(a * Interval(x)));
    Interval best(0L);
    for (std::size_t j = 0; j < diagram.rank(k + 1); ++j) {
      const Word& w = diagram.word(k + 1, j);
      Interval acc(0L);
      for (std::size_t pos = w.size(); pos-- > 0;) {
        best = Interval::max(best, distance_to_integer(acc));
        acc = reduce_mod_one(acc + c[w[pos]]);
      }
    }
    report.level_max.push_back(best);
    total += best;
  }
  report.worst_tail = total;
  return report;
}

// ---------------------------------------------------------------------------
// Stable decomposition

StableDecomposition stable_decompose(const OrderedDiagram& diagram, const Alpha& alpha,
                                     std::size_t m, std::size_t horizon, double tol) {
  if (m == 0 || m > horizon || horizon > diagram.depth()) {
    throw Error(ErrorCode::out_of_range, "stable_decompose needs 1 <= m <= horizon <= depth");
  }
  // Roundings per level and the lowest level from which they are consistent.
  std::vector<std::optional<IntVector>> rounded(horizon + 1);
  for (std::size_t n = m; n <= horizon; ++n) rounded[n] = round_vector(alpha, diagram.heights(n));
  if (!rounded[horizon]) {
    throw Error(ErrorCode::ambiguous_rounding,
                "alpha H(" + std::to_string(horizon) + ") has a component at distance 1/2 from Z");
  }
  std::size_t source = horizon;
  while (source > m && rounded[source - 1] &&
         diagram.matrix(source).apply(*rounded[source - 1]) == *rounded[source]) {
    --source;
  }

  StableDecomposition out;
  out.m = m;
  out.horizon = horizon;
  out.tol = tol;
  out.source = source;
  if (source == m) {
    out.w = *rounded[m];
  } else {
    auto x = solve_square(diagram.product(m, source), *rounded[source]);
    if (x && is_integral(*x)) {
      for (const auto& c : *x) out.w.push_back(c.get_num());
    } else if (rounded[m]) {
      out.w = *rounded[m];
      out.source = m;
    } else {
      throw Error(ErrorCode::ambiguous_rounding,
                  "alpha H(" + std::to_string(m) + ") has a component at distance 1/2 from Z");
    }
  }

  IntVector h = diagram.heights(m);
  if (alpha.is_rational()) {
    RatVector v(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) v[i] = alpha.exact() * Rational(h[i]) - Rational(out.w[i]);
    out.v = to_intervals(v);
    out.v_exact = std::move(v);
  } else {
    IntervalVector ah = alpha_times(alpha, h);
    for (std::size_t i = 0; i < h.size(); ++i) out.v.push_back(ah[i] - Interval(out.w[i]));
  }

  // ||P(n,m) v|| = ||alpha H(n) - P(n,m) w||, evaluated without forming P v.
  IntVector pw = out.w;
  for (std::size_t n = m; n <= horizon; ++n) {
    if (n > m) pw = diagram.matrix(n).apply(pw);
    IntervalVector ah = alpha_times(alpha, diagram.heights(n));
    IntervalVector r(ah.size());
    for (std::size_t i = 0; i < ah.size(); ++i) r[i] = ah[i] - Interval(pw[i]);
    out.residuals.push_back(max_norm(r));
  }
  out.contracted = out.residuals.back().certainly_less(Interval(Rational(tol)));
  return out;
}

std::optional<StableDecomposition> find_stable_decomposition(const OrderedDiagram& diagram,
                                                             const Alpha& alpha,
                                                             std::size_t horizon, double tol) {
  for (std::size_t m = 1; m <= horizon; ++m) {
    try {
      StableDecomposition d = stable_decompose(diagram, alpha, m, horizon, tol);
      if (d.contracted) return d;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ambiguous_rounding) throw;
    }
  }
  return std::nullopt;
}

SummabilityEstimate summability(const OrderedDiagram& diagram, const IntervalVector& v,
                                std::size_t m, std::size_t horizon) {
  if (m == 0 || m > horizon || horizon > diagram.depth()) {
    throw Error(ErrorCode::out_of_range, "summability needs 1 <= m <= horizon <= depth");
  }
  SummabilityEstimate est;
  IntervalVector x = v;
  for (std::size_t n = m; n <= horizon; ++n) {
    if (n > m) x = diagram.matrix(n).apply(x);
    est.residuals.push_back(max_norm(x));
    est.partial_sum += est.residuals.back().upper_double();
  }
  const auto& r = est.residuals;
  const std::size_t len = r.size();
  if (r.back().upper_double() == 0) {
    est.ratio = 0;
    est.summable = true;
    return est;
  }
  if (len < 3) return est;
  double r1 = r[len - 1].upper_double() / r[len - 2].upper_double();
  double r2 = r[len - 2].upper_double() / r[len - 3].upper_double();
  est.ratio = 0.5 * (r1 + r2);
  if (est.ratio < 1) {
    est.tail_estimate = r.back().upper_double() * est.ratio / (1 - est.ratio);
    est.summable = true;
  } else {
    est.tail_estimate = INFINITY;
  }
  return est;
}

// ---------------------------------------------------------------------------
// Measures and eigenvalues

Interval orthogonality_check(const IntervalVector& v, const MeasureVector& mu) {
  return dot(v, mu.values);
}

Alpha alpha_from_integer_vector(const IntVector& w, const MeasureVector& mu) {
  if (w.size() != mu.values.size()) throw Error(ErrorCode::invalid_argument, "dimension mismatch");
  if (mu.exact) {
    RatVector wr(w.begin(), w.end());
    return Alpha::rational(fractional_part(dot(wr, *mu.exact)));
  }
  return Alpha::real(reduce_mod_one(dot(w, mu.values)));
}

std::optional<std::size_t> rational_denominator_check(const Rational& alpha,
                                                      const OrderedDiagram& diagram,
                                                      std::size_t depth) {
  const BigInt& b = alpha.get_den();
  for (std::size_t m = 1; m <= std::min(depth, diagram.depth()); ++m) {
    BigInt g = 0;
    for (const auto& h : diagram.heights(m)) g = gcd(g, h);
    if (g % b == 0) return m;
  }
  return std::nullopt;
}

DimensionGroupWitness dimension_group_membership(const OrderedDiagram& diagram, const RatVector& z,
                                                 std::size_t m, std::size_t horizon) {
  if (m == 0 || m > diagram.depth()) throw Error(ErrorCode::out_of_range, "level out of range");
  if (z.size() != diagram.rank(m)) throw Error(ErrorCode::invalid_argument, "dimension mismatch");
  DimensionGroupWitness out;
  out.z = z;
  out.m = m;
  out.horizon = std::min(horizon, diagram.depth());
  RatVector y = z;
  for (std::size_t n = m; n <= out.horizon; ++n) {
    if (n > m) y = diagram.matrix(n).apply(y);
    if (is_integral(y)) {
      out.level = n;
      for (const auto& c : y) out.image.push_back(c.get_num());
      break;
    }
  }
  return out;
}

std::size_t independence_bound(const OrderedDiagram& diagram, const MeasureSetReport& report) {
  const std::size_t d = diagram.rank(report.horizon);
  const std::size_t l = report.clusters.size();
  return d + 1 - std::min(l, d);
}

EigenGroupReport eigen_group_matrix(const OrderedDiagram& diagram, const std::vector<IntVector>& ws,
                                    std::size_t m, const MeasureVector& mu) {
  const std::size_t d = diagram.rank(m);
  EigenGroupReport out;
  out.m = m;
  out.eta = ws.size() + 1;
  out.W = IntMatrix(d, out.eta);
  std::vector<IntVector> cols = ws;
  cols.push_back(diagram.heights(m));
  std::vector<RatVector> as_rows;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != d) throw Error(ErrorCode::invalid_argument, "vector size differs from rank");
    for (std::size_t i = 0; i < d; ++i) out.W.at(i, j) = cols[j][i];
    as_rows.emplace_back(cols[j].begin(), cols[j].end());
  }
  if (rational_rank(as_rows) != out.eta) {
    throw Error(ErrorCode::rank_deficient,
                "columns w_1..w_{eta-1}, H(m) are linearly dependent over Q");
  }
  for (const auto& c : cols) out.values.push_back(dot(c, mu.values));
  return out;
}

DimensionGroupWitness eigen_group_membership(const OrderedDiagram& diagram,
                                             const EigenGroupReport& report, const RatVector& z,
                                             std::size_t horizon) {
  if (z.size() != report.eta) throw Error(ErrorCode::invalid_argument, "z must have eta entries");
  return dimension_group_membership(diagram, report.W.apply(z), report.m, horizon);
}

GroupGeoReport group_geo_check(const OrderedDiagram& diagram, const Alpha& alpha, std::size_t m,
                               std::size_t horizon, double tol) {
  GroupGeoReport out;
  IntVector h = diagram.heights(m);
  if (alpha.is_rational()) {
    RatVector z(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) z[i] = alpha.exact() * Rational(h[i]);
    DimensionGroupWitness wit = dimension_group_membership(diagram, z, m, horizon);
    if (wit.level) {
      out.found = true;
      out.method = "rational";
      out.g = z;
      out.v1 = IntervalVector(h.size(), Interval(0L));
      out.witness_level = wit.level;
      out.estimate = summability(diagram, out.v1, m, std::max(m, horizon));
      return out;
    }
  }
  StableDecomposition sd = stable_decompose(diagram, alpha, m, horizon, tol);
  out.method = "stable";
  out.g = RatVector(sd.w.begin(), sd.w.end());
  out.witness_level = m;
  out.v1 = sd.v;
  out.estimate = summability(diagram, sd.v, m, horizon);
  out.found = out.estimate.summable;
  return out;
}

// ---------------------------------------------------------------------------
// Toeplitz classification

std::string to_string(ToeplitzClass c) {
  switch (c) {
    case ToeplitzClass::continuous: return "continuous";
    case ToeplitzClass::non_continuous_candidate: return "non-continuous-candidate";
    case ToeplitzClass::excluded: return "excluded";
  }
  return "unknown";
}

ToeplitzReport toeplitz_classify(const Alpha& alpha, const std::vector<BigInt>& q, std::size_t d,
                                 bool bounded) {
  ToeplitzReport out;
  if (!alpha.is_rational()) {
    out.verdict = ToeplitzClass::excluded;
    out.reason = "irrational: eigenvalues of Toeplitz type systems are rational "
                 "(statement concerns measurable eigenvalues)";
    return out;
  }
  if (q.empty()) throw Error(ErrorCode::invalid_argument, "empty characteristic sequence");
  const Rational a = fractional_part(alpha.exact());
  const BigInt& b = a.get_den();
  std::vector<BigInt> p;
  BigInt acc = 1;
  for (const auto& x : q) {
    if (x < 1) throw Error(ErrorCode::invalid_argument, "characteristic entries must be >= 1");
    acc *= x;
    p.push_back(acc);
  }
  for (std::size_t m = 0; m < p.size(); ++m) {
    if (p[m] % b == 0) {
      out.verdict = ToeplitzClass::continuous;
      out.witness = m + 1;
      out.reason = "alpha = a/p_m with m = " + std::to_string(m + 1);
      return out;
    }
  }
  if (bounded) {
    out.verdict = ToeplitzClass::excluded;
    out.reason = "bounded characteristic sequence: every eigenvalue is continuous, "
                 "and alpha is not of the form a/p_n";
    return out;
  }
  out.exact = false;
  for (std::size_t n = p.size() / 2; n < p.size(); ++n) {
    BigInt g = gcd(b, p[n]);
    if (b / g > BigInt(static_cast<unsigned long>(d))) {
      out.verdict = ToeplitzClass::excluded;
      out.reason = "b/(b,p_n) = " + BigInt(b / g).get_str() + " exceeds the rank at n = " +
                   std::to_string(n + 1);
      return out;
    }
  }
  out.verdict = ToeplitzClass::non_continuous_candidate;
  out.reason = "b/(b,p_n) <= d on the computed tail; finite-depth heuristic";
  return out;
}

}  // namespace bratteli
