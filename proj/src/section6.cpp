#include <algorithm>
#include <array>
#include <regex>

#include "bratteli/constructions.hpp"
#include "detail/linear_form.hpp"

namespace bratteli {

using detail::LinearForm;

namespace {

Interval phi_pow(long e) {
  Interval phi = golden_ratio();
  Interval p = phi.pow(static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? Interval(1L) / p : p;
}

Interval euclidean_norm(const IntervalVector& v) {
  Interval s(0L);
  for (const auto& x : v) s += x.pow(2);
  return Interval::sqrt(s);
}

IntervalVector combine(const Interval& a, const IntervalVector& x, const Interval& b,
                       const IntervalVector& y) {
  return {a * x[0] + b * y[0], a * x[1] + b * y[1]};
}

bool overlaps(const IntervalVector& a, const IntervalVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].overlaps(b[i])) return false;
  return true;
}

// Recursion state at index n.
struct State {
  long k = 0, K = 0, k_min = 0;
  Interval alpha, v, t, s;
  IntVector z{0, 0}, zbar{0, 0};
};

}  // namespace

Interval ScaledReal::value() const { return Interval(coeff) * phi_pow(phi_power); }

std::string ScaledReal::to_string() const {
  std::string out = bratteli::to_string(coeff);
  if (phi_power != 0) out += "*phi^" + std::to_string(phi_power);
  return out;
}

ScaledReal parse_scaled_real(const std::string& text) {
  static const std::regex full(R"(^\s*([^*\s]+)?\s*(?:\*?\s*phi\^(-?\d+))?\s*$)");
  static const std::regex over_phi(R"(^\s*([^/\s]+)\s*/\s*phi\s*$)");
  std::smatch m;
  ScaledReal out;
  if (std::regex_match(text, m, over_phi)) {
    out.coeff = parse_rational(m[1].str());
    out.phi_power = -1;
    return out;
  }
  if (text.find("phi") == std::string::npos) {
    out.coeff = parse_rational(text);
    return out;
  }
  if (!std::regex_match(text, m, full) || !m[2].matched) {
    throw Error(ErrorCode::parse, "cannot parse scaled real '" + text + "'");
  }
  out.coeff = m[1].matched ? parse_rational(m[1].str()) : Rational(1);
  out.phi_power = std::stol(m[2].str());
  return out;
}

Section6Params Section6Params::standard(std::size_t depth) {
  Section6Params p;
  p.depth = depth;
  for (std::size_t n = 1; n <= depth + 1; ++n) {
    Rational e(BigInt(1), BigInt(1) << static_cast<unsigned>(n));
    p.epsilon.push_back({e, -1});
    p.delta.push_back({e, -1});
  }
  p.v1 = {Rational(1, 4), -1};
  return p;
}

namespace {

// a <= b, exact when both carry the same power of phi.
bool scaled_le(const ScaledReal& a, const ScaledReal& b) {
  if (a.phi_power == b.phi_power) return a.coeff <= b.coeff;
  return a.value().certainly_less_equal(b.value());
}

ScaledReal extend(const std::vector<ScaledReal>& seq, std::size_t n, const char* name) {
  if (n == 0) throw Error(ErrorCode::out_of_range, "sequences are indexed from 1");
  if (seq.empty()) throw Error(ErrorCode::invalid_argument, std::string(name) + " sequence is empty");
  if (n <= seq.size()) return seq[n - 1];
  ScaledReal r = seq.back();
  r.coeff /= Rational(BigInt(1) << static_cast<unsigned>(n - seq.size()));
  return r;
}

}  // namespace

ScaledReal Section6Params::eps(std::size_t n) const { return extend(epsilon, n, "epsilon"); }
ScaledReal Section6Params::del(std::size_t n) const { return extend(delta, n, "delta"); }

bool Section6Result::all_ok() const {
  for (const auto& s : steps) {
    if (!(s.invariant_v && s.invariant_u && s.invariant_k && s.identity_ok && s.w_bound_ok &&
          s.w_signs_ok))
      return false;
  }
  for (const auto& level : words)
    for (const auto& w : level)
      if (!(w.k_bound_ok && w.tail_ok)) return false;
  return v_above_v1;
}

namespace {

Section6Result attempt(const Section6Params& params) {
  if (params.depth < 2) throw Error(ErrorCode::invalid_argument, "construction depth must be at least 2");
  const GoldenData g = golden_data();
  const Interval& phi = g.phi;
  const Interval phi_inv = Interval(1L) / phi;
  const std::size_t D = params.depth;

  std::vector<Interval> eps, del;  // eps[n] for n = 1..D+1
  eps.emplace_back(0L);
  del.emplace_back(0L);
  const ScaledReal phi_inv_s{Rational(1), -1};
  for (std::size_t n = 1; n <= D + 1; ++n) {
    const ScaledReal e = params.eps(n), dl = params.del(n);
    eps.push_back(e.value());
    del.push_back(dl.value());
    if (e.coeff <= 0 || dl.coeff <= 0 || !scaled_le(e, phi_inv_s) || !scaled_le(dl, e)) {
      throw Error(ErrorCode::invalid_argument,
                  "need 0 < delta_n <= epsilon_n <= 1/phi at n = " + std::to_string(n));
    }
    if (n > 1 && (!scaled_le(e, params.eps(n - 1)) || !scaled_le(dl, params.del(n - 1)))) {
      throw Error(ErrorCode::invalid_argument, "epsilon and delta must be non-increasing");
    }
  }

  Section6Result out;
  out.params = params;
  out.precision_used = default_precision();
  out.v1 = params.v1.value();
  {
    // H(1) / <e_u, H(1)> - e_u with H(1) = (1, 1).
    Interval scale = Interval(1L) / (g.e_u[0] + g.e_u[1]);
    out.v1_limit = euclidean_norm({scale - g.e_u[0], scale - g.e_u[1]});
  }
  if (!out.v1.certainly_positive() || !out.v1.certainly_less(eps[1]) ||
      !out.v1.certainly_less(out.v1_limit)) {
    throw Error(ErrorCode::invalid_argument, "need 0 < v_1 < min(epsilon_1, ||H(1)/<e_u,H(1)> - e_u||)");
  }

  // Recursion states for n = 1..D+1.
  std::vector<State> st(D + 2);
  st[1].alpha = Interval(0L);
  st[1].v = out.v1;
  st[1].t = Interval(1L);
  st[1].s = out.v1;
  for (std::size_t n = 1; n <= D; ++n) {
    const State& cur = st[n];
    State& nxt = st[n + 1];
    // Even exponents keep A^k e_s = phi^{-k} e_s.
    long k_min = 2;
    while (!((phi_pow(-k_min) * cur.v).certainly_less(eps[n + 1]) &&
             phi_pow(-k_min).certainly_less(eps[n + 1]))) {
      k_min += 2;
    }
    const Interval bound = eps[n + 1] - phi_pow(-k_min) * cur.v;
    const bool second = n - 1 < params.branch_bits.size() && params.branch_bits[n - 1] == '1';
    auto cands = lattice_candidates(bound, g, second ? 2 : 1);
    LatticePoint pt = std::move(cands[second ? 1 : 0]);
    const Interval cap_u = (phi - Interval(1L)) / phi * del[n] * cur.v;
    const Interval cap_t = phi_inv * cur.t;
    long k = k_min + 2;
    while (!((phi_pow(-k) * pt.t).certainly_less(cap_u) && (phi_pow(-k) * pt.t).certainly_less(cap_t))) {
      k += 2;
    }
    nxt.k = k;
    nxt.K = cur.K + k;
    nxt.k_min = k_min;
    nxt.t = pt.t;
    nxt.s = pt.s;
    nxt.v = phi_pow(-k) * cur.v + pt.s;
    nxt.alpha = cur.alpha + phi_pow(-nxt.K) * pt.t;
    nxt.zbar = pt.zbar;
    nxt.z = golden_power(static_cast<unsigned long>(k)).apply(cur.z);
    nxt.z[0] += pt.zbar[0];
    nxt.z[1] += pt.zbar[1];
  }

  // beta lies within phi^{-K} delta v of alpha at the last index.
  const State& last = st[D + 1];
  out.beta = Interval::hull(last.alpha, last.alpha + phi_pow(-last.K) * del[D + 1] * last.v);
  out.v = (g.c + out.beta * (phi - Interval(1L))) / (Interval(1L) + phi);
  out.alpha = out.beta / g.c + out.v * phi / g.c;
  out.v_above_v1 = out.v1.certainly_less(out.v);

  for (std::size_t n = 1; n <= D; ++n) {
    const State& s = st[n];
    Section6Step step;
    step.n = n;
    step.k = s.k;
    step.K = s.K;
    step.k_min = s.k_min;
    step.alpha_n = s.alpha;
    step.v_n = s.v;
    step.t_n = s.t;
    step.s_n = s.s;
    step.u_n = phi_pow(s.K) * (out.beta - s.alpha);
    step.z_n = s.z;
    step.zbar_n = s.zbar;
    step.epsilon = eps[n];
    step.delta = del[n];

    const IntMatrix P = golden_power(static_cast<unsigned long>(s.K));
    const IntVector ph = P.apply(IntVector{1, 1});
    IntVector integer_part = P.apply(IntVector{1, 0});
    integer_part[0] += s.z[0];
    integer_part[1] += s.z[1];
    step.w_direct = {out.alpha * Interval(ph[0]) - Interval(integer_part[0]),
                     out.alpha * Interval(ph[1]) - Interval(integer_part[1])};
    const Interval vbar = s.v + phi_pow(-s.K) * (out.v - out.v1);
    step.w_expanded = combine(step.u_n, g.e_u, vbar, g.e_s);
    step.w_norm = euclidean_norm(step.w_expanded);

    step.invariant_v = s.v.certainly_positive() && s.v.certainly_less(eps[n]);
    step.invariant_u = step.u_n.certainly_positive() && step.u_n.certainly_less_equal(del[n] * s.v);
    step.invariant_k = n == 1 || s.k >= 2;
    step.identity_ok = overlaps(step.w_direct, step.w_expanded);
    step.w_bound_ok = step.w_norm.certainly_less_equal(Interval(4L) * eps[n]);
    step.w_signs_ok = step.w_expanded[0].certainly_negative() && step.w_expanded[1].certainly_positive();
    out.steps.push_back(std::move(step));
  }

  // Level n+1 words from w_n and the rows of A^{k_{n+1}}.
  std::vector<Level> levels;
  for (std::size_t n = 1; n < D; ++n) {
    const IntMatrix M = golden_power(static_cast<unsigned long>(st[n + 1].k));
    std::vector<BestOrderWord> row_words;
    Level level;
    level.matrix = M;
    for (std::size_t j = 0; j < 2; ++j) {
      BestOrderWord bw = best_ordering(out.steps[n - 1].w_expanded, M.row(j), params.compat_words);
      Word p = std::move(bw.p);
      bw.p.clear();
      if (params.compat_words) p.pop_back();
      level.words.push_back(std::move(p));
      row_words.push_back(std::move(bw));
    }
    levels.push_back(std::move(level));
    out.words.push_back(std::move(row_words));
  }
  out.diagram = OrderedDiagram(IntVector{1, 1}, std::move(levels));
  return out;
}

}  // namespace

Section6Result build_section6(const Section6Params& params) {
  if (params.precision < 64 || params.max_precision < params.precision) {
    throw Error(ErrorCode::invalid_argument, "need 64 <= precision <= max_precision");
  }
  for (mpfr_prec_t prec = params.precision;; prec *= 2) {
    try {
      PrecisionScope scope(prec);
      return attempt(params);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::precision_exhausted || prec * 2 > params.max_precision) throw;
    }
  }
}

MeasureVector section6_measure(const Section6Result& construction, std::size_t n) {
  const OrderedDiagram& d = construction.diagram;
  if (n == 0 || n > d.depth()) throw Error(ErrorCode::out_of_range, "measure level outside the construction");
  PrecisionScope scope(construction.precision_used);
  const GoldenData g = golden_data();
  const IntVector h = d.heights(n);
  const Interval norm = dot(h, g.e_u);
  MeasureVector mu;
  mu.level = n;
  mu.values = {g.e_u[0] / norm, g.e_u[1] / norm};
  return mu;
}

MeasureBoundReport section6_measure_bound_check(const Section6Result& construction, std::size_t n) {
  const OrderedDiagram& d = construction.diagram;
  if (n == 0 || n + 1 > d.depth() || n > construction.steps.size()) {
    throw Error(ErrorCode::out_of_range, "measure bound needs the construction built to level n+1");
  }
  PrecisionScope scope(construction.precision_used);
  const IntervalVector& w = construction.steps[n - 1].w_expanded;
  const Interval norm = max_norm(w);
  const double norm_lo = norm.lower_double(), norm_hi = norm.upper_double();
  LinearForm form(w);
  const MeasureVector mu = section6_measure(construction, n + 1);
  const IntVector h = d.heights(n);

  MeasureBoundReport out;
  out.n = n;
  out.mass = Interval(0L);
  for (std::size_t j = 0; j < 2; ++j) {
    const Word& p = d.word(n + 1, j);
    // Per source letter: positions whose suffix s has <s, w_n> > ||w_n||.
    std::array<long, 2> count{0, 0};
    long t1 = 0, t2 = 0;
    for (std::size_t pos = p.size(); pos-- > 0;) {
      const int c = form.compare(t1, t2, norm, norm_lo, norm_hi);
      if (c >= 0) {
        ++count[p[pos]];
        if (c > 0) ++out.violating_positions; else ++out.undecided_positions;
      }
      if (p[pos] == 0) ++t1; else ++t2;
    }
    out.mass += (Interval(count[0]) * Interval(h[0]) + Interval(count[1]) * Interval(h[1])) * mu.values[j];
  }
  const Interval phi = golden_ratio();
  out.bound = (Interval(2L) + Interval(1L) / phi.pow(2)) * construction.steps[n - 1].epsilon;
  out.ok = out.mass.certainly_less_equal(out.bound);
  return out;
}

}  // namespace bratteli
