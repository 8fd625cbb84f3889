#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bratteli/diagram.hpp"
#include "bratteli/measures.hpp"
#include "bratteli/spectra.hpp"

namespace bratteli {

// ---------------------------------------------------------------------------
// Golden-mean data for A = [[1,1],[1,0]]

struct GoldenData {
  Interval phi;
  Interval c;          // sqrt(1 + phi^2)
  IntervalVector e_u;  // (phi, 1) / c, eigenvalue phi
  IntervalVector e_s;  // (-1, phi) / c, eigenvalue -1/phi, second entry > 0
};

GoldenData golden_data();  // at the current default precision
IntMatrix golden_matrix();
IntMatrix golden_power(unsigned long k);

// Integer vector zbar with t = <zbar, e_u> > 0 and s = -<zbar, e_s> in
// (0, bound), so that t e_u = zbar + s e_s.
struct LatticePoint {
  IntVector zbar;
  Interval t;
  Interval s;
};

// Candidates with certified s in (0, bound), by increasing t (ties broken by
// lexicographic zbar). At most `count` are returned; the scan stops once no
// smaller t can appear or `b_cap` second coordinates have been tried.
std::vector<LatticePoint> lattice_candidates(const Interval& bound, const GoldenData& golden,
                                             std::size_t count, std::size_t b_cap = 1u << 24);
LatticePoint lattice_step(const Interval& bound, const GoldenData& golden,
                          std::size_t b_cap = 1u << 24);

// ---------------------------------------------------------------------------
// Best ordering

struct BestOrderWord {
  IntervalVector w;
  IntVector h;
  Word p;                 // letters 0 (first vertex) and 1 (second vertex)
  long K = 0;             // (index of the first letter 0, counted from 1) - 2
  bool compat = false;    // an extra trailing letter 0 was appended
  // Bound K <= h2 + sign(w1) f h1, f = |w1| / |w2|.
  Interval k_bound;
  bool k_bound_ok = false;
  // max over j >= K + 1 of |sum_{i >= j} <e_{p_i}, w>| against ||w||.
  Interval tail_max;
  bool tail_ok = false;
  // The same sum at j = K (the closed range as literally stated).
  std::optional<Interval> tail_at_K;
};

// p_{n+1} = first vertex iff <sum_{i<=n} e_{p_i} - h, w> > 0. Throws
// precision_exhausted when a sign cannot be decided at the precision of w.
BestOrderWord best_ordering(const IntervalVector& w, const IntVector& h, bool compat = false);

// ---------------------------------------------------------------------------
// Non-continuous eigenvalue construction on the golden substitution

// coeff * phi^phi_power, evaluated at any precision.
struct ScaledReal {
  Rational coeff;
  long phi_power = 0;
  Interval value() const;
  std::string to_string() const;
};

ScaledReal parse_scaled_real(const std::string& text);

struct Section6Params {
  // epsilon_n and delta_n for n = 1, 2, ...; extended by halving when the
  // construction needs more entries than supplied.
  std::vector<ScaledReal> epsilon;
  std::vector<ScaledReal> delta;
  ScaledReal v1;
  std::size_t depth = 6;
  mpfr_prec_t precision = 128;
  mpfr_prec_t max_precision = 4096;
  std::string branch_bits;  // '1' at position n picks the second lattice candidate
  bool compat_words = false;

  // epsilon_n = delta_n = 2^{-n} / phi, v_1 = epsilon_1 / 2.
  static Section6Params standard(std::size_t depth);
  ScaledReal eps(std::size_t n) const;
  ScaledReal del(std::size_t n) const;
};

struct Section6Step {
  std::size_t n = 0;
  long k = 0;        // k_n (0 for n = 1)
  long K = 0;        // K_n = k_2 + ... + k_n
  long k_min = 0;
  Interval alpha_n, v_n, t_n, s_n, u_n;
  IntVector z_n, zbar_n;
  Interval epsilon, delta;
  // Residual w_n = alpha P(n) H(1) - integer part, computed directly and
  // through the stable/unstable expansion.
  IntervalVector w_direct, w_expanded;
  Interval w_norm;
  bool invariant_v = false;      // 0 < v_n < epsilon_n
  bool invariant_u = false;      // 0 < u_n <= delta_n v_n
  bool invariant_k = false;      // k_n >= 2 (n >= 2)
  bool identity_ok = false;      // both residual computations overlap
  bool w_bound_ok = false;       // ||w_n|| <= 4 epsilon_n
  bool w_signs_ok = false;       // (w_n)_1 < 0 < (w_n)_2
};

struct Section6Result {
  Section6Params params;
  mpfr_prec_t precision_used = 0;
  OrderedDiagram diagram;
  std::vector<Section6Step> steps;  // n = 1..depth
  // Level n+1 orderings, n = 1..depth-1. The letters themselves are moved
  // into the diagram, so `p` is left empty here.
  std::vector<std::vector<BestOrderWord>> words;
  Interval beta, alpha, v;
  Interval v1;
  Interval v1_limit;   // ||H(1)/<e_u,H(1)> - e_u||
  bool v_above_v1 = false;
  bool all_ok() const;
};

Section6Result build_section6(const Section6Params& params);

struct MeasureBoundReport {
  std::size_t n = 0;
  Interval mass;           // mu{<s_n, w_n> > ||w_n||}
  Interval bound;          // (2 + phi^-2) epsilon_n
  std::size_t violating_positions = 0;
  std::size_t undecided_positions = 0;  // counted as violating
  bool ok = false;
};

MeasureBoundReport section6_measure_bound_check(const Section6Result& construction, std::size_t n);
// mu(n) = e_u / <e_u, H(n)> for the construction.
MeasureVector section6_measure(const Section6Result& construction, std::size_t n);

// ---------------------------------------------------------------------------
// Toeplitz type diagrams

// Level n words for a diagram of rank d with q_n edges into every vertex.
using ToeplitzRule = std::function<std::vector<Word>(std::size_t n, std::size_t q, std::size_t d)>;

// Every vertex reads 1, 2, ..., d, 1, 2, ... up to length q.
ToeplitzRule cyclic_rule();
// Explicit words: words[n-2][j] for level n (n >= 2), 1-based letter strings.
ToeplitzRule word_rule(std::vector<std::vector<std::string>> words);

// h1 = q_1 (1, ..., 1); levels 2..depth from the rule.
OrderedDiagram toeplitz_diagram(const std::vector<BigInt>& q, const ToeplitzRule& rule,
                                std::size_t depth, std::size_t d);

// q_n = 3^{l_n}, t_n = (q_n + 3) / 2, words 1 -> (12)^{t-3}131,
// 2 -> 1(12)^{t-3}31, 3 -> (12)^{t-3}131 from level 2 on; level 1 has
// q_1 = 3^{l_1} root edges per vertex. Missing l entries continue by +1.
OrderedDiagram toeplitz_rank3_example(const std::vector<long>& l, std::size_t depth);
std::vector<BigInt> rank3_characteristic(const std::vector<long>& l, std::size_t depth);

struct MinusOneLevel {
  std::size_t n = 0;
  // Floors (tower, floor index) of level n+1 where f_n != f_{n+1}.
  std::size_t size = 0;
  bool matches_brute_force = false;
  bool matches_identity = false;
  Interval mass;
  Interval bound;  // 4 / q_{n+1}
  bool bound_ok = false;
};

struct MinusOneReport {
  std::vector<MinusOneLevel> levels;  // n = 1..depth-2
  Interval mass_sum;
  bool ok = false;
};

// f_n = (-1)^{r_n} rho_{tau_n} with rho = (1, -1, -1).
MinusOneReport minus_one_eigenfunction_check(const OrderedDiagram& diagram, std::size_t depth,
                                             std::size_t cap = 1u << 22);

}  // namespace bratteli
