#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bratteli/diagram.hpp"
#include "bratteli/measures.hpp"

namespace bratteli {

// Candidate eigenvalue exponent: lambda = exp(2 i pi alpha).
class Alpha {
 public:
  static Alpha rational(const Rational& value);
  static Alpha real(const Interval& value);

  bool is_rational() const { return exact_.has_value(); }
  const Rational& exact() const;
  // Enclosure at the current default precision (exact values are re-rounded).
  Interval interval() const;
  std::string describe() const;

 private:
  std::optional<Rational> exact_;
  std::optional<Interval> real_;
};

// "a/b", "0.25", "real:0.6180339887..." (truncated decimal, enclosed with
// one unit of the last digit either way) or "real:1/phi".
Alpha parse_alpha(const std::string& text);

// The golden mean phi = (1 + sqrt 5) / 2 at the current precision.
Interval golden_ratio();

// |||alpha H(n)||| for one level: exact for rational alpha.
Interval alpha_height_distance(const OrderedDiagram& diagram, const Alpha& alpha, std::size_t n);

struct SeriesReport {
  std::vector<Interval> terms;         // n = 1..N
  std::vector<Interval> partial_sums;  // running sums of terms
  std::string classification;          // plausibly-summable | diverging | inconclusive
  bool exact = false;                  // classification is exact, not a tail heuristic
  std::vector<Rational> exact_terms;   // filled for rational alpha
};

SeriesReport continuous_necessary_series(const OrderedDiagram& diagram, const Alpha& alpha,
                                         std::size_t N);

struct UniformReport {
  std::size_t n0 = 0;
  std::size_t N = 0;
  // For k = n0..N-1: max over x of the distance to Z of <s_k(x), alpha H(k)>.
  std::vector<Interval> level_max;
  // Sum of level_max: bounds sup_x |||sum_k <s_k(x), alpha H(k)>|||.
  Interval worst_tail;
  bool exact = false;
  std::vector<Rational> exact_level_max;  // filled for rational alpha
  Rational exact_worst_tail;
};

UniformReport uniform_convergence_test(const OrderedDiagram& diagram, const Alpha& alpha,
                                       std::size_t n0, std::size_t N,
                                       std::size_t cap = std::size_t{1} << 28);

struct StableDecomposition {
  std::size_t m = 0;
  std::size_t horizon = 0;
  IntVector w;
  IntervalVector v;
  std::optional<RatVector> v_exact;
  // Level at which w was read off by rounding; w is pulled back from there
  // through P(source, m) when source > m.
  std::size_t source = 0;
  std::vector<Interval> residuals;  // ||P(n,m) v|| for n = m..horizon
  double tol = 0;
  bool contracted = false;
};

// alpha H(m) = v + w with w integral. w is obtained by rounding alpha H(n) at
// the lowest level n >= m from which the roundings follow the matrices up to
// the horizon, then pulled back to level m when P(n,m) is invertible over Z.
StableDecomposition stable_decompose(const OrderedDiagram& diagram, const Alpha& alpha,
                                     std::size_t m, std::size_t horizon, double tol = 1e-6);
// Smallest m in 1..horizon whose decomposition is contracted at the horizon.
std::optional<StableDecomposition> find_stable_decomposition(const OrderedDiagram& diagram,
                                                             const Alpha& alpha,
                                                             std::size_t horizon,
                                                             double tol = 1e-6);

struct SummabilityEstimate {
  std::vector<Interval> residuals;
  double partial_sum = 0;
  double ratio = 0;         // mean of the last two residual ratios
  double tail_estimate = 0; // geometric extrapolation beyond the horizon
  bool summable = false;
};

// Residual norms ||P(n,m) v|| for n = m..horizon and a geometric tail guess.
SummabilityEstimate summability(const OrderedDiagram& diagram, const IntervalVector& v,
                                std::size_t m, std::size_t horizon);

struct SubspaceReport {
  std::size_t m = 0;
  std::size_t horizon = 0;
  double relative_threshold = 0;
  std::vector<double> singular_values;  // of P(horizon, m), scaled to max 1
  std::vector<RatVector> kernel;        // V0: exact basis of ker P(horizon, m)
  std::vector<std::vector<double>> stable;    // Vs basis
  std::vector<std::vector<double>> summable;  // V1 basis
  std::vector<SummabilityEstimate> stable_estimates;
  bool chain_ok = false;  // V0 within V1 within Vs
};

SubspaceReport stable_subspaces(const OrderedDiagram& diagram, std::size_t m, std::size_t horizon,
                                double relative_threshold = 1e-6);

// <v, mu(m)>, expected to contain 0 for stable v.
Interval orthogonality_check(const IntervalVector& v, const MeasureVector& mu);
// <w, mu(m)> mod 1.
Alpha alpha_from_integer_vector(const IntVector& w, const MeasureVector& mu);
// Smallest level m <= depth with b | gcd_k h_k(m) for alpha = a/b.
std::optional<std::size_t> rational_denominator_check(const Rational& alpha,
                                                      const OrderedDiagram& diagram,
                                                      std::size_t depth);

struct DimensionGroupWitness {
  RatVector z;
  std::size_t m = 0;
  std::size_t horizon = 0;
  std::optional<std::size_t> level;  // first n with P(n,m) z integral
  IntVector image;                   // P(level, m) z
};

DimensionGroupWitness dimension_group_membership(const OrderedDiagram& diagram, const RatVector& z,
                                                 std::size_t m, std::size_t horizon);

// d - l + 1 with l the number of candidate clusters.
std::size_t independence_bound(const OrderedDiagram& diagram, const MeasureSetReport& report);

struct EigenGroupReport {
  std::size_t m = 0;
  std::size_t eta = 0;
  IntMatrix W;            // columns w_1, ..., w_{eta-1}, H(m)
  IntervalVector values;  // W^T mu(m) = (alpha_1, ..., alpha_{eta-1}, 1)
};

// Throws rank_deficient when the columns of W are linearly dependent.
EigenGroupReport eigen_group_matrix(const OrderedDiagram& diagram, const std::vector<IntVector>& ws,
                                    std::size_t m, const MeasureVector& mu);
// Whether W z lies in the dimension group at level m, z in Q^eta.
DimensionGroupWitness eigen_group_membership(const OrderedDiagram& diagram,
                                             const EigenGroupReport& report, const RatVector& z,
                                             std::size_t horizon);

struct GroupGeoReport {
  bool found = false;
  RatVector g;           // dimension-group part
  IntervalVector v1;     // summable part
  std::optional<std::size_t> witness_level;
  SummabilityEstimate estimate;
  std::string method;    // "rational" or "stable"
};

GroupGeoReport group_geo_check(const OrderedDiagram& diagram, const Alpha& alpha, std::size_t m,
                               std::size_t horizon, double tol = 1e-6);

// Exponents rho_k(n) of lambda: the phase of the eigenfunction on tower k at
// level n is lambda^{rho_k(n)}. rho[n-1][k] is used for level n.
struct PhaseSchedule {
  std::vector<RatVector> rho;
  const RatVector& at(std::size_t n) const;
};

PhaseSchedule constant_schedule(std::size_t depth, const RatVector& per_vertex);

struct MartingaleReport {
  std::size_t n_from = 0;
  std::size_t n_to = 0;
  bool optimized = false;
  double threshold = 0;
  std::vector<std::size_t> clean_set;
  std::vector<std::pair<std::size_t, std::size_t>> J;  // (l, k), 0-based
  // terms[i] is the max over J at level n_from + i; pair_terms[i][j] the
  // contribution of J[j] (absent pairs at that level are reported as 0).
  std::vector<Interval> terms;
  std::vector<std::vector<Interval>> pair_terms;
};

// Terms max_{(l,k) in J} (1/M_{k,l}(n+1)) sum_{s in S_n(l,k)}
// |1 - lambda^{<s,H(n)> - rho_k(n+1) + rho_l(n)}|^2 for n in [n_from, n_to].
// `mus` holds mu(1), ..., mu(n_to + 1). Without a schedule each phase
// difference is set to the circular mean of the pair's suffix phases.
MartingaleReport martingale_series(const OrderedDiagram& diagram,
                                   const std::vector<MeasureVector>& mus, const Alpha& alpha,
                                   const PhaseSchedule* schedule, std::size_t n_from,
                                   std::size_t n_to, double threshold = 1e-3);

enum class ToeplitzClass { continuous, non_continuous_candidate, excluded };
std::string to_string(ToeplitzClass c);

struct ToeplitzReport {
  ToeplitzClass verdict = ToeplitzClass::excluded;
  std::optional<std::size_t> witness;  // m with alpha = a / p_m
  std::string reason;
  bool exact = true;
};

// q: characteristic sequence q_1, q_2, ...; d: rank. When `bounded` is set
// the sequence is taken to stay bounded beyond the supplied entries.
ToeplitzReport toeplitz_classify(const Alpha& alpha, const std::vector<BigInt>& q, std::size_t d,
                                 bool bounded);

}  // namespace bratteli
