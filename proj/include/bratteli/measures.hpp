#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "bratteli/diagram.hpp"

namespace bratteli {

// Tower-base masses mu_k(m) at one level. `exact` is filled when the values
// are known as rationals; `values` always holds certified enclosures.
struct MeasureVector {
  std::size_t level = 0;
  IntervalVector values;
  std::optional<RatVector> exact;
};

MeasureVector measure_from_rationals(std::size_t level, const RatVector& values);

struct MeasureSetReport {
  std::size_t level = 0;
  std::size_t horizon = 0;
  // c_k = P^T(N, m) e_k / h_k(N), so that <c_k, H(m)> = 1.
  std::vector<RatVector> candidates;
  // Largest max-norm distance between two candidates.
  Rational diameter;
  double tolerance = 0;
  // Single-linkage clusters of candidates at distance < tolerance, each
  // listed by increasing vertex index; clusters ordered by first member.
  std::vector<std::vector<std::size_t>> clusters;
  bool unique_ergodicity = false;
};

MeasureSetReport measure_candidates(const OrderedDiagram& diagram, std::size_t m, std::size_t N,
                                    double tol = 1e-6);

// Componentwise interval hull of the candidates: every invariant measure's
// level-m vector lies in it. Exact when all candidates coincide.
MeasureVector certified_measure(const MeasureSetReport& report);

// mu(n) = M^T(n+1) mu(n+1), from the top level down to level 1.
std::vector<MeasureVector> measure_sequence(const OrderedDiagram& diagram, const MeasureVector& top);

// Whether mu(m) = M^T(m+1) mu(m+1) and <mu(m), H(m)> = 1: exact comparison for
// rational vectors, enclosure overlap for intervals.
bool satisfies_relation(const OrderedDiagram& diagram, const MeasureVector& lower,
                        const MeasureVector& upper);
bool is_normalized(const OrderedDiagram& diagram, const MeasureVector& mu);

// mu{tau_n = k} = h_k(n) mu_k(n).
Interval tower_mass(const OrderedDiagram& diagram, const MeasureVector& mu, std::size_t k);
// mu{tau_n = l, tau_{n+1} = k} = M_{k,l}(n+1) h_l(n) mu_k(n+1), with mu at n+1.
Interval joint_mass(const OrderedDiagram& diagram, const MeasureVector& mu_next, std::size_t l,
                    std::size_t k);

struct CleanReport {
  double threshold = 0;
  std::vector<std::size_t> kept;        // I: liminf of tower mass judged positive
  std::vector<std::size_t> discarded;   // complement: tower mass judged summable
  // Per vertex: tower masses by level (upper endpoints), smallest mass over
  // the second half of the levels, and partial sums of the masses.
  std::vector<std::vector<double>> masses;
  std::vector<double> tail_minimum;
  std::vector<double> partial_sums;
  std::vector<bool> geometric_decay;
};

// Finite-depth evidence for a clean representation. A vertex is kept when its
// tower mass stays above `threshold` over the second half of the levels and
// does not decay geometrically (consecutive ratios below 1/2).
CleanReport clean_diagnostic(const OrderedDiagram& diagram, const std::vector<MeasureVector>& mus,
                             double threshold = 1e-3);

}  // namespace bratteli
