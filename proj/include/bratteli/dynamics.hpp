#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "bratteli/diagram.hpp"

namespace bratteli {

// Finite path from the root: order[k-1] is the position o_k of the level-k
// edge inside the order word of its end vertex trace[k-1] = tau_k.
// Everything below the top vertex is determined by the order indices.
struct PathPrefix {
  std::vector<std::size_t> order;
  std::vector<std::size_t> trace;

  std::size_t depth() const { return order.size(); }
  std::size_t top() const { return trace.back(); }
  friend bool operator==(const PathPrefix&, const PathPrefix&) = default;
  friend auto operator<=>(const PathPrefix&, const PathPrefix&) = default;
};

// Builds the prefix ending at `top` with the given order indices (k = 1..n),
// deriving the vertex trace. Throws if an index is outside its word.
PathPrefix make_prefix(const OrderedDiagram& diagram, std::size_t top,
                       const std::vector<std::size_t>& order);
bool is_valid(const OrderedDiagram& diagram, const PathPrefix& prefix);

PathPrefix minimal_prefix(const OrderedDiagram& diagram, std::size_t n, std::size_t vertex);
PathPrefix maximal_prefix(const OrderedDiagram& diagram, std::size_t n, std::size_t vertex);
bool is_maximal(const OrderedDiagram& diagram, const PathPrefix& prefix);
bool is_minimal(const PathPrefix& prefix);

// Successor in the Vershik order; empty when every edge is maximal, i.e. the
// successor lives above the prefix depth.
std::optional<PathPrefix> vershik_step(const OrderedDiagram& diagram, const PathPrefix& prefix);

// Trailing counts s_k for 0 <= k < depth: component i counts the letters i
// after position o_{k+1} in the word of tau_{k+1}. For k = 0 the vector has a
// single component (edges from the root).
IntVector suffix(const OrderedDiagram& diagram, const PathPrefix& prefix, std::size_t k);
// Leading counts: the letters before position o_{k+1}.
IntVector leading(const OrderedDiagram& diagram, const PathPrefix& prefix, std::size_t k);

// Floor of the prefix inside its level-n tower, counted from the base:
// sum over k of <leading_k, H(k)>, with H(0) = (1).
BigInt return_time(const OrderedDiagram& diagram, const PathPrefix& prefix);
// Steps from the prefix to the top of its tower: sum over k of <s_k, H(k)>.
// return_time + top_distance = h_{tau_n}(n) - 1.
BigInt top_distance(const OrderedDiagram& diagram, const PathPrefix& prefix);

struct TowerCoordinate {
  std::size_t level = 0;
  std::size_t vertex = 0;
  BigInt floor;
  friend bool operator==(const TowerCoordinate&, const TowerCoordinate&) = default;
};

TowerCoordinate tower_coordinate(const OrderedDiagram& diagram, const PathPrefix& prefix);
// Inverse of tower_coordinate.
PathPrefix prefix_at(const OrderedDiagram& diagram, std::size_t n, std::size_t vertex,
                     const BigInt& floor);

// All depth-n prefixes, tower by tower in vertex order, each tower listed
// from base to top. Throws cap_exceeded if sum_k h_k(n) > cap.
std::vector<PathPrefix> enumerate_prefixes(const OrderedDiagram& diagram, std::size_t n,
                                           std::size_t cap = 1u << 22);

// The orbit visiting every depth-n prefix: Vershik steps within each tower,
// with the top of tower k followed by the base of tower k + 1.
std::vector<PathPrefix> full_cycle(const OrderedDiagram& diagram, std::size_t n,
                                   std::size_t cap = 1u << 22);

// S_n(l, k): suffix vectors s_n(x) over paths with tau_n = l, tau_{n+1} = k,
// one per occurrence of l in the level-(n+1) word of k, in word order.
std::vector<IntVector> enumerate_suffixes(const OrderedDiagram& diagram, std::size_t n,
                                          std::size_t l, std::size_t k);

// Image of a prefix of `diagram` in its contraction along `cuts`.
PathPrefix contract_prefix(const OrderedDiagram& diagram, const std::vector<std::size_t>& cuts,
                           const PathPrefix& prefix);

}  // namespace bratteli
