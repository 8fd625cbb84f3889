#pragma once

// Brute-force reference implementations used to cross-check the library.
// Nothing here calls into the dynamics or measures code.

#include <algorithm>
#include <cstddef>
#include <map>
#include <random>
#include <vector>

#include "bratteli/diagram.hpp"

namespace oracle {

using bratteli::BigInt;
using bratteli::IntMatrix;
using bratteli::IntVector;
using bratteli::Letter;
using bratteli::Level;
using bratteli::OrderedDiagram;
using bratteli::Rational;
using bratteli::RatVector;
using bratteli::Word;

// Proper ordered diagram: every level shares one first letter and one last
// letter across its words. Rank per level in 1..max_rank.
inline OrderedDiagram random_proper(std::mt19937_64& rng, std::size_t max_rank = 3,
                                    std::size_t max_depth = 5, long max_entry = 3) {
  auto pick = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
  const std::size_t depth = static_cast<std::size_t>(pick(1, static_cast<long>(max_depth)));
  std::size_t rank = static_cast<std::size_t>(pick(1, static_cast<long>(max_rank)));
  IntVector h1;
  for (std::size_t k = 0; k < rank; ++k) h1.emplace_back(pick(1, max_entry));
  std::vector<Level> levels;
  for (std::size_t n = 2; n <= depth; ++n) {
    const std::size_t next = static_cast<std::size_t>(pick(1, static_cast<long>(max_rank)));
    const Letter first = static_cast<Letter>(pick(0, static_cast<long>(rank) - 1));
    const Letter last = static_cast<Letter>(pick(0, static_cast<long>(rank) - 1));
    Level level;
    level.matrix = IntMatrix(next, rank);
    for (std::size_t j = 0; j < next; ++j) {
      std::vector<long> counts(rank);
      for (auto& c : counts) c = pick(0, max_entry);
      counts[first] = std::max(counts[first], 1L);
      counts[last] = std::max(counts[last], 1L);
      long total = 0;
      for (long c : counts) total += c;
      if (first == last && total > 1) counts[first] = std::max(counts[first], 2L);
      Word middle;
      for (std::size_t i = 0; i < rank; ++i) {
        long c = counts[i] - (i == first ? 1 : 0) - (i == last ? 1 : 0);
        if (first == last && i == first && counts[i] == 1) c = 0;
        for (long t = 0; t < c; ++t) middle.push_back(static_cast<Letter>(i));
      }
      std::shuffle(middle.begin(), middle.end(), rng);
      Word w{first};
      w.insert(w.end(), middle.begin(), middle.end());
      if (!(first == last && counts[first] == 1)) w.push_back(last);
      for (std::size_t i = 0; i < rank; ++i) level.matrix.at(j, i) = counts[i];
      level.words.push_back(std::move(w));
    }
    levels.push_back(std::move(level));
    rank = next;
  }
  return OrderedDiagram(std::move(h1), std::move(levels));
}

// P(n, m) by folding single level matrices from scratch.
inline IntMatrix naive_product(const OrderedDiagram& d, std::size_t m, std::size_t n) {
  const std::size_t size = m == 0 ? 1 : d.rank(m);
  IntMatrix acc = IntMatrix::identity(size);
  for (std::size_t k = m + 1; k <= n; ++k) {
    IntMatrix a;
    if (k == 1) {
      a = IntMatrix(d.h1().size(), 1);
      for (std::size_t i = 0; i < d.h1().size(); ++i) a.at(i, 0) = d.h1()[i];
    } else {
      a = d.matrix(k);
    }
    IntMatrix next(a.rows(), acc.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < acc.cols(); ++j)
        for (std::size_t t = 0; t < a.cols(); ++t) next.at(i, j) += a.at(i, t) * acc.at(t, j);
    acc = std::move(next);
  }
  return acc;
}

// Path of depth n as (order positions, vertices), level 1 first.
struct Path {
  std::vector<std::size_t> order;
  std::vector<std::size_t> trace;
};

// Vershik order inside one tower: the highest level where the positions
// differ decides.
inline bool vershik_less(const Path& a, const Path& b) {
  for (std::size_t k = a.order.size(); k-- > 0;)
    if (a.order[k] != b.order[k]) return a.order[k] < b.order[k];
  return false;
}

// towers[k] lists the depth-n paths ending at vertex k sorted by the order.
inline std::vector<std::vector<Path>> sorted_towers(const OrderedDiagram& d, std::size_t n) {
  std::vector<std::vector<Path>> by_vertex(d.h1().size());
  for (std::size_t k = 0; k < d.h1().size(); ++k)
    for (std::size_t p = 0; p < d.h1()[k].get_ui(); ++p) by_vertex[k].push_back(Path{{p}, {k}});
  for (std::size_t level = 2; level <= n; ++level) {
    std::vector<std::vector<Path>> up(d.rank(level));
    for (std::size_t j = 0; j < d.rank(level); ++j) {
      const Word& w = d.word(level, j);
      for (std::size_t p = 0; p < w.size(); ++p) {
        for (const Path& below : by_vertex[w[p]]) {
          Path x = below;
          x.order.push_back(p);
          x.trace.push_back(j);
          up[j].push_back(std::move(x));
        }
      }
    }
    by_vertex = std::move(up);
  }
  for (auto& t : by_vertex) std::sort(t.begin(), t.end(), vershik_less);
  return by_vertex;
}

// Exact rational matrix-vector product.
inline RatVector apply(const IntMatrix& a, const RatVector& v) {
  RatVector out(a.rows(), Rational(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[i] += Rational(a.at(i, j)) * v[j];
  return out;
}

inline bool integral(const RatVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x.get_den() == 1; });
}

}  // namespace oracle
