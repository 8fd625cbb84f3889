#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "bratteli/numeric.hpp"

namespace bratteli {

// A letter names a source vertex (0-based) on the previous level.
using Letter = std::uint32_t;
using Word = std::vector<Letter>;

// Edges E_n between V_{n-1} and V_n: matrix(j, i) counts edges i -> j and
// words[j] lists the sources of edges ending at j in increasing order.
struct Level {
  IntMatrix matrix;
  std::vector<Word> words;
};

// Ordered Bratteli diagram of finite depth. Level 1 holds the edges from the
// root: vertex k of V_1 receives h1[k] edges, all with source 0 (the root).
// Levels are numbered 1..depth(); the vertex set V_n has rank(n) elements.
class OrderedDiagram {
 public:
  OrderedDiagram() = default;
  // `levels` are E_2, E_3, ...; their words are checked against the matrices.
  OrderedDiagram(IntVector h1, std::vector<Level> levels);

  std::size_t depth() const { return levels_.size(); }
  std::size_t rank(std::size_t n) const;
  const IntVector& h1() const { return h1_; }

  const Level& level(std::size_t n) const;
  const IntMatrix& matrix(std::size_t n) const { return level(n).matrix; }
  const Word& word(std::size_t n, std::size_t vertex) const;

  // P(n, m) = M(n) ... M(m+1) for 0 <= m <= n <= depth; P(n, n) = I.
  // With m = 0 the root level is included, so P(n, 0) = H(n) as a column.
  IntMatrix product(std::size_t m, std::size_t n) const;
  // H(n) = P(n, 1) H(1); H(0) is the single root count (1).
  IntVector heights(std::size_t n) const;

  // True when every incidence matrix from level 2 on is strictly positive.
  bool is_positive() const;
  // True when all levels from 2 on have the same rank.
  bool is_rank_normalized() const;
  // Truncation to the first n levels.
  OrderedDiagram truncated(std::size_t n) const;

  // E_2, E_3, ... as stored in the diagram file.
  std::vector<Level> upper_levels() const;

 private:
  struct Cache {
    std::mutex mutex;
    std::map<std::pair<std::size_t, std::size_t>, IntMatrix> products;
    std::map<std::size_t, IntVector> heights;
  };

  IntVector h1_;
  std::vector<Level> levels_;  // levels_[n-1] is E_n
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

// Word whose letter counts per source are `counts` in the order given by
// `letters` (used by generators and tests).
Word word_from_string(const std::string& text, std::size_t alphabet);
std::string word_to_string(const Word& word, std::size_t alphabet);
// Letter counts of a word over an alphabet of the given size.
IntVector letter_counts(const Word& word, std::size_t alphabet);

// P(n, m) as a free function with level bounds checked against depth.
IntMatrix product_matrix(const OrderedDiagram& diagram, std::size_t m, std::size_t n);
IntVector heights(const OrderedDiagram& diagram, std::size_t n);

// Contraction along cut levels 0 = c_0 < c_1 < ... < c_r <= depth. Level i of
// the result is the set of paths from V_{c_{i-1}} to V_{c_i}, ordered by the
// last differing edge.
OrderedDiagram telescope(const OrderedDiagram& diagram, const std::vector<std::size_t>& cuts);

// Sources on level `low` of the paths from `vertex` on level `high` down to
// `low`, listed in path order.
Word expand_paths(const OrderedDiagram& diagram, std::size_t high, std::size_t vertex,
                  std::size_t low);

struct ProperReport {
  std::size_t depth = 0;
  bool unique_max = false;
  bool unique_min = false;
  bool proper() const { return unique_max && unique_min; }
};

// Whether exactly one all-maximal and one all-minimal path of length n exist,
// meaning every extension of the depth-n prefix structure is forced.
ProperReport check_proper(const OrderedDiagram& diagram, std::size_t n);

// JSON and DOT serialization. Integers above 2^53 are written as strings.
std::string diagram_to_json(const OrderedDiagram& diagram, int indent = 2);
OrderedDiagram diagram_from_json(const std::string& text);
OrderedDiagram load_diagram(const std::string& path);
void save_diagram(const OrderedDiagram& diagram, const std::string& path);
std::string diagram_to_dot(const OrderedDiagram& diagram, std::size_t max_level = 0);

// The stationary diagram with M(n) = [[1,1],[1,0]] and words "12", "1".
OrderedDiagram fibonacci_diagram(std::size_t depth);

}  // namespace bratteli
