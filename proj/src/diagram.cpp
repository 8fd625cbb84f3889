#include "bratteli/diagram.hpp"

#include <algorithm>
#include <sstream>

namespace bratteli {

namespace {

void validate_level(const Level& level, std::size_t n, std::size_t prev_rank) {
  const IntMatrix& m = level.matrix;
  const std::string where = "level " + std::to_string(n);
  if (m.cols() != prev_rank) {
    throw Error(ErrorCode::invalid_diagram, where + ": matrix has " + std::to_string(m.cols()) +
                                                " columns, previous level has " +
                                                std::to_string(prev_rank) + " vertices");
  }
  if (m.rows() == 0) throw Error(ErrorCode::invalid_diagram, where + ": no vertices");
  if (level.words.size() != m.rows()) {
    throw Error(ErrorCode::invalid_diagram, where + ": expected one order word per vertex");
  }
  for (std::size_t j = 0; j < m.rows(); ++j) {
    BigInt total = 0;
    for (std::size_t i = 0; i < m.cols(); ++i) {
      if (m.at(j, i) < 0) throw Error(ErrorCode::invalid_diagram, where + ": negative entry");
      total += m.at(j, i);
    }
    if (total == 0) {
      throw Error(ErrorCode::invalid_diagram,
                  where + ": vertex " + std::to_string(j + 1) + " has no incoming edge");
    }
    IntVector counts = letter_counts(level.words[j], m.cols());
    for (std::size_t i = 0; i < m.cols(); ++i) {
      if (counts[i] != m.at(j, i)) {
        throw Error(ErrorCode::invalid_diagram,
                    where + ": order word of vertex " + std::to_string(j + 1) +
                        " does not match row " + std::to_string(j + 1) + " of the matrix");
      }
    }
  }
}

}  // namespace

IntVector letter_counts(const Word& word, std::size_t alphabet) {
  std::vector<unsigned long> raw(alphabet, 0);
  for (Letter c : word) {
    if (c >= alphabet) throw Error(ErrorCode::invalid_diagram, "letter outside alphabet");
    ++raw[c];
  }
  IntVector counts(alphabet);
  for (std::size_t i = 0; i < alphabet; ++i) counts[i] = raw[i];
  return counts;
}

Word word_from_string(const std::string& text, std::size_t alphabet) {
  Word w;
  auto bad = [&](const std::string& why) {
    return Error(ErrorCode::parse, "order word '" + text + "': " + why);
  };
  if (alphabet <= 9 && text.find(',') == std::string::npos) {
    w.reserve(text.size());
    for (char c : text) {
      if (c < '1' || c > '9') throw bad("expected digits 1-9");
      auto letter = static_cast<Letter>(c - '1');
      if (letter >= alphabet) throw bad("letter exceeds previous rank");
      w.push_back(letter);
    }
    return w;
  }
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789 ") != std::string::npos) {
      throw bad("expected comma-separated positive integers");
    }
    unsigned long v = std::stoul(item);
    if (v == 0 || v > alphabet) throw bad("letter outside 1.." + std::to_string(alphabet));
    w.push_back(static_cast<Letter>(v - 1));
  }
  return w;
}

std::string word_to_string(const Word& word, std::size_t alphabet) {
  std::string out;
  if (alphabet <= 9) {
    out.reserve(word.size());
    for (Letter c : word) out.push_back(static_cast<char>('1' + c));
    return out;
  }
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(word[i] + 1);
  }
  return out;
}

OrderedDiagram::OrderedDiagram(IntVector h1, std::vector<Level> levels) : h1_(std::move(h1)) {
  if (h1_.empty()) throw Error(ErrorCode::invalid_diagram, "h1 must be non-empty");
  Level first;
  first.matrix = IntMatrix(h1_.size(), 1);
  for (std::size_t k = 0; k < h1_.size(); ++k) {
    if (h1_[k] <= 0) throw Error(ErrorCode::invalid_diagram, "h1 entries must be positive");
    if (!h1_[k].fits_ulong_p()) throw Error(ErrorCode::invalid_diagram, "h1 entry too large");
    first.matrix.at(k, 0) = h1_[k];
    first.words.emplace_back(h1_[k].get_ui(), Letter{0});
  }
  levels_.reserve(levels.size() + 1);
  levels_.push_back(std::move(first));
  for (auto& level : levels) {
    validate_level(level, levels_.size() + 1, levels_.back().matrix.rows());
    levels_.push_back(std::move(level));
  }
}

std::size_t OrderedDiagram::rank(std::size_t n) const {
  if (n == 0) return 1;
  return level(n).matrix.rows();
}

const Level& OrderedDiagram::level(std::size_t n) const {
  if (n == 0 || n > levels_.size()) {
    throw Error(ErrorCode::out_of_range, "level " + std::to_string(n) + " outside 1.." +
                                             std::to_string(levels_.size()));
  }
  return levels_[n - 1];
}

const Word& OrderedDiagram::word(std::size_t n, std::size_t vertex) const {
  const Level& l = level(n);
  if (vertex >= l.words.size()) {
    throw Error(ErrorCode::out_of_range, "vertex " + std::to_string(vertex + 1) +
                                             " outside level " + std::to_string(n));
  }
  return l.words[vertex];
}

IntMatrix OrderedDiagram::product(std::size_t m, std::size_t n) const {
  if (m > n || n > depth()) {
    throw Error(ErrorCode::out_of_range, "product P(" + std::to_string(n) + "," +
                                             std::to_string(m) + ") outside depth " +
                                             std::to_string(depth()));
  }
  if (m == n) return IntMatrix::identity(rank(n));
  if (n == m + 1) return matrix(n);
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->products.find({m, n});
    if (it != cache_->products.end()) return it->second;
  }
  IntMatrix p = matrix(n) * product(m, n - 1);
  std::lock_guard<std::mutex> lock(cache_->mutex);
  return cache_->products.emplace(std::make_pair(m, n), std::move(p)).first->second;
}

IntVector OrderedDiagram::heights(std::size_t n) const {
  if (n > depth()) {
    throw Error(ErrorCode::out_of_range, "heights at level " + std::to_string(n) +
                                             " beyond depth " + std::to_string(depth()));
  }
  if (n == 0) return IntVector{BigInt(1)};
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->heights.find(n);
    if (it != cache_->heights.end()) return it->second;
  }
  IntVector h = matrix(n).apply(heights(n - 1));
  std::lock_guard<std::mutex> lock(cache_->mutex);
  return cache_->heights.emplace(n, std::move(h)).first->second;
}

bool OrderedDiagram::is_positive() const {
  for (std::size_t n = 2; n <= depth(); ++n)
    if (!matrix(n).is_positive()) return false;
  return true;
}

bool OrderedDiagram::is_rank_normalized() const {
  for (std::size_t n = 3; n <= depth(); ++n)
    if (rank(n) != rank(2)) return false;
  return true;
}

OrderedDiagram OrderedDiagram::truncated(std::size_t n) const {
  if (n == 0 || n > depth()) throw Error(ErrorCode::out_of_range, "truncation depth out of range");
  std::vector<Level> upper(levels_.begin() + 1, levels_.begin() + static_cast<std::ptrdiff_t>(n));
  return OrderedDiagram(h1_, std::move(upper));
}

std::vector<Level> OrderedDiagram::upper_levels() const {
  return std::vector<Level>(levels_.begin() + 1, levels_.end());
}

IntMatrix product_matrix(const OrderedDiagram& diagram, std::size_t m, std::size_t n) {
  if (m == 0) throw Error(ErrorCode::out_of_range, "product levels start at 1");
  return diagram.product(m, n);
}

IntVector heights(const OrderedDiagram& diagram, std::size_t n) { return diagram.heights(n); }

Word expand_paths(const OrderedDiagram& diagram, std::size_t high, std::size_t vertex,
                  std::size_t low) {
  if (low > high || high > diagram.depth()) {
    throw Error(ErrorCode::out_of_range, "expand_paths: invalid level range");
  }
  if (low == high) return Word{static_cast<Letter>(vertex)};
  // Expansions of every vertex one level below `high`, built bottom-up.
  std::vector<Word> current(diagram.rank(low));
  for (std::size_t v = 0; v < current.size(); ++v) current[v] = Word{static_cast<Letter>(v)};
  for (std::size_t n = low + 1; n <= high; ++n) {
    std::vector<Word> next(diagram.rank(n));
    for (std::size_t v = 0; v < next.size(); ++v) {
      if (n == high && v != vertex) continue;
      for (Letter c : diagram.word(n, v)) {
        const Word& part = current[c];
        next[v].insert(next[v].end(), part.begin(), part.end());
      }
    }
    current = std::move(next);
  }
  return current[vertex];
}

OrderedDiagram telescope(const OrderedDiagram& diagram, const std::vector<std::size_t>& cuts) {
  if (cuts.size() < 2 || cuts.front() != 0) {
    throw Error(ErrorCode::invalid_argument, "cut levels must start at 0 and contain a second level");
  }
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    if (cuts[i] <= cuts[i - 1]) {
      throw Error(ErrorCode::invalid_argument, "cut levels must be strictly increasing");
    }
  }
  if (cuts.back() > diagram.depth()) {
    throw Error(ErrorCode::out_of_range, "cut level beyond diagram depth");
  }
  IntVector h1 = diagram.heights(cuts[1]);
  std::vector<Level> levels;
  for (std::size_t i = 2; i < cuts.size(); ++i) {
    Level level;
    level.matrix = diagram.product(cuts[i - 1], cuts[i]);
    for (std::size_t v = 0; v < diagram.rank(cuts[i]); ++v) {
      level.words.push_back(expand_paths(diagram, cuts[i], v, cuts[i - 1]));
    }
    levels.push_back(std::move(level));
  }
  return OrderedDiagram(std::move(h1), std::move(levels));
}

ProperReport check_proper(const OrderedDiagram& diagram, std::size_t n) {
  if (n == 0 || n > diagram.depth()) {
    throw Error(ErrorCode::out_of_range, "check_proper: level out of range");
  }
  // For every vertex of V_n there is exactly one all-minimal and one
  // all-maximal path into it. Those paths, viewed from different top
  // vertices, coincide below level k exactly when the first (last) letters of
  // the level-k words agree; uniqueness of the global extreme path therefore
  // means each level from 2 to n has a single first letter and a single last
  // letter across its vertices.
  ProperReport report;
  report.depth = n;
  report.unique_min = true;
  report.unique_max = true;
  for (std::size_t k = 2; k <= n; ++k) {
    const Level& level = diagram.level(k);
    Letter first = level.words.front().front();
    Letter last = level.words.front().back();
    for (const Word& w : level.words) {
      if (w.front() != first) report.unique_min = false;
      if (w.back() != last) report.unique_max = false;
    }
  }
  return report;
}

OrderedDiagram fibonacci_diagram(std::size_t depth) {
  if (depth == 0) throw Error(ErrorCode::invalid_argument, "depth must be positive");
  std::vector<Level> levels;
  for (std::size_t n = 2; n <= depth; ++n) {
    Level l;
    l.matrix = IntMatrix{{1, 1}, {1, 0}};
    l.words = {Word{0, 1}, Word{0}};
    levels.push_back(std::move(l));
  }
  return OrderedDiagram(IntVector{1, 1}, std::move(levels));
}

}  // namespace bratteli
