#include "bratteli/dynamics.hpp"

#include <functional>

namespace bratteli {

namespace {

void require_level(const PathPrefix& prefix, std::size_t k) {
  if (k >= prefix.depth()) {
    throw Error(ErrorCode::out_of_range, "suffix level " + std::to_string(k) +
                                             " must be below prefix depth " +
                                             std::to_string(prefix.depth()));
  }
}

// Letter counts of word[begin, end) over the given alphabet.
IntVector count_range(const Word& word, std::size_t begin, std::size_t end, std::size_t alphabet) {
  std::vector<unsigned long> raw(alphabet, 0);
  for (std::size_t i = begin; i < end; ++i) ++raw[word[i]];
  IntVector out(alphabet);
  for (std::size_t i = 0; i < alphabet; ++i) out[i] = raw[i];
  return out;
}

}  // namespace

PathPrefix make_prefix(const OrderedDiagram& diagram, std::size_t top,
                       const std::vector<std::size_t>& order) {
  const std::size_t n = order.size();
  if (n == 0 || n > diagram.depth()) throw Error(ErrorCode::out_of_range, "prefix depth out of range");
  if (top >= diagram.rank(n)) throw Error(ErrorCode::out_of_range, "top vertex out of range");
  PathPrefix p;
  p.order = order;
  p.trace.assign(n, 0);
  p.trace[n - 1] = top;
  for (std::size_t k = n; k >= 1; --k) {
    const Word& w = diagram.word(k, p.trace[k - 1]);
    if (order[k - 1] >= w.size()) {
      throw Error(ErrorCode::out_of_range, "order index " + std::to_string(order[k - 1]) +
                                               " outside word at level " + std::to_string(k));
    }
    if (k >= 2) p.trace[k - 2] = w[order[k - 1]];
  }
  return p;
}

bool is_valid(const OrderedDiagram& diagram, const PathPrefix& prefix) {
  const std::size_t n = prefix.depth();
  if (n == 0 || n > diagram.depth() || prefix.trace.size() != n) return false;
  for (std::size_t k = 1; k <= n; ++k) {
    if (prefix.trace[k - 1] >= diagram.rank(k)) return false;
    const Word& w = diagram.word(k, prefix.trace[k - 1]);
    if (prefix.order[k - 1] >= w.size()) return false;
    if (k >= 2 && w[prefix.order[k - 1]] != prefix.trace[k - 2]) return false;
  }
  return true;
}

PathPrefix minimal_prefix(const OrderedDiagram& diagram, std::size_t n, std::size_t vertex) {
  return make_prefix(diagram, vertex, std::vector<std::size_t>(n, 0));
}

PathPrefix maximal_prefix(const OrderedDiagram& diagram, std::size_t n, std::size_t vertex) {
  PathPrefix p;
  p.order.assign(n, 0);
  p.trace.assign(n, 0);
  std::size_t v = vertex;
  for (std::size_t k = n; k >= 1; --k) {
    const Word& w = diagram.word(k, v);
    p.trace[k - 1] = v;
    p.order[k - 1] = w.size() - 1;
    v = w.back();
  }
  return p;
}

bool is_maximal(const OrderedDiagram& diagram, const PathPrefix& prefix) {
  for (std::size_t k = 1; k <= prefix.depth(); ++k) {
    if (prefix.order[k - 1] + 1 < diagram.word(k, prefix.trace[k - 1]).size()) return false;
  }
  return true;
}

bool is_minimal(const PathPrefix& prefix) {
  for (std::size_t o : prefix.order)
    if (o != 0) return false;
  return true;
}

std::optional<PathPrefix> vershik_step(const OrderedDiagram& diagram, const PathPrefix& prefix) {
  const std::size_t n = prefix.depth();
  for (std::size_t k = 1; k <= n; ++k) {
    const Word& w = diagram.word(k, prefix.trace[k - 1]);
    if (prefix.order[k - 1] + 1 >= w.size()) continue;
    PathPrefix next = prefix;
    next.order[k - 1] += 1;
    // Reset everything below level k to the minimal path into the new source.
    for (std::size_t j = k; j >= 2; --j) {
      next.trace[j - 2] = diagram.word(j, next.trace[j - 1])[next.order[j - 1]];
      next.order[j - 2] = 0;
    }
    return next;
  }
  return std::nullopt;
}

IntVector suffix(const OrderedDiagram& diagram, const PathPrefix& prefix, std::size_t k) {
  require_level(prefix, k);
  const Word& w = diagram.word(k + 1, prefix.trace[k]);
  return count_range(w, prefix.order[k] + 1, w.size(), diagram.rank(k));
}

IntVector leading(const OrderedDiagram& diagram, const PathPrefix& prefix, std::size_t k) {
  require_level(prefix, k);
  const Word& w = diagram.word(k + 1, prefix.trace[k]);
  return count_range(w, 0, prefix.order[k], diagram.rank(k));
}

BigInt return_time(const OrderedDiagram& diagram, const PathPrefix& prefix) {
  BigInt r = 0;
  for (std::size_t k = 0; k < prefix.depth(); ++k) {
    r += dot(leading(diagram, prefix, k), diagram.heights(k));
  }
  return r;
}

BigInt top_distance(const OrderedDiagram& diagram, const PathPrefix& prefix) {
  BigInt r = 0;
  for (std::size_t k = 0; k < prefix.depth(); ++k) {
    r += dot(suffix(diagram, prefix, k), diagram.heights(k));
  }
  return r;
}

TowerCoordinate tower_coordinate(const OrderedDiagram& diagram, const PathPrefix& prefix) {
  return TowerCoordinate{prefix.depth(), prefix.top(), return_time(diagram, prefix)};
}

PathPrefix prefix_at(const OrderedDiagram& diagram, std::size_t n, std::size_t vertex,
                     const BigInt& floor) {
  IntVector h = diagram.heights(n);
  if (vertex >= h.size()) throw Error(ErrorCode::out_of_range, "vertex out of range");
  if (floor < 0 || floor >= h[vertex]) throw Error(ErrorCode::out_of_range, "floor out of range");
  PathPrefix p;
  p.order.assign(n, 0);
  p.trace.assign(n, 0);
  BigInt rest = floor;
  std::size_t v = vertex;
  for (std::size_t k = n; k >= 1; --k) {
    p.trace[k - 1] = v;
    const Word& w = diagram.word(k, v);
    IntVector below = diagram.heights(k - 1);
    std::size_t pos = 0;
    while (rest >= below[w[pos]]) {
      rest -= below[w[pos]];
      ++pos;
    }
    p.order[k - 1] = pos;
    v = w[pos];
  }
  return p;
}

std::vector<PathPrefix> enumerate_prefixes(const OrderedDiagram& diagram, std::size_t n,
                                           std::size_t cap) {
  BigInt total = 0;
  for (const auto& h : diagram.heights(n)) total += h;
  if (total > BigInt(static_cast<unsigned long>(cap))) {
    throw Error(ErrorCode::cap_exceeded, "prefix enumeration of " + total.get_str() +
                                             " paths exceeds cap " + std::to_string(cap));
  }
  std::vector<PathPrefix> out;
  out.reserve(total.get_ui());
  PathPrefix current;
  current.order.assign(n, 0);
  current.trace.assign(n, 0);
  // Depth-first from the top; the top edge is the most significant digit.
  std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t k, std::size_t v) {
    current.trace[k - 1] = v;
    const Word& w = diagram.word(k, v);
    for (std::size_t pos = 0; pos < w.size(); ++pos) {
      current.order[k - 1] = pos;
      if (k == 1) {
        out.push_back(current);
      } else {
        walk(k - 1, w[pos]);
      }
    }
  };
  for (std::size_t v = 0; v < diagram.rank(n); ++v) walk(n, v);
  return out;
}

std::vector<PathPrefix> full_cycle(const OrderedDiagram& diagram, std::size_t n, std::size_t cap) {
  std::vector<PathPrefix> out;
  for (std::size_t v = 0; v < diagram.rank(n); ++v) {
    std::optional<PathPrefix> p = minimal_prefix(diagram, n, v);
    while (p) {
      if (out.size() >= cap) throw Error(ErrorCode::cap_exceeded, "orbit exceeds cap");
      out.push_back(*p);
      p = vershik_step(diagram, *p);
    }
  }
  return out;
}

std::vector<IntVector> enumerate_suffixes(const OrderedDiagram& diagram, std::size_t n,
                                          std::size_t l, std::size_t k) {
  const Word& w = diagram.word(n + 1, k);
  const std::size_t alphabet = diagram.rank(n);
  if (l >= alphabet) throw Error(ErrorCode::out_of_range, "source vertex out of range");
  std::vector<unsigned long> trailing(alphabet, 0);
  for (Letter c : w) ++trailing[c];
  std::vector<IntVector> out;
  for (Letter c : w) {
    --trailing[c];
    if (c != l) continue;
    IntVector s(alphabet);
    for (std::size_t i = 0; i < alphabet; ++i) s[i] = trailing[i];
    out.push_back(std::move(s));
  }
  return out;
}

PathPrefix contract_prefix(const OrderedDiagram& diagram, const std::vector<std::size_t>& cuts,
                           const PathPrefix& prefix) {
  if (cuts.size() < 2 || cuts.front() != 0 || cuts.back() != prefix.depth()) {
    throw Error(ErrorCode::invalid_argument, "cuts must run from 0 to the prefix depth");
  }
  PathPrefix out;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const std::size_t low = cuts[i - 1];
    const std::size_t high = cuts[i];
    // Position of the segment among the paths from V_low into tau_high.
    BigInt pos = 0;
    for (std::size_t k = low + 1; k <= high; ++k) {
      IntVector counts = diagram.product(low, k - 1).row_sums();
      const Word& w = diagram.word(k, prefix.trace[k - 1]);
      for (std::size_t j = 0; j < prefix.order[k - 1]; ++j) pos += counts[w[j]];
    }
    out.order.push_back(pos.get_ui());
    out.trace.push_back(prefix.trace[high - 1]);
  }
  return out;
}

}  // namespace bratteli
