#include <algorithm>
#include <set>
#include <tuple>

#include "bratteli/constructions.hpp"
#include "bratteli/dynamics.hpp"
#include "detail/linear_form.hpp"

namespace bratteli {

ToeplitzRule cyclic_rule() {
  return [](std::size_t, std::size_t q, std::size_t d) {
    Word w(q);
    for (std::size_t i = 0; i < q; ++i) w[i] = static_cast<Letter>(i % d);
    return std::vector<Word>(d, w);
  };
}

ToeplitzRule word_rule(std::vector<std::vector<std::string>> words) {
  return [words = std::move(words)](std::size_t n, std::size_t, std::size_t d) {
    if (n < 2 || n - 2 >= words.size()) {
      throw Error(ErrorCode::out_of_range, "no words supplied for level " + std::to_string(n));
    }
    std::vector<Word> out;
    for (const auto& text : words[n - 2]) out.push_back(word_from_string(text, d));
    return out;
  };
}

OrderedDiagram toeplitz_diagram(const std::vector<BigInt>& q, const ToeplitzRule& rule,
                                std::size_t depth, std::size_t d) {
  if (d == 0 || depth == 0) throw Error(ErrorCode::invalid_argument, "rank and depth must be positive");
  if (q.size() < depth) throw Error(ErrorCode::invalid_argument, "characteristic sequence shorter than depth");
  for (const auto& x : q)
    if (x < 1) throw Error(ErrorCode::invalid_argument, "characteristic entries must be positive");
  std::vector<Level> levels;
  for (std::size_t n = 2; n <= depth; ++n) {
    const std::size_t qn = static_cast<std::size_t>(detail::to_long(q[n - 1]));
    Level level;
    level.words = rule(n, qn, d);
    if (level.words.size() != d) {
      throw Error(ErrorCode::invalid_diagram, "rule returned the wrong number of words at level " + std::to_string(n));
    }
    level.matrix = IntMatrix(d, d);
    for (std::size_t j = 0; j < d; ++j) {
      if (level.words[j].size() != qn) {
        throw Error(ErrorCode::invalid_diagram,
                    "word length differs from q_n at level " + std::to_string(n));
      }
      IntVector counts = letter_counts(level.words[j], d);
      for (std::size_t i = 0; i < d; ++i) level.matrix.at(j, i) = counts[i];
    }
    levels.push_back(std::move(level));
  }
  return OrderedDiagram(IntVector(d, q[0]), std::move(levels));
}

namespace {

std::vector<long> extended_exponents(const std::vector<long>& l, std::size_t depth) {
  if (l.empty()) throw Error(ErrorCode::invalid_argument, "exponent sequence is empty");
  if (l[0] < 0) throw Error(ErrorCode::invalid_argument, "exponents must be nonnegative");
  for (std::size_t i = 1; i < l.size(); ++i)
    if (l[i] <= l[i - 1]) throw Error(ErrorCode::invalid_argument, "exponents must be strictly increasing");
  std::vector<long> out = l;
  while (out.size() < depth) out.push_back(out.back() + 1);
  return out;
}

BigInt pow3(long e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 3, static_cast<unsigned long>(e));
  return r;
}

}  // namespace

std::vector<BigInt> rank3_characteristic(const std::vector<long>& l, std::size_t depth) {
  std::vector<BigInt> q;
  for (long e : extended_exponents(l, depth)) q.push_back(pow3(e));
  return q;
}

OrderedDiagram toeplitz_rank3_example(const std::vector<long>& l, std::size_t depth) {
  const std::vector<BigInt> q = rank3_characteristic(l, depth);
  auto rule = [](std::size_t n, std::size_t qn, std::size_t) {
    const std::size_t t = (qn + 3) / 2;
    if (t < 3) throw Error(ErrorCode::invalid_argument, "t_n < 3 at level " + std::to_string(n));
    Word a, b;
    for (std::size_t i = 0; i + 3 < t; ++i) {
      a.push_back(0);
      a.push_back(1);
    }
    b = a;
    // 1 -> (12)^{t-3} 131, 2 -> 1 (12)^{t-3} 31, 3 -> (12)^{t-3} 131.
    Word w1 = a;
    w1.insert(w1.end(), {0, 2, 0});
    Word w2{0};
    w2.insert(w2.end(), b.begin(), b.end());
    w2.insert(w2.end(), {2, 0});
    return std::vector<Word>{w1, w2, w1};
  };
  return toeplitz_diagram(q, rule, depth, 3);
}

namespace {

// Floors (tower, floor) as half-open runs [begin, end), merged and sorted.
using Run = std::tuple<std::size_t, BigInt, BigInt>;

std::vector<Run> normalize(std::vector<Run> runs) {
  std::sort(runs.begin(), runs.end());
  std::vector<Run> out;
  for (auto& r : runs) {
    if (std::get<1>(r) >= std::get<2>(r)) continue;
    if (!out.empty() && std::get<0>(out.back()) == std::get<0>(r) && std::get<2>(out.back()) >= std::get<1>(r)) {
      std::get<2>(out.back()) = std::max(std::get<2>(out.back()), std::get<2>(r));
    } else {
      out.push_back(std::move(r));
    }
  }
  return out;
}

int rho(std::size_t vertex) { return vertex == 0 ? 1 : -1; }
int parity_sign(const BigInt& x) { return mpz_even_p(x.get_mpz_t()) ? 1 : -1; }

}  // namespace

MinusOneReport minus_one_eigenfunction_check(const OrderedDiagram& diagram, std::size_t depth,
                                             std::size_t cap) {
  if (depth > diagram.depth() || depth < 3) {
    throw Error(ErrorCode::out_of_range, "the check needs 3 <= depth <= diagram depth");
  }
  for (std::size_t n = 1; n <= depth; ++n)
    if (diagram.rank(n) != 3) throw Error(ErrorCode::invalid_diagram, "the check needs a rank-3 diagram");

  MinusOneReport out;
  out.mass_sum = Interval(0L);
  out.ok = true;
  for (std::size_t n = 1; n + 2 <= depth; ++n) {
    MinusOneLevel lv;
    lv.n = n;
    const IntVector h = diagram.heights(n);
    const IntVector H = diagram.heights(n + 1);

    // Blocks of level-n towers inside level-(n+1) towers.
    std::vector<Run> blocks;
    std::vector<Run> identity;
    for (std::size_t j = 0; j < 3; ++j) {
      const Word& w = diagram.word(n + 1, j);
      BigInt offset = 0;
      for (Letter i : w) {
        if (parity_sign(offset) * rho(j) != rho(i)) blocks.emplace_back(j, offset, offset + h[i]);
        if (j == 1 && i == 2) identity.emplace_back(j, offset, offset + h[i]);
        offset += h[i];
      }
    }
    identity.emplace_back(2, BigInt(0), H[2]);
    identity.emplace_back(1, BigInt(0), h[0]);
    identity.emplace_back(1, H[1] - h[0], H[1]);
    blocks = normalize(std::move(blocks));
    identity = normalize(std::move(identity));
    lv.matches_identity = blocks == identity;
    for (const auto& r : blocks) lv.size += static_cast<std::size_t>(detail::to_long(std::get<2>(r) - std::get<1>(r)));

    // Independent membership from f_n and f_{n+1} on every depth-(n+1) prefix.
    std::set<std::pair<std::size_t, BigInt>> brute;
    for (const auto& x : enumerate_prefixes(diagram, n + 1, cap)) {
      PathPrefix low;
      low.order.assign(x.order.begin(), x.order.begin() + static_cast<long>(n));
      low.trace.assign(x.trace.begin(), x.trace.begin() + static_cast<long>(n));
      const BigInt r_low = return_time(diagram, low);
      const BigInt r_high = return_time(diagram, x);
      const int f_low = parity_sign(r_low) * rho(low.top());
      const int f_high = parity_sign(r_high) * rho(x.top());
      if (f_low != f_high) brute.emplace(x.top(), r_high);
    }
    std::set<std::pair<std::size_t, BigInt>> from_blocks;
    for (const auto& [j, b, e] : blocks)
      for (BigInt f = b; f < e; ++f) from_blocks.emplace(j, f);
    lv.matches_brute_force = brute == from_blocks;

    // mu(n+1) from the candidates one level up; exact when they coincide.
    const MeasureSetReport cands = measure_candidates(diagram, n + 1, n + 2);
    const MeasureVector mu = certified_measure(cands);
    lv.mass = Interval(0L);
    for (const auto& [j, b, e] : blocks) lv.mass += Interval(BigInt(e - b)) * mu.values[j];
    const BigInt q_next = diagram.matrix(n + 1).row_sums()[0];
    lv.bound = Interval(Rational(BigInt(4), q_next));
    lv.bound_ok = lv.mass.certainly_less_equal(lv.bound);
    out.mass_sum += lv.mass;
    out.ok = out.ok && lv.matches_identity && lv.matches_brute_force && lv.bound_ok;
    out.levels.push_back(std::move(lv));
  }
  return out;
}

}  // namespace bratteli
