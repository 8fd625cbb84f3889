#include <doctest.h>

#include <random>
#include <thread>

#include "bratteli/diagram.hpp"
#include "bratteli/dynamics.hpp"
#include "bratteli/json_util.hpp"
#include "oracles.hpp"

using namespace bratteli;

namespace {

bool same_levels(const OrderedDiagram& a, const OrderedDiagram& b) {
  if (a.depth() != b.depth() || a.h1() != b.h1()) return false;
  for (std::size_t n = 2; n <= a.depth(); ++n) {
    if (!(a.matrix(n) == b.matrix(n))) return false;
    if (a.level(n).words != b.level(n).words) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("products match a naive fold of level matrices") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    OrderedDiagram d = oracle::random_proper(rng, 3, 5, 3);
    for (std::size_t m = 0; m <= d.depth(); ++m)
      for (std::size_t n = m; n <= d.depth(); ++n) CHECK(d.product(m, n) == oracle::naive_product(d, m, n));
    for (std::size_t n = 1; n <= d.depth(); ++n) CHECK(d.heights(n) == d.product(0, n).column(0));
  }
}

TEST_CASE("Fibonacci products and heights") {
  OrderedDiagram d = fibonacci_diagram(6);
  CHECK(d.product(3, 3) == IntMatrix::identity(2));
  CHECK(d.product(1, 3) == IntMatrix{{2, 1}, {1, 1}});
  CHECK(d.heights(1) == IntVector{1, 1});
  CHECK(d.heights(2) == IntVector{2, 1});
  CHECK(d.heights(6) == IntVector{13, 8});
  // Composition P(n, m) = P(n, k) P(k, m).
  CHECK(d.product(1, 6) == d.product(4, 6) * d.product(1, 4));
  CHECK_THROWS_AS(d.product(4, 3), Error);
  CHECK_THROWS_AS(d.product(1, 7), Error);
}

TEST_CASE("concurrent product queries agree") {
  OrderedDiagram d = fibonacci_diagram(60);
  const IntMatrix expected = oracle::naive_product(d, 1, 60);
  std::vector<IntMatrix> results(8);
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < results.size(); ++t)
    threads.emplace_back([&, t] { results[t] = d.product(1, 60); });
  for (auto& th : threads) th.join();
  for (const auto& r : results) CHECK(r == expected);
}

TEST_CASE("words must match the incidence matrix") {
  Level bad;
  bad.matrix = IntMatrix{{1, 1}, {1, 0}};
  bad.words = {Word{0, 0}, Word{0}};
  CHECK_THROWS_AS(OrderedDiagram(IntVector{1, 1}, {bad}), Error);
  CHECK_THROWS_AS(OrderedDiagram(IntVector{}, {}), Error);
  CHECK_THROWS_AS(OrderedDiagram(IntVector{0}, {}), Error);
}

TEST_CASE("properness by first and last letters") {
  CHECK(check_proper(fibonacci_diagram(5), 5).unique_min);
  CHECK_FALSE(check_proper(fibonacci_diagram(5), 5).unique_max);
  Level l;
  l.matrix = IntMatrix{{1, 1}, {1, 1}};
  l.words = {word_from_string("12", 2), word_from_string("21", 2)};
  OrderedDiagram d(IntVector{1, 1}, {l});
  CHECK_FALSE(check_proper(d, 2).proper());
  CHECK(check_proper(d, 1).proper());
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    OrderedDiagram r = oracle::random_proper(rng);
    CHECK(check_proper(r, r.depth()).proper());
  }
}

TEST_CASE("telescoping preserves heights and the orbit order") {
  std::mt19937_64 rng(99);
  int checked = 0;
  while (checked < 25) {
    OrderedDiagram d = oracle::random_proper(rng, 3, 5, 2);
    if (d.depth() < 4) continue;
    ++checked;
    const std::vector<std::size_t> cuts{0, 2, 4};
    OrderedDiagram t = telescope(d, cuts);
    REQUIRE(t.depth() == 2);
    CHECK(t.heights(1) == d.heights(2));
    CHECK(t.heights(2) == d.heights(4));
    CHECK(t.matrix(2) == d.product(2, 4));
    const auto low = full_cycle(d, 4);
    const auto high = full_cycle(t, 2);
    REQUIRE(low.size() == high.size());
    for (std::size_t i = 0; i < low.size(); ++i) CHECK(contract_prefix(d, cuts, low[i]) == high[i]);
  }
  OrderedDiagram f = fibonacci_diagram(5);
  CHECK(same_levels(telescope(f, {0, 1, 2, 3, 4, 5}), f));
}

TEST_CASE("expand_paths lists sources in path order") {
  OrderedDiagram d = fibonacci_diagram(4);
  CHECK(expand_paths(d, 3, 0, 1) == Word{0, 1, 0});
  CHECK(expand_paths(d, 3, 1, 1) == Word{0, 1});
}

TEST_CASE("JSON round trip and big integer encoding") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    OrderedDiagram d = oracle::random_proper(rng);
    CHECK(same_levels(diagram_from_json(diagram_to_json(d)), d));
  }
  BigInt big("123456789012345678901234567890");
  CHECK(bigint_to_json(big).is_string());
  CHECK(bigint_from_json(bigint_to_json(big)) == big);
  CHECK(bigint_to_json(BigInt(42)).is_number());
  CHECK_THROWS_AS(diagram_from_json("{\"h1\": [1], \"levels\": 3}"), Error);
  CHECK_THROWS_AS(diagram_from_json("not json"), Error);
}

TEST_CASE("word strings over large alphabets are comma separated") {
  Word w{0, 10, 3};
  const std::string s = word_to_string(w, 12);
  CHECK(s.find(',') != std::string::npos);
  CHECK(word_from_string(s, 12) == w);
  CHECK(word_to_string(Word{1, 0, 0}, 2) == "211");
  CHECK(letter_counts(word_from_string("221", 2), 2) == IntVector{1, 2});
}

TEST_CASE("DOT output names every vertex") {
  const std::string dot = diagram_to_dot(fibonacci_diagram(3));
  CHECK(dot.find("digraph") != std::string::npos);
}
