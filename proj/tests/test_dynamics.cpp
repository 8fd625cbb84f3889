#include <doctest.h>

#include <random>
#include <set>

#include "bratteli/dynamics.hpp"
#include "oracles.hpp"

using namespace bratteli;

namespace {

PathPrefix as_prefix(const oracle::Path& p) { return PathPrefix{p.order, p.trace}; }

}  // namespace

TEST_CASE("return time equals the position in the brute-force tower order") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    OrderedDiagram d = oracle::random_proper(rng);
    for (std::size_t n = 1; n <= d.depth(); ++n) {
      const auto towers = oracle::sorted_towers(d, n);
      const IntVector h = d.heights(n);
      for (std::size_t k = 0; k < towers.size(); ++k) {
        REQUIRE(BigInt(towers[k].size()) == h[k]);
        for (std::size_t i = 0; i < towers[k].size(); ++i) {
          const PathPrefix x = as_prefix(towers[k][i]);
          CHECK(return_time(d, x) == BigInt(i));
          CHECK(return_time(d, x) + top_distance(d, x) == h[k] - 1);
          CHECK(prefix_at(d, n, k, BigInt(i)) == x);
          CHECK(tower_coordinate(d, x) == TowerCoordinate{n, k, BigInt(i)});
        }
      }
    }
  }
}

TEST_CASE("Vershik step is the brute-force successor") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    OrderedDiagram d = oracle::random_proper(rng);
    const std::size_t n = d.depth();
    for (const auto& tower : oracle::sorted_towers(d, n)) {
      for (std::size_t i = 0; i < tower.size(); ++i) {
        auto next = vershik_step(d, as_prefix(tower[i]));
        if (i + 1 < tower.size()) {
          REQUIRE(next.has_value());
          CHECK(*next == as_prefix(tower[i + 1]));
        } else {
          CHECK_FALSE(next.has_value());
          CHECK(is_maximal(d, as_prefix(tower[i])));
        }
      }
      CHECK(is_minimal(as_prefix(tower.front())));
    }
  }
}

TEST_CASE("binary odometer runs through 2^n - 1 steps") {
  std::vector<Level> levels;
  for (int n = 2; n <= 6; ++n) levels.push_back(Level{IntMatrix{{2}}, {Word{0, 0}}});
  OrderedDiagram d(IntVector{2}, levels);
  PathPrefix x = minimal_prefix(d, 6, 0);
  std::size_t steps = 0;
  while (auto next = vershik_step(d, x)) {
    x = *next;
    ++steps;
  }
  CHECK(steps == 63);
  CHECK(x == maximal_prefix(d, 6, 0));
}

TEST_CASE("suffix and leading counts") {
  Level l{IntMatrix{{1, 2}, {1, 0}}, {word_from_string("221", 2), word_from_string("1", 2)}};
  OrderedDiagram d(IntVector{1, 1}, {l});
  // Position 0 of "221": one 2 and one 1 follow.
  PathPrefix x = make_prefix(d, 0, {0, 0});
  CHECK(suffix(d, x, 1) == IntVector{1, 1});
  CHECK(leading(d, x, 1) == IntVector{0, 0});
  PathPrefix last = make_prefix(d, 0, {0, 2});
  CHECK(suffix(d, last, 1) == IntVector{0, 0});
  CHECK(leading(d, last, 1) == IntVector{0, 2});
  CHECK(return_time(d, last) == 2);
  CHECK(enumerate_suffixes(d, 1, 1, 0) == std::vector<IntVector>{IntVector{1, 1}, IntVector{1, 0}});
  CHECK(enumerate_suffixes(d, 1, 0, 0) == std::vector<IntVector>{IntVector{0, 0}});
  CHECK_THROWS_AS(make_prefix(d, 0, {0, 3}), Error);
}

TEST_CASE("enumeration covers every prefix once in tower order") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    OrderedDiagram d = oracle::random_proper(rng);
    const std::size_t n = d.depth();
    std::vector<PathPrefix> expected;
    for (const auto& tower : oracle::sorted_towers(d, n))
      for (const auto& p : tower) expected.push_back(as_prefix(p));
    CHECK(enumerate_prefixes(d, n) == expected);
    CHECK(full_cycle(d, n) == expected);
    for (const auto& x : expected) CHECK(is_valid(d, x));
  }
  CHECK_THROWS_AS(enumerate_prefixes(fibonacci_diagram(40), 40, 1000), Error);
}

TEST_CASE("return times refine across levels") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    OrderedDiagram d = oracle::random_proper(rng);
    const std::size_t n = d.depth();
    for (const auto& x : enumerate_prefixes(d, n)) {
      BigInt r = 0;
      for (std::size_t m = 1; m <= n; ++m) {
        PathPrefix low{{x.order.begin(), x.order.begin() + static_cast<long>(m)},
                       {x.trace.begin(), x.trace.begin() + static_cast<long>(m)}};
        // r_m = r_{m-1} + <leading_{m-1}, H(m-1)>.
        const IntVector lead = leading(d, x, m - 1);
        const IntVector h = m == 1 ? IntVector{1} : d.heights(m - 1);
        for (std::size_t i = 0; i < lead.size(); ++i) r += lead[i] * h[i];
        CHECK(return_time(d, low) == r);
      }
    }
  }
}

TEST_CASE("suffix sets have one entry per occurrence") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    OrderedDiagram d = oracle::random_proper(rng);
    if (d.depth() < 2) continue;
    for (std::size_t n = 1; n < d.depth(); ++n)
      for (std::size_t k = 0; k < d.rank(n + 1); ++k)
        for (std::size_t l = 0; l < d.rank(n); ++l)
          CHECK(BigInt(enumerate_suffixes(d, n, l, k).size()) == d.matrix(n + 1).at(k, l));
  }
}
