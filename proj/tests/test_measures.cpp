#include <doctest.h>

#include <cmath>
#include <random>

#include "bratteli/constructions.hpp"
#include "bratteli/measures.hpp"
#include "oracles.hpp"

using namespace bratteli;

TEST_CASE("candidates at N = m are the scaled unit vectors") {
  OrderedDiagram d = fibonacci_diagram(5);
  MeasureSetReport r = measure_candidates(d, 3, 3);
  const IntVector h = d.heights(3);
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t i = 0; i < 2; ++i)
      CHECK(r.candidates[k][i] == (i == k ? Rational(BigInt(1), h[k]) : Rational(0)));
}

TEST_CASE("candidates satisfy the measure relation exactly") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 40; ++trial) {
    OrderedDiagram d = oracle::random_proper(rng);
    const std::size_t N = d.depth();
    for (std::size_t m = 1; m < N; ++m) {
      MeasureSetReport low = measure_candidates(d, m, N);
      MeasureSetReport high = measure_candidates(d, m + 1, N);
      REQUIRE(low.candidates.size() == high.candidates.size());
      for (std::size_t k = 0; k < low.candidates.size(); ++k) {
        CHECK(oracle::apply(d.matrix(m + 1).transpose(), high.candidates[k]) == low.candidates[k]);
        const IntVector h = d.heights(m);
        Rational total = 0;
        for (std::size_t i = 0; i < h.size(); ++i) total += Rational(h[i]) * low.candidates[k][i];
        CHECK(total == 1);
      }
      CHECK(low.candidates.size() <= d.rank(N));
    }
  }
}

TEST_CASE("Fibonacci candidates approach the Perron direction") {
  OrderedDiagram d = fibonacci_diagram(30);
  // Power iteration on the symmetric matrix.
  double u0 = 1, u1 = 1;
  for (int i = 0; i < 200; ++i) {
    double a = u0 + u1, b = u0;
    const double s = a + b;
    u0 = a / s;
    u1 = b / s;
  }
  const double norm = u0 + u1;  // <u, H(1)> with H(1) = (1, 1)
  MeasureSetReport r = measure_candidates(d, 1, 30);
  for (const auto& c : r.candidates) {
    CHECK(c[0].get_d() == doctest::Approx(u0 / norm).epsilon(1e-9));
    CHECK(c[1].get_d() == doctest::Approx(u1 / norm).epsilon(1e-9));
  }
  CHECK(r.unique_ergodicity);
  CHECK(r.clusters.size() == 1);
  Rational previous = measure_candidates(d, 1, 2).diameter;
  for (std::size_t N = 3; N <= 12; ++N) {
    Rational now = measure_candidates(d, 1, N).diameter;
    CHECK(now <= previous);
    previous = now;
  }
}

TEST_CASE("certified measure, tower masses and normalization") {
  OrderedDiagram d = toeplitz_rank3_example({0, 1, 2, 3}, 5);
  MeasureSetReport r = measure_candidates(d, 3, 4);
  REQUIRE(r.diameter == 0);
  MeasureVector mu = certified_measure(r);
  REQUIRE(mu.exact.has_value());
  CHECK(is_normalized(d, mu));
  Interval total(0L);
  for (std::size_t k = 0; k < 3; ++k) total += tower_mass(d, mu, k);
  CHECK(total.contains(Rational(1)));
  // Joint masses over l add up to the tower mass at n+1.
  MeasureVector mu_next = certified_measure(measure_candidates(d, 4, 5));
  for (std::size_t k = 0; k < 3; ++k) {
    Interval joint(0L);
    for (std::size_t l = 0; l < 3; ++l) joint += joint_mass(d, mu_next, l, k);
    CHECK(joint.overlaps(tower_mass(d, mu_next, k)));
  }
  auto seq = measure_sequence(d, mu_next);
  REQUIRE(seq.size() == 4);
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) CHECK(satisfies_relation(d, seq[i], seq[i + 1]));
  CHECK(seq[2].exact == mu.exact);
}

TEST_CASE("clean diagnostic separates the summable vertex") {
  OrderedDiagram d = toeplitz_rank3_example({0, 1, 2, 3}, 7);
  std::vector<MeasureVector> mus;
  for (std::size_t n = 1; n <= 6; ++n) mus.push_back(certified_measure(measure_candidates(d, n, n + 1)));
  for (double threshold : {1e-3, 1e-1}) {
    CleanReport c = clean_diagnostic(d, mus, threshold);
    CHECK(c.kept == std::vector<std::size_t>{0, 1});
    CHECK(c.discarded == std::vector<std::size_t>{2});
    // Heights are all p_n, so the mass of tower 3 is p_n / p_{n+1} = 1 / q_{n+1}.
    for (std::size_t n = 1; n <= 6; ++n) {
      const double q_next = std::pow(3.0, static_cast<double>(n));
      CHECK(c.masses[2][n - 1] == doctest::Approx(1.0 / q_next));
    }
  }
}

TEST_CASE("degenerate levels are rejected") {
  OrderedDiagram d = fibonacci_diagram(4);
  CHECK_THROWS_AS(measure_candidates(d, 3, 2), Error);
  CHECK_THROWS_AS(measure_candidates(d, 1, 5), Error);
}
