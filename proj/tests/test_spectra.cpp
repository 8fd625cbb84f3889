#include <doctest.h>

#include <cmath>
#include <random>

#include "bratteli/constructions.hpp"
#include "bratteli/dynamics.hpp"
#include "bratteli/spectra.hpp"
#include "oracles.hpp"

using namespace bratteli;

namespace {

Interval inv_phi() { return Interval(1L) / golden_ratio(); }

OrderedDiagram toeplitz_3pow() {
  return toeplitz_diagram({1, 3, 9, 27, 81}, cyclic_rule(), 5, 3);
}

}  // namespace

TEST_CASE("alpha parsing") {
  CHECK(parse_alpha("3/9").exact() == Rational(1, 3));
  Alpha r = parse_alpha("real:0.618");
  CHECK_FALSE(r.is_rational());
  CHECK(r.interval().contains(Rational(618, 1000)));
  CHECK(parse_alpha("real:1/phi").interval().overlaps(inv_phi()));
}

TEST_CASE("necessary series") {
  OrderedDiagram f = fibonacci_diagram(20);
  SeriesReport zero = continuous_necessary_series(f, Alpha::rational(0), 20);
  for (const auto& t : zero.exact_terms) CHECK(t == 0);

  OrderedDiagram t = toeplitz_3pow();
  // p = 1, 3, 27, 729, 59049.
  SeriesReport s = continuous_necessary_series(t, Alpha::rational(Rational(5, 27)), 5);
  CHECK(s.exact_terms[0] != 0);
  CHECK(s.exact_terms[1] != 0);
  for (std::size_t n = 3; n <= 5; ++n) CHECK(s.exact_terms[n - 1] == 0);

  SeriesReport g = continuous_necessary_series(f, Alpha::real(inv_phi()), 20);
  const double target = 1.0 / ((1.0 + std::sqrt(5.0)) / 2.0);
  for (std::size_t n = 5; n <= 20; ++n) {
    const double ratio = g.terms[n - 1].mid_double() / g.terms[n - 2].mid_double();
    CHECK(std::abs(ratio - target) < 0.05);
  }
  CHECK(g.classification == "plausibly-summable");
  // Terms are the distance of alpha H(n) to Z^d.
  for (std::size_t n = 1; n <= 20; ++n)
    CHECK(g.terms[n - 1].overlaps(nearest_integer_distance(scale(inv_phi(), f.heights(n)))));
}

TEST_CASE("uniform convergence test") {
  OrderedDiagram t = toeplitz_3pow();
  UniformReport u = uniform_convergence_test(t, Alpha::rational(Rational(2, 27)), 3, 5);
  CHECK(u.exact_worst_tail == 0);

  Level l{IntMatrix{{1, 2}, {1, 0}}, {word_from_string("221", 2), word_from_string("1", 2)}};
  OrderedDiagram d(IntVector{1, 1}, {l});
  UniformReport one = uniform_convergence_test(d, Alpha::rational(Rational(1, 10)), 1, 2);
  CHECK(one.exact_level_max == std::vector<Rational>{Rational(1, 5)});

  // The bound dominates the exact supremum over all prefixes.
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    OrderedDiagram r = oracle::random_proper(rng, 3, 4, 3);
    if (r.depth() < 2) continue;
    const Rational a(static_cast<long>(rng() % 17), 17);
    const std::size_t N = r.depth();
    UniformReport rep = uniform_convergence_test(r, Alpha::rational(a), 1, N);
    Rational sup = 0;
    for (const auto& tower : oracle::sorted_towers(r, N)) {
      for (const auto& x : tower) {
        Rational total = 0;
        for (std::size_t k = 1; k < N; ++k) {
          const Word& w = r.word(k + 1, x.trace[k]);
          const IntVector h = r.heights(k);
          for (std::size_t p = x.order[k] + 1; p < w.size(); ++p) total += a * Rational(h[w[p]]);
        }
        sup = std::max(sup, distance_to_integer(total));
      }
    }
    CHECK(sup <= rep.exact_worst_tail);
  }
}

TEST_CASE("stable decomposition") {
  OrderedDiagram f = fibonacci_diagram(45);
  StableDecomposition one = stable_decompose(f, Alpha::rational(1), 2, 10);
  CHECK(one.w == f.heights(2));
  REQUIRE(one.v_exact.has_value());
  CHECK(*one.v_exact == RatVector{0, 0});

  PrecisionScope scope(256);
  StableDecomposition s = stable_decompose(f, Alpha::real(inv_phi()), 1, 40);
  CHECK(s.w == IntVector{1, 0});
  CHECK(s.contracted);
  // v lies on the contracting eigendirection: A v = -v / phi.
  const IntervalVector av = IntMatrix{{1, 1}, {1, 0}}.apply(s.v);
  for (std::size_t i = 0; i < 2; ++i) CHECK(av[i].overlaps(-(s.v[i] * inv_phi())));
  const Interval phi = golden_ratio();
  const Interval c = Interval(1L) / (phi * phi);
  CHECK(s.v[0].overlaps(-c));
  CHECK(s.v[1].overlaps(c * phi));
  auto found = find_stable_decomposition(f, Alpha::real(inv_phi()), 40);
  REQUIRE(found.has_value());
  CHECK(found->m == 1);
}

TEST_CASE("stable subspaces") {
  OrderedDiagram f = fibonacci_diagram(20);
  SubspaceReport s = stable_subspaces(f, 1, 20);
  CHECK(s.kernel.empty());
  REQUIRE(s.stable.size() == 1);
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const auto& v = s.stable[0];
  CHECK(v[1] / v[0] == doctest::Approx(-phi).epsilon(1e-9));
  CHECK(s.chain_ok);

  Level zero{IntMatrix{{1, 0}, {2, 0}}, {Word{0}, Word{0, 0}}};
  Level full{IntMatrix{{1, 1}, {1, 1}}, {Word{0, 1}, Word{0, 1}}};
  OrderedDiagram k(IntVector{1, 1}, {zero, full, full});
  SubspaceReport ks = stable_subspaces(k, 1, 4);
  REQUIRE(ks.kernel.size() == 1);
  CHECK(ks.kernel[0][0] == 0);
  CHECK(ks.chain_ok);

  std::mt19937_64 rng(88);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Level> levels;
    for (int n = 0; n < 6; ++n) {
      IntMatrix m(3, 3);
      std::vector<Word> words;
      for (std::size_t j = 0; j < 3; ++j) {
        Word w;
        for (std::size_t i = 0; i < 3; ++i) {
          m.at(j, i) = static_cast<long>(1 + rng() % 3);
          for (long t = 0; t < m.at(j, i); ++t) w.push_back(static_cast<Letter>(i));
        }
        words.push_back(w);
      }
      levels.push_back(Level{m, words});
    }
    OrderedDiagram r(IntVector{1, 1, 1}, levels);
    SubspaceReport rs = stable_subspaces(r, 1, 7);
    CHECK(rs.stable.size() <= 2);
  }
}

TEST_CASE("orthogonality and alpha recovery") {
  PrecisionScope scope(256);
  OrderedDiagram f = fibonacci_diagram(80);
  MeasureVector mu = certified_measure(measure_candidates(f, 1, 80));
  CHECK(orthogonality_check(IntervalVector{Interval(0L), Interval(0L)}, mu).contains(Rational(0)));
  const Interval phi = golden_ratio();
  CHECK(orthogonality_check(IntervalVector{Interval(1L), -phi}, mu).contains_zero());
  CHECK(orthogonality_check(IntervalVector{Interval(1L), Interval(1L)}, mu).certainly_positive());
  const Interval one = alpha_from_integer_vector(f.heights(1), mu).interval();
  const bool trivial = one.contains_zero() || one.contains(Rational(1));
  CHECK(trivial);
  CHECK(alpha_from_integer_vector(IntVector{0, 0}, mu).interval().contains(Rational(0)));
  CHECK(alpha_from_integer_vector(IntVector{1, 0}, mu).interval().overlaps(inv_phi()));
}

TEST_CASE("rational denominators") {
  OrderedDiagram t = toeplitz_3pow();
  CHECK(rational_denominator_check(Rational(1), t, 5) == std::optional<std::size_t>(1));
  CHECK(rational_denominator_check(Rational(4, 27), t, 5) == std::optional<std::size_t>(3));
  CHECK_FALSE(rational_denominator_check(Rational(1, 2), t, 5).has_value());
  OrderedDiagram f = fibonacci_diagram(30);
  for (long b = 2; b < 12; ++b) CHECK_FALSE(rational_denominator_check(Rational(1, b), f, 30).has_value());
}

TEST_CASE("dimension group membership against exhaustive search") {
  OrderedDiagram f = fibonacci_diagram(13);
  CHECK(dimension_group_membership(f, RatVector{2, -1}, 1, 12).level == std::optional<std::size_t>(1));
  CHECK_FALSE(dimension_group_membership(f, RatVector{Rational(1, 2), Rational(1, 2)}, 1, 12).level);

  // det 2: z = P^{-1} (integer vector) has a witness.
  Level l{IntMatrix{{3, 1}, {1, 1}}, {word_from_string("1112", 2), word_from_string("12", 2)}};
  OrderedDiagram d(IntVector{1, 1}, {l, l, l, l});
  for (long a = -3; a <= 3; ++a) {
    for (long b = -3; b <= 3; ++b) {
      // [[3,1],[1,1]]^{-1} = 1/2 [[1,-1],[-1,3]]; apply twice.
      RatVector z{Rational(a - b, 2), Rational(-a + 3 * b, 2)};
      z = RatVector{Rational(z[0] - z[1]) / 2, Rational(-z[0] + 3 * z[1]) / 2};
      auto wit = dimension_group_membership(d, z, 1, 5);
      std::optional<std::size_t> expected;
      RatVector y = z;
      for (std::size_t n = 1; n <= 5; ++n) {
        if (n > 1) y = oracle::apply(d.matrix(n), y);
        if (oracle::integral(y)) {
          expected = n;
          break;
        }
      }
      REQUIRE(expected.has_value());
      CHECK(wit.level == expected);
      if (wit.level) CHECK(RatVector(wit.image.begin(), wit.image.end()) == y);
    }
  }
}

TEST_CASE("independence bound and eigen group matrix") {
  PrecisionScope scope(256);
  OrderedDiagram f = fibonacci_diagram(60);
  MeasureSetReport r = measure_candidates(f, 1, 60);
  CHECK(independence_bound(f, r) == 2);
  MeasureVector mu = certified_measure(r);
  EigenGroupReport trivial = eigen_group_matrix(f, {}, 1, mu);
  CHECK(trivial.eta == 1);
  CHECK(trivial.values[0].contains(Rational(1)));
  EigenGroupReport e = eigen_group_matrix(f, {IntVector{1, 0}}, 1, mu);
  CHECK(e.values[0].overlaps(inv_phi()));
  CHECK(e.values[1].contains(Rational(1)));
  CHECK_THROWS_AS(eigen_group_matrix(f, {IntVector{1, 1}}, 1, mu), Error);

  // Candidates at N = m give one cluster per vertex: l = d, bound 1.
  CHECK(independence_bound(f, measure_candidates(f, 5, 5)) == 1);
}

TEST_CASE("group geometry split") {
  OrderedDiagram t = toeplitz_3pow();
  GroupGeoReport rat = group_geo_check(t, Alpha::rational(Rational(1, 27)), 3, 5);
  CHECK(rat.found);
  CHECK(rat.g == RatVector{1, 1, 1});
  for (const auto& x : rat.v1) CHECK(x.contains(Rational(0)));

  PrecisionScope scope(256);
  OrderedDiagram f = fibonacci_diagram(45);
  GroupGeoReport g = group_geo_check(f, Alpha::real(inv_phi()), 1, 40);
  CHECK(g.found);
  CHECK(g.g == RatVector{1, 0});
  CHECK(g.estimate.summable);
  CHECK(g.estimate.ratio == doctest::Approx(2.0 / (1.0 + std::sqrt(5.0))).epsilon(1e-6));
}

TEST_CASE("martingale series") {
  OrderedDiagram f = fibonacci_diagram(16);
  std::vector<MeasureVector> mus;
  for (std::size_t n = 1; n <= 15; ++n) mus.push_back(certified_measure(measure_candidates(f, n, 16)));
  PhaseSchedule flat = constant_schedule(16, RatVector{0, 0});
  MartingaleReport zero = martingale_series(f, mus, Alpha::rational(0), &flat, 1, 14);
  for (const auto& t : zero.terms) CHECK(t.contains(Rational(0)));

  // alpha = 1/3 with rho = 0: the only non-trivial pair is (1,1) with the
  // single suffix (0,1), so the term is |1 - lambda^{h_2(n)}|^2.
  MartingaleReport third = martingale_series(f, mus, Alpha::rational(Rational(1, 3)), &flat, 1, 14);
  REQUIRE(third.terms.size() == 14);
  std::size_t large = 0;
  for (std::size_t n = 1; n <= 14; ++n) {
    const BigInt h2 = f.heights(n)[1];
    const bool zero_phase = mpz_divisible_ui_p(h2.get_mpz_t(), 3) != 0;
    CHECK(third.terms[n - 1].contains(Rational(zero_phase ? 0 : 3)));
    if (!zero_phase) ++large;
  }
  CHECK(large >= 10);
}

TEST_CASE("Toeplitz classification") {
  const std::vector<BigInt> q{1, 3, 9, 27, 81};
  CHECK(toeplitz_classify(Alpha::rational(Rational(1, 27)), q, 3, false).verdict == ToeplitzClass::continuous);
  CHECK(toeplitz_classify(Alpha::rational(Rational(1, 27)), q, 3, false).witness == std::optional<std::size_t>(3));
  CHECK(toeplitz_classify(Alpha::rational(Rational(1, 5)), {3, 3, 3, 3, 3}, 3, true).verdict ==
        ToeplitzClass::excluded);
  CHECK(toeplitz_classify(Alpha::rational(Rational(1, 2)), rank3_characteristic({0, 1, 2, 3}, 6), 3, false)
            .verdict == ToeplitzClass::non_continuous_candidate);
  CHECK(toeplitz_classify(Alpha::rational(Rational(1, 5)), rank3_characteristic({0, 1, 2, 3}, 6), 3, false)
            .verdict == ToeplitzClass::excluded);
  CHECK(toeplitz_classify(Alpha::real(inv_phi()), q, 3, false).verdict == ToeplitzClass::excluded);
  for (long a = 0; a < 729; ++a)
    CHECK(toeplitz_classify(Alpha::rational(Rational(a, 729)), q, 3, false).verdict == ToeplitzClass::continuous);
}
