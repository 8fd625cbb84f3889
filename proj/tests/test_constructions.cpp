#include <doctest.h>

#include <algorithm>

#include "bratteli/constructions.hpp"
#include "bratteli/dynamics.hpp"
#include "oracles.hpp"

using namespace bratteli;

TEST_CASE("golden eigenvectors") {
  PrecisionScope scope(200);
  GoldenData g = golden_data();
  const IntMatrix a = golden_matrix();
  const IntervalVector au = a.apply(g.e_u), as = a.apply(g.e_s);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(au[i].overlaps(g.phi * g.e_u[i]));
    CHECK(as[i].overlaps(-(g.e_s[i] / g.phi)));
  }
  CHECK(dot(g.e_u, g.e_s).contains_zero());
  CHECK(dot(g.e_u, g.e_u).overlaps(Interval(1L)));
  CHECK(g.e_s[1].certainly_positive());
  // A^k holds consecutive Fibonacci numbers.
  CHECK(golden_power(10) == IntMatrix{{89, 55}, {55, 34}});
  CHECK(golden_power(0) == IntMatrix::identity(2));
}

TEST_CASE("lattice candidates match an exhaustive scan") {
  PrecisionScope scope(200);
  GoldenData g = golden_data();
  for (const Rational b : {Rational(1, 3), Rational(1, 10), Rational(1, 40)}) {
    const Interval bound(b);
    struct Hit {
      long x, y;
      double t;
    };
    std::vector<Hit> hits;
    for (long x = -120; x <= 120; ++x) {
      for (long y = -120; y <= 120; ++y) {
        const IntVector z{x, y};
        const Interval t = dot(z, g.e_u);
        const Interval s = -dot(z, g.e_s);
        if (t.certainly_positive() && s.certainly_positive() && s.certainly_less(bound))
          hits.push_back({x, y, t.mid_double()});
      }
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& c) { return a.t < c.t; });
    auto cands = lattice_candidates(bound, g, 3);
    REQUIRE(cands.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(cands[i].zbar == IntVector{hits[i].x, hits[i].y});
      CHECK(cands[i].s.certainly_less(bound));
    }
    CHECK(lattice_step(bound, g).zbar == cands[0].zbar);
  }
}

TEST_CASE("best ordering reads 221 for w = (-1, 2), h = (1, 2)") {
  BestOrderWord b = best_ordering(IntervalVector{Interval(-1L), Interval(2L)}, IntVector{1, 2});
  CHECK(word_to_string(b.p, 2) == "221");
  CHECK(b.K == 1);
  CHECK(b.k_bound_ok);
  CHECK(b.tail_ok);
  BestOrderWord c = best_ordering(IntervalVector{Interval(-1L), Interval(2L)}, IntVector{1, 2}, true);
  CHECK(word_to_string(c.p, 2) == "2211");
  CHECK_THROWS_AS(best_ordering(IntervalVector{Interval(1L), Interval(1L)}, IntVector{1, 1}), Error);
}

TEST_CASE("scaled reals") {
  CHECK(parse_scaled_real("1/8").coeff == Rational(1, 8));
  ScaledReal a = parse_scaled_real("3/4*phi^-2");
  CHECK(a.coeff == Rational(3, 4));
  CHECK(a.phi_power == -2);
  ScaledReal b = parse_scaled_real("1/phi");
  CHECK(b.phi_power == -1);
  CHECK(b.value().overlaps(Interval(1L) / golden_ratio()));
  CHECK_THROWS_AS(parse_scaled_real("phi^"), Error);
}

TEST_CASE("small golden construction and its residuals") {
  Section6Params p = Section6Params::standard(5);
  p.precision = 192;
  Section6Result r = build_section6(p);
  CHECK(r.all_ok());
  PrecisionScope scope(r.precision_used);
  REQUIRE(r.steps.size() == 5);
  long K = 0;
  for (const auto& st : r.steps) {
    // alpha H(n) - w_n must be an integer vector; from n = 3 on 4 eps_n < 1/2
    // forces it to be the nearest one.
    const IntervalVector ah = scale(r.alpha, r.diagram.heights(st.n));
    Interval norm(0L);
    for (std::size_t i = 0; i < 2; ++i) {
      const auto z = (ah[i] - st.w_direct[i]).unique_round();
      REQUIRE(z.has_value());
      const Interval wi = ah[i] - Interval(*z);
      CHECK(wi.overlaps(st.w_direct[i]));
      if (st.n >= 3) CHECK(ah[i].unique_round() == z);
      norm = Interval::max(norm, wi.abs());
    }
    CHECK(norm.certainly_less_equal(Interval(4L) * r.params.eps(st.n).value()));
    CHECK(st.w_direct[0].certainly_negative());
    if (st.n >= 2) {
      CHECK(st.k % 2 == 0);
      K += st.k;
      CHECK(st.K == K);
      CHECK(r.diagram.matrix(st.n) == golden_power(static_cast<unsigned long>(st.k)));
    }
  }
  CHECK(check_proper(r.diagram, 5).proper());
}

TEST_CASE("Toeplitz heights are p_n") {
  const std::vector<BigInt> q{2, 3, 4, 5};
  OrderedDiagram d = toeplitz_diagram(q, cyclic_rule(), 4, 3);
  BigInt p = 1;
  for (std::size_t n = 1; n <= 4; ++n) {
    p *= q[n - 1];
    CHECK(d.heights(n) == IntVector(3, p));
    CHECK(d.heights(n) == oracle::naive_product(d, 0, n).column(0));
  }
  CHECK_THROWS_AS(toeplitz_diagram({2, 3}, cyclic_rule(), 4, 3), Error);
  OrderedDiagram w = toeplitz_diagram({2, 2}, word_rule({{"12", "21"}}), 2, 2);
  CHECK(word_to_string(w.word(2, 1), 2) == "21");
}

TEST_CASE("rank-3 example words and counts") {
  OrderedDiagram d = toeplitz_rank3_example({0, 1, 2, 3}, 5);
  CHECK(rank3_characteristic({0, 1, 2, 3}, 6) == std::vector<BigInt>{1, 3, 9, 27, 81, 243});
  // q_3 = 9, t_3 = 6.
  CHECK(word_to_string(d.word(3, 0), 3) == "121212131");
  CHECK(word_to_string(d.word(3, 1), 3) == "112121231");
  CHECK(word_to_string(d.word(3, 2), 3) == "121212131");
  CHECK(word_to_string(d.word(2, 1), 3) == "131");
  for (std::size_t n = 2; n <= 5; ++n) {
    const long q = static_cast<long>(d.matrix(n).row_sums()[0].get_si());
    const long t = (q + 3) / 2;
    for (std::size_t j = 0; j < 3; ++j) CHECK(d.matrix(n).row(j) == IntVector{t - 1, t - 3, 1});
  }
  CHECK_THROWS_AS(toeplitz_rank3_example({1, 1}, 3), Error);
}

TEST_CASE("minus-one eigenfunction levels") {
  OrderedDiagram d = toeplitz_rank3_example({0, 1, 2, 3}, 6);
  MinusOneReport r = minus_one_eigenfunction_check(d, 6);
  CHECK(r.ok);
  REQUIRE(r.levels.size() == 4);
  for (const auto& lv : r.levels) {
    CHECK(lv.matches_identity);
    CHECK(lv.matches_brute_force);
    CHECK(lv.bound_ok);
  }
  CHECK_THROWS_AS(minus_one_eigenfunction_check(fibonacci_diagram(5), 5), Error);
}
