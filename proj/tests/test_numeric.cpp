#include <doctest.h>

#include <random>

#include "bratteli/numeric.hpp"

using namespace bratteli;

TEST_CASE("interval arithmetic encloses exact rational results") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> num(-50, 50), den(1, 40);
  for (int trial = 0; trial < 200; ++trial) {
    Rational a(num(rng), den(rng)), b(num(rng), den(rng));
    a.canonicalize();
    b.canonicalize();
    CHECK((Interval(a) + Interval(b)).contains(Rational(a + b)));
    CHECK((Interval(a) - Interval(b)).contains(Rational(a - b)));
    CHECK((Interval(a) * Interval(b)).contains(Rational(a * b)));
    if (b != 0) CHECK((Interval(a) / Interval(b)).contains(Rational(a / b)));
  }
}

TEST_CASE("square root and trigonometric enclosures") {
  Interval r = Interval::sqrt(Interval(2L));
  CHECK((r * r).contains(Rational(2)));
  CHECK(r.width_double() < 1e-30);
  CHECK(Interval::cos_2pi(Interval(Rational(1, 4))).contains(Rational(0)));
  CHECK(Interval::sin_2pi(Interval(Rational(1, 4))).contains(Rational(1)));
  CHECK(Interval::cos_2pi(Interval(Rational(1, 2))).contains(Rational(-1)));
}

TEST_CASE("precision scope restores the previous default") {
  const auto before = default_precision();
  {
    PrecisionScope scope(300);
    CHECK(default_precision() == 300);
    CHECK(Interval(1L).precision() == 300);
  }
  CHECK(default_precision() == before);
}

TEST_CASE("parse_rational accepts fractions, decimals and exponents") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational("-7") == Rational(-7));
  CHECK(parse_rational("0.125") == Rational(1, 8));
  CHECK(parse_rational("1.25e-3") == Rational(1, 800));
  CHECK(parse_rational("2E2") == Rational(200));
  CHECK(parse_rational("010") == Rational(10));
  CHECK(parse_rational("+5/010") == Rational(1, 2));
  CHECK(parse_rational("0.618") == Rational(309, 500));
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("abc"), Error);
}

TEST_CASE("nearest integer distance uses the max norm") {
  CHECK(nearest_integer_distance(RatVector{3, -2}) == 0);
  CHECK(nearest_integer_distance(RatVector{Rational(1, 2), Rational(3, 10)}) == Rational(1, 2));
  // Corner oracle: min over the 2^d roundings of the max deviation.
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-300, 300);
  for (int trial = 0; trial < 100; ++trial) {
    RatVector v{Rational(num(rng), 97), Rational(num(rng), 89), Rational(num(rng), 13)};
    for (auto& x : v) x.canonicalize();
    Rational best = -1;
    for (int mask = 0; mask < 8; ++mask) {
      Rational worst = 0;
      for (int i = 0; i < 3; ++i) {
        BigInt f;
        mpz_fdiv_q(f.get_mpz_t(), v[i].get_num_mpz_t(), v[i].get_den_mpz_t());
        Rational corner = Rational(f) + ((mask >> i) & 1);
        Rational dev = abs(Rational(v[i] - corner));
        if (dev > worst) worst = dev;
      }
      if (best < 0 || worst < best) best = worst;
    }
    CHECK(nearest_integer_distance(v) == best);
    CHECK(nearest_integer_distance(to_intervals(v)).contains(best));
  }
}

TEST_CASE("rounding and reduction modulo one") {
  CHECK(*Interval(Rational(7, 3)).unique_round() == 2);
  CHECK_FALSE(Interval(Rational(1, 2)).unique_round().has_value());
  CHECK(fractional_part(Rational(-1, 3)) == Rational(2, 3));
  CHECK(reduce_mod_one(Interval(Rational(9, 4))).contains(Rational(1, 4)));
}

TEST_CASE("matrix products, rank and kernel") {
  IntMatrix a{{1, 1}, {1, 0}};
  CHECK(a * a == IntMatrix{{2, 1}, {1, 1}});
  CHECK(a.transpose() == a);
  CHECK(a.apply(IntVector{2, 3}) == IntVector{5, 2});
  IntMatrix singular{{1, 2, 3}, {2, 4, 6}};
  CHECK(rational_rank({{1, 2, 3}, {2, 4, 6}}) == 1);
  auto kernel = rational_kernel(singular);
  CHECK(kernel.size() == 2);
  for (const auto& v : kernel) CHECK(singular.apply(v) == RatVector{0, 0});
  CHECK(is_integral(RatVector{1, -4}));
  CHECK_FALSE(is_integral(RatVector{Rational(1, 2)}));
}
