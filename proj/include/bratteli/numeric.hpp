#pragma once

// Exact integers/rationals (GMP) and outward-rounded intervals (MPFR).

#include <gmpxx.h>
#include <mpfr.h>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bratteli {

using BigInt = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<BigInt>;
using RatVector = std::vector<Rational>;

enum class ErrorCode {
  out_of_range,
  invalid_argument,
  invalid_diagram,
  precision_exhausted,
  cap_exceeded,
  ambiguous_rounding,
  rank_deficient,
  not_clean,
  io,
  parse,
};

std::string to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Precision (in bits) given to newly created intervals on this thread.
mpfr_prec_t default_precision();
void set_default_precision(mpfr_prec_t bits);

// Sets the thread's default precision for the lifetime of the guard.
class PrecisionScope {
 public:
  explicit PrecisionScope(mpfr_prec_t bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  mpfr_prec_t saved_;
};

// Closed interval [lo, hi] with MPFR endpoints. Every operation rounds the
// lower endpoint down and the upper endpoint up, so the exact result of the
// real operation on any members of the operands is contained in the result.
class Interval {
 public:
  Interval();
  explicit Interval(long value);
  explicit Interval(const BigInt& value);
  explicit Interval(const Rational& value);
  Interval(const Rational& lo, const Rational& hi);
  ~Interval();

  Interval(const Interval& other);
  Interval(Interval&& other) noexcept;
  Interval& operator=(const Interval& other);
  Interval& operator=(Interval&& other) noexcept;

  static Interval hull(const Interval& a, const Interval& b);
  // Enclosure of max(x, y) over x in a, y in b.
  static Interval max(const Interval& a, const Interval& b);
  static Interval pi();
  static Interval sqrt(const Interval& x);
  // cos(2*pi*x) and sin(2*pi*x).
  static Interval cos_2pi(const Interval& x);
  static Interval sin_2pi(const Interval& x);

  mpfr_prec_t precision() const { return mpfr_get_prec(lo_); }

  Interval& operator+=(const Interval& rhs);
  Interval& operator-=(const Interval& rhs);
  Interval& operator*=(const Interval& rhs);
  Interval& operator/=(const Interval& rhs);

  friend Interval operator+(Interval a, const Interval& b) { return a += b; }
  friend Interval operator-(Interval a, const Interval& b) { return a -= b; }
  friend Interval operator*(Interval a, const Interval& b) { return a *= b; }
  friend Interval operator/(Interval a, const Interval& b) { return a /= b; }
  Interval operator-() const;

  Interval abs() const;
  Interval pow(unsigned long exponent) const;
  Interval width() const;

  bool certainly_positive() const;
  bool certainly_negative() const;
  bool certainly_nonnegative() const;
  bool contains_zero() const;
  bool contains(const Rational& value) const;
  bool contains(const Interval& other) const;
  bool overlaps(const Interval& other) const;
  bool certainly_less(const Interval& other) const;
  bool certainly_less_equal(const Interval& other) const;

  double lower_double() const;  // rounded down
  double upper_double() const;  // rounded up
  double mid_double() const;
  double width_double() const;  // rounded up
  Rational lower_rational() const;
  Rational upper_rational() const;
  BigInt floor_lower() const;

  // Decimal strings of the endpoints, lower rounded down, upper rounded up.
  std::string lower_string(int digits = 40) const;
  std::string upper_string(int digits = 40) const;

  // Nearest integer if it is the same for every member and no member is a
  // half-integer; empty otherwise.
  std::optional<BigInt> unique_round() const;

  const __mpfr_struct* lo() const { return lo_; }
  const __mpfr_struct* hi() const { return hi_; }

 private:
  explicit Interval(mpfr_prec_t prec, int /*tag*/);
  void set_precision_for(const Interval& other);
  mpfr_t lo_;
  mpfr_t hi_;
};

using IntervalVector = std::vector<Interval>;

// Max-norm of a vector, |x_i| maximised over i.
Interval max_norm(const IntervalVector& v);
// Distance to the nearest integer of a single value.
Interval distance_to_integer(const Interval& x);
Rational distance_to_integer(const Rational& x);
// Max over components of the distance to the nearest integer, i.e. the
// max-norm distance to Z^d.
Interval nearest_integer_distance(const IntervalVector& v);
Rational nearest_integer_distance(const RatVector& v);
// x - floor(x), exact.
Rational fractional_part(const Rational& x);
// Representative of x modulo 1 shifted so that its lower end is in [0, 1).
Interval reduce_mod_one(const Interval& x);

Interval dot(const IntervalVector& a, const IntervalVector& b);
Interval dot(const IntVector& a, const IntervalVector& b);
Rational dot(const RatVector& a, const RatVector& b);
BigInt dot(const IntVector& a, const IntVector& b);

IntervalVector to_intervals(const IntVector& v);
IntervalVector to_intervals(const RatVector& v);
IntervalVector scale(const Interval& s, const IntVector& v);

// Rational parsed from "a/b", "a", a finite decimal "0.125" or "1.25e-3".
Rational parse_rational(const std::string& text);
std::string to_string(const BigInt& value);
std::string to_string(const Rational& value);

// Dense matrix with big-integer entries, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);
  explicit IntMatrix(const std::vector<std::vector<BigInt>>& rows);

  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  BigInt& at(std::size_t i, std::size_t j) { return data_.at(i * cols_ + j); }
  const BigInt& at(std::size_t i, std::size_t j) const {
    return data_.at(i * cols_ + j);
  }
  IntVector row(std::size_t i) const;
  IntVector column(std::size_t j) const;
  IntVector row_sums() const;
  bool is_positive() const;

  IntMatrix transpose() const;
  IntVector apply(const IntVector& v) const;
  RatVector apply(const RatVector& v) const;
  IntervalVector apply(const IntervalVector& v) const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
};

// Exact rank and kernel basis of a rational matrix given by rows.
std::size_t rational_rank(std::vector<RatVector> rows);
std::vector<RatVector> rational_kernel(const IntMatrix& m);

bool is_integral(const RatVector& v);

}  // namespace bratteli
