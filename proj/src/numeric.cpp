#include "bratteli/numeric.hpp"

#include <algorithm>
#include <cstdlib>
#include <utility>

namespace bratteli {

std::string to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::out_of_range: return "out_of_range";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::invalid_diagram: return "invalid_diagram";
    case ErrorCode::precision_exhausted: return "precision_exhausted";
    case ErrorCode::cap_exceeded: return "cap_exceeded";
    case ErrorCode::ambiguous_rounding: return "ambiguous_rounding";
    case ErrorCode::rank_deficient: return "rank_deficient";
    case ErrorCode::not_clean: return "not_clean";
    case ErrorCode::io: return "io";
    case ErrorCode::parse: return "parse";
  }
  return "unknown";
}

namespace {

mpfr_prec_t initial_precision() {
  if (const char* env = std::getenv("BRATTELI_PRECISION")) {
    char* end = nullptr;
    long bits = std::strtol(env, &end, 10);
    if (end != env && bits >= 64) return static_cast<mpfr_prec_t>(bits);
  }
  return 128;
}

thread_local mpfr_prec_t g_precision = initial_precision();

Rational mpfr_to_rational(const __mpfr_struct* x) {
  if (mpfr_zero_p(x)) return Rational(0);
  if (!mpfr_number_p(x)) throw Error(ErrorCode::invalid_argument, "non-finite interval endpoint");
  BigInt mantissa;
  mpfr_exp_t exp = mpfr_get_z_2exp(mantissa.get_mpz_t(), x);
  Rational r(mantissa);
  if (exp > 0) {
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(exp));
  } else if (exp < 0) {
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-exp));
  }
  r.canonicalize();
  return r;
}

std::string mpfr_string(const __mpfr_struct* x, int digits, bool down) {
  char* buf = nullptr;
  if (down) {
    mpfr_asprintf(&buf, "%.*RDe", digits, x);
  } else {
    mpfr_asprintf(&buf, "%.*RUe", digits, x);
  }
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

}  // namespace

mpfr_prec_t default_precision() { return g_precision; }

void set_default_precision(mpfr_prec_t bits) {
  if (bits < 64) throw Error(ErrorCode::invalid_argument, "precision must be at least 64 bits");
  g_precision = bits;
}

PrecisionScope::PrecisionScope(mpfr_prec_t bits) : saved_(g_precision) {
  set_default_precision(bits);
}

PrecisionScope::~PrecisionScope() { g_precision = saved_; }

// ---------------------------------------------------------------------------
// Interval

Interval::Interval(mpfr_prec_t prec, int) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
}

Interval::Interval() : Interval(g_precision, 0) {
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(long value) : Interval(g_precision, 0) {
  mpfr_set_si(lo_, value, MPFR_RNDD);
  mpfr_set_si(hi_, value, MPFR_RNDU);
}

Interval::Interval(const BigInt& value) : Interval(g_precision, 0) {
  mpfr_set_z(lo_, value.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(hi_, value.get_mpz_t(), MPFR_RNDU);
}

Interval::Interval(const Rational& value) : Interval(g_precision, 0) {
  mpfr_set_q(lo_, value.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, value.get_mpq_t(), MPFR_RNDU);
}

Interval::Interval(const Rational& lo, const Rational& hi) : Interval(g_precision, 0) {
  if (lo > hi) throw Error(ErrorCode::invalid_argument, "interval with lo > hi");
  mpfr_set_q(lo_, lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, hi.get_mpq_t(), MPFR_RNDU);
}

Interval::~Interval() {
  if (lo_->_mpfr_d != nullptr) mpfr_clear(lo_);
  if (hi_->_mpfr_d != nullptr) mpfr_clear(hi_);
}

Interval::Interval(const Interval& other) : Interval(other.precision(), 0) {
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& other) noexcept {
  // Steal the limbs; leave `other` as an empty shell that the destructor skips.
  *lo_ = *other.lo_;
  *hi_ = *other.hi_;
  other.lo_->_mpfr_d = nullptr;
  other.hi_->_mpfr_d = nullptr;
}

Interval& Interval::operator=(const Interval& other) {
  if (this == &other) return *this;
  if (lo_->_mpfr_d == nullptr) {
    mpfr_init2(lo_, other.precision());
    mpfr_init2(hi_, other.precision());
  } else {
    mpfr_set_prec(lo_, other.precision());
    mpfr_set_prec(hi_, other.precision());
  }
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
  return *this;
}

Interval& Interval::operator=(Interval&& other) noexcept {
  if (this == &other) return *this;
  if (lo_->_mpfr_d != nullptr) mpfr_clear(lo_);
  if (hi_->_mpfr_d != nullptr) mpfr_clear(hi_);
  *lo_ = *other.lo_;
  *hi_ = *other.hi_;
  other.lo_->_mpfr_d = nullptr;
  other.hi_->_mpfr_d = nullptr;
  return *this;
}

void Interval::set_precision_for(const Interval& other) {
  mpfr_prec_t want = std::max({precision(), other.precision(), g_precision});
  if (want > precision()) {
    mpfr_prec_round(lo_, want, MPFR_RNDD);
    mpfr_prec_round(hi_, want, MPFR_RNDU);
  }
}

Interval Interval::hull(const Interval& a, const Interval& b) {
  Interval r(std::max(a.precision(), b.precision()), 0);
  mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval Interval::max(const Interval& a, const Interval& b) {
  Interval r(std::max(a.precision(), b.precision()), 0);
  mpfr_max(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval Interval::pi() {
  Interval r(g_precision, 0);
  mpfr_const_pi(r.lo_, MPFR_RNDD);
  mpfr_const_pi(r.hi_, MPFR_RNDU);
  return r;
}

Interval Interval::sqrt(const Interval& x) {
  if (mpfr_sgn(x.lo_) < 0) throw Error(ErrorCode::invalid_argument, "sqrt of a possibly negative interval");
  Interval r(std::max(x.precision(), g_precision), 0);
  mpfr_sqrt(r.lo_, x.lo_, MPFR_RNDD);
  mpfr_sqrt(r.hi_, x.hi_, MPFR_RNDU);
  return r;
}

Interval Interval::cos_2pi(const Interval& x_in) {
  const mpfr_prec_t prec = std::max(x_in.precision(), g_precision);
  Interval x = reduce_mod_one(x_in);
  Interval r(prec, 0);
  if (!x.certainly_less(Interval(1))) {
    // Width close to a full period.
    Interval w = x.width();
    if (!w.certainly_less(Interval(Rational(1, 2)))) {
      mpfr_set_si(r.lo_, -1, MPFR_RNDD);
      mpfr_set_si(r.hi_, 1, MPFR_RNDU);
      return r;
    }
  }
  Interval y = Interval(2) * pi() * x;
  mpfr_t a, b;
  mpfr_inits2(prec, a, b, static_cast<mpfr_ptr>(nullptr));
  mpfr_cos(a, y.lo_, MPFR_RNDD);
  mpfr_cos(b, y.hi_, MPFR_RNDD);
  mpfr_min(r.lo_, a, b, MPFR_RNDD);
  mpfr_cos(a, y.lo_, MPFR_RNDU);
  mpfr_cos(b, y.hi_, MPFR_RNDU);
  mpfr_max(r.hi_, a, b, MPFR_RNDU);
  mpfr_clears(a, b, static_cast<mpfr_ptr>(nullptr));

  // Extrema of cos(2 pi x) sit at x in Z/2; include them when the slightly
  // widened argument range may contain one.
  Rational lo = x.lower_rational();
  Rational hi = x.upper_rational();
  Rational slack(1);
  mpq_div_2exp(slack.get_mpq_t(), slack.get_mpq_t(), static_cast<mp_bitcnt_t>(prec - 8));
  lo -= slack;
  hi += slack;
  for (int k = -2; k <= 6; ++k) {
    Rational half(k, 2);
    if (half >= lo && half <= hi) {
      if (k % 2 == 0) {
        mpfr_set_si(r.hi_, 1, MPFR_RNDU);
      } else {
        mpfr_set_si(r.lo_, -1, MPFR_RNDD);
      }
    }
  }
  return r;
}

Interval Interval::sin_2pi(const Interval& x) {
  return cos_2pi(x - Interval(Rational(1, 4)));
}

Interval& Interval::operator+=(const Interval& rhs) {
  set_precision_for(rhs);
  mpfr_add(lo_, lo_, rhs.lo_, MPFR_RNDD);
  mpfr_add(hi_, hi_, rhs.hi_, MPFR_RNDU);
  return *this;
}

Interval& Interval::operator-=(const Interval& rhs) {
  set_precision_for(rhs);
  Interval r(precision(), 0);
  mpfr_sub(r.lo_, lo_, rhs.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, hi_, rhs.lo_, MPFR_RNDU);
  *this = std::move(r);
  return *this;
}

Interval& Interval::operator*=(const Interval& rhs) {
  set_precision_for(rhs);
  const mpfr_prec_t prec = precision();
  Interval r(prec, 0);
  mpfr_t t;
  mpfr_init2(t, prec);
  const __mpfr_struct* xs[2] = {lo_, hi_};
  const __mpfr_struct* ys[2] = {rhs.lo_, rhs.hi_};
  bool first = true;
  for (auto* x : xs) {
    for (auto* y : ys) {
      mpfr_mul(t, x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
      mpfr_mul(t, x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
      first = false;
    }
  }
  mpfr_clear(t);
  *this = std::move(r);
  return *this;
}

Interval& Interval::operator/=(const Interval& rhs) {
  if (rhs.contains_zero()) throw Error(ErrorCode::invalid_argument, "division by an interval containing zero");
  set_precision_for(rhs);
  const mpfr_prec_t prec = precision();
  Interval r(prec, 0);
  mpfr_t t;
  mpfr_init2(t, prec);
  const __mpfr_struct* xs[2] = {lo_, hi_};
  const __mpfr_struct* ys[2] = {rhs.lo_, rhs.hi_};
  bool first = true;
  for (auto* x : xs) {
    for (auto* y : ys) {
      mpfr_div(t, x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
      mpfr_div(t, x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
      first = false;
    }
  }
  mpfr_clear(t);
  *this = std::move(r);
  return *this;
}

Interval Interval::operator-() const {
  Interval r(precision(), 0);
  mpfr_neg(r.lo_, hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  return r;
}

Interval Interval::abs() const {
  if (mpfr_sgn(lo_) >= 0) return *this;
  if (mpfr_sgn(hi_) <= 0) return -*this;
  Interval r(precision(), 0);
  mpfr_set_zero(r.lo_, 1);
  mpfr_t t;
  mpfr_init2(t, precision());
  mpfr_neg(t, lo_, MPFR_RNDU);
  mpfr_max(r.hi_, t, hi_, MPFR_RNDU);
  mpfr_clear(t);
  return r;
}

Interval Interval::pow(unsigned long exponent) const {
  Interval r(std::max(precision(), g_precision), 0);
  if (exponent == 0) {
    mpfr_set_si(r.lo_, 1, MPFR_RNDD);
    mpfr_set_si(r.hi_, 1, MPFR_RNDU);
    return r;
  }
  const bool odd = (exponent % 2) == 1;
  if (mpfr_sgn(lo_) >= 0 || odd) {
    mpfr_pow_ui(r.lo_, lo_, exponent, MPFR_RNDD);
    mpfr_pow_ui(r.hi_, hi_, exponent, MPFR_RNDU);
    return r;
  }
  if (mpfr_sgn(hi_) <= 0) {
    mpfr_pow_ui(r.lo_, hi_, exponent, MPFR_RNDD);
    mpfr_pow_ui(r.hi_, lo_, exponent, MPFR_RNDU);
    return r;
  }
  Interval m = abs();
  mpfr_set_zero(r.lo_, 1);
  mpfr_pow_ui(r.hi_, m.hi_, exponent, MPFR_RNDU);
  return r;
}

Interval Interval::width() const {
  Interval r(precision(), 0);
  mpfr_sub(r.lo_, hi_, lo_, MPFR_RNDD);
  mpfr_sub(r.hi_, hi_, lo_, MPFR_RNDU);
  return r;
}

bool Interval::certainly_positive() const { return mpfr_sgn(lo_) > 0; }
bool Interval::certainly_negative() const { return mpfr_sgn(hi_) < 0; }
bool Interval::certainly_nonnegative() const { return mpfr_sgn(lo_) >= 0; }
bool Interval::contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }

bool Interval::contains(const Rational& value) const {
  return mpfr_cmp_q(lo_, value.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, value.get_mpq_t()) >= 0;
}

bool Interval::contains(const Interval& other) const {
  return mpfr_lessequal_p(lo_, other.lo_) && mpfr_greaterequal_p(hi_, other.hi_);
}

bool Interval::overlaps(const Interval& other) const {
  return mpfr_lessequal_p(lo_, other.hi_) && mpfr_lessequal_p(other.lo_, hi_);
}

bool Interval::certainly_less(const Interval& other) const { return mpfr_less_p(hi_, other.lo_); }
bool Interval::certainly_less_equal(const Interval& other) const {
  return mpfr_lessequal_p(hi_, other.lo_);
}

double Interval::lower_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::upper_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

double Interval::mid_double() const {
  mpfr_t t;
  mpfr_init2(t, precision() + 1);
  mpfr_add(t, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(t, t, 1, MPFR_RNDN);
  double d = mpfr_get_d(t, MPFR_RNDN);
  mpfr_clear(t);
  return d;
}

double Interval::width_double() const { return width().upper_double(); }

Rational Interval::lower_rational() const { return mpfr_to_rational(lo_); }
Rational Interval::upper_rational() const { return mpfr_to_rational(hi_); }

BigInt Interval::floor_lower() const {
  BigInt z;
  mpfr_get_z(z.get_mpz_t(), lo_, MPFR_RNDD);
  return z;
}

std::string Interval::lower_string(int digits) const { return mpfr_string(lo_, digits, true); }
std::string Interval::upper_string(int digits) const { return mpfr_string(hi_, digits, false); }

std::optional<BigInt> Interval::unique_round() const {
  Rational lo = lower_rational();
  Rational hi = upper_rational();
  Rational shifted = lo + Rational(1, 2);
  BigInt n;
  mpz_fdiv_q(n.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  if (lo > Rational(n) - Rational(1, 2) && hi < Rational(n) + Rational(1, 2)) return n;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Free functions on intervals and rationals

Interval max_norm(const IntervalVector& v) {
  Rational lo(0), hi(0);
  for (const auto& x : v) {
    Interval a = x.abs();
    lo = std::max(lo, a.lower_rational());
    hi = std::max(hi, a.upper_rational());
  }
  return Interval(lo, hi);
}

namespace {

Rational closest_integer_gap(const Rational& y) {
  // y in [0, 2]; distance to the nearest of 0, 1, 2.
  Rational d0 = abs(y);
  Rational d1 = abs(y - 1);
  Rational d2 = abs(y - 2);
  return std::min({d0, d1, d2});
}

BigInt floor_rational(const Rational& q) {
  BigInt z;
  mpz_fdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return z;
}

}  // namespace

Rational fractional_part(const Rational& x) { return x - Rational(floor_rational(x)); }

Rational distance_to_integer(const Rational& x) {
  Rational f = fractional_part(x);
  Rational g = 1 - f;
  return std::min(f, g);
}

Interval distance_to_integer(const Interval& x) {
  Rational lo = x.lower_rational();
  Rational hi = x.upper_rational();
  if (hi - lo >= 1) return Interval(Rational(0), Rational(1, 2));
  BigInt k = floor_rational(lo);
  Rational a = lo - Rational(k);
  Rational b = hi - Rational(k);
  Rational ga = closest_integer_gap(a);
  Rational gb = closest_integer_gap(b);
  Rational upper = std::max(ga, gb);
  Rational lower = std::min(ga, gb);
  const Rational half(1, 2);
  const Rational three_half(3, 2);
  if ((a <= half && half <= b) || (a <= three_half && three_half <= b)) upper = half;
  if ((a <= 1 && 1 <= b) || a == 0) lower = 0;
  return Interval(lower, upper);
}

Interval nearest_integer_distance(const IntervalVector& v) {
  Rational lo(0), hi(0);
  for (const auto& x : v) {
    Interval d = distance_to_integer(x);
    lo = std::max(lo, d.lower_rational());
    hi = std::max(hi, d.upper_rational());
  }
  return Interval(lo, hi);
}

Rational nearest_integer_distance(const RatVector& v) {
  Rational best(0);
  for (const auto& x : v) best = std::max(best, distance_to_integer(x));
  return best;
}

Interval reduce_mod_one(const Interval& x) {
  BigInt k = x.floor_lower();
  return x - Interval(k);
}

Interval dot(const IntervalVector& a, const IntervalVector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::invalid_argument, "dot: dimension mismatch");
  Interval s(0L);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Interval dot(const IntVector& a, const IntervalVector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::invalid_argument, "dot: dimension mismatch");
  Interval s(0L);
  for (std::size_t i = 0; i < a.size(); ++i) s += Interval(a[i]) * b[i];
  return s;
}

Rational dot(const RatVector& a, const RatVector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::invalid_argument, "dot: dimension mismatch");
  Rational s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

BigInt dot(const IntVector& a, const IntVector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::invalid_argument, "dot: dimension mismatch");
  BigInt s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

IntervalVector to_intervals(const IntVector& v) {
  IntervalVector out;
  out.reserve(v.size());
  for (const auto& x : v) out.emplace_back(x);
  return out;
}

IntervalVector to_intervals(const RatVector& v) {
  IntervalVector out;
  out.reserve(v.size());
  for (const auto& x : v) out.emplace_back(x);
  return out;
}

IntervalVector scale(const Interval& s, const IntVector& v) {
  IntervalVector out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(s * Interval(x));
  return out;
}

namespace {

// Base 10 always: GMP's automatic base would read "0125" as octal.
BigInt decimal_bigint(std::string s) {
  if (!s.empty() && s[0] == '+') s.erase(0, 1);
  return BigInt(s, 10);
}

}  // namespace

Rational parse_rational(const std::string& text) {
  auto fail = [&]() -> Rational {
    throw Error(ErrorCode::parse, "cannot parse rational '" + text + "'");
  };
  if (text.empty()) return fail();
  auto exp_pos = text.find_first_of("eE");
  if (exp_pos != std::string::npos && text.find('/') == std::string::npos) {
    const std::string exp_text = text.substr(exp_pos + 1);
    std::size_t start = (!exp_text.empty() && (exp_text[0] == '-' || exp_text[0] == '+')) ? 1 : 0;
    if (exp_text.size() == start || exp_text.size() > 12 ||
        exp_text.find_first_not_of("0123456789", start) != std::string::npos) {
      return fail();
    }
    const long e = std::stol(exp_text);
    Rational mant = parse_rational(text.substr(0, exp_pos));
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
    Rational r = e < 0 ? Rational(mant / Rational(scale)) : Rational(mant * Rational(scale));
    r.canonicalize();
    return r;
  }
  try {
    auto dot_pos = text.find('.');
    if (dot_pos != std::string::npos) {
      std::string whole = text.substr(0, dot_pos);
      std::string frac = text.substr(dot_pos + 1);
      bool negative = !whole.empty() && whole[0] == '-';
      if (negative) whole.erase(0, 1);
      if (whole.empty()) whole = "0";
      if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos ||
          whole.find_first_not_of("0123456789") != std::string::npos) {
        return fail();
      }
      BigInt num = decimal_bigint(whole + frac);
      BigInt den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
      Rational r(num, den);
      r.canonicalize();
      return negative ? Rational(-r) : r;
    }
    auto check_int = [&](const std::string& s) {
      std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
      if (s.size() == start || s.find_first_not_of("0123456789", start) != std::string::npos) fail();
    };
    auto slash = text.find('/');
    if (slash == std::string::npos) {
      check_int(text);
      return Rational(decimal_bigint(text));
    }
    std::string num = text.substr(0, slash);
    std::string den = text.substr(slash + 1);
    check_int(num);
    check_int(den);
    BigInt d = decimal_bigint(den);
    if (d == 0) return fail();
    Rational r(decimal_bigint(num), d);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    return fail();
  }
}

std::string to_string(const BigInt& value) { return value.get_str(); }

std::string to_string(const Rational& value) { return value.get_str(); }

// ---------------------------------------------------------------------------
// IntMatrix

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, BigInt(0)) {}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::invalid_argument, "ragged matrix literal");
    for (long x : r) data_.emplace_back(x);
  }
}

IntMatrix::IntMatrix(const std::vector<std::vector<BigInt>>& rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.front().size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::invalid_argument, "ragged matrix");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntVector IntMatrix::row(std::size_t i) const {
  return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                   data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

IntVector IntMatrix::column(std::size_t j) const {
  IntVector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = at(i, j);
  return c;
}

IntVector IntMatrix::row_sums() const {
  IntVector s(rows_, BigInt(0));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) s[i] += at(i, j);
  return s;
}

bool IntMatrix::is_positive() const {
  return std::all_of(data_.begin(), data_.end(), [](const BigInt& x) { return x > 0; });
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

IntVector IntMatrix::apply(const IntVector& v) const {
  if (v.size() != cols_) throw Error(ErrorCode::invalid_argument, "matrix-vector dimension mismatch");
  IntVector out(rows_, BigInt(0));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i] += at(i, j) * v[j];
  return out;
}

RatVector IntMatrix::apply(const RatVector& v) const {
  if (v.size() != cols_) throw Error(ErrorCode::invalid_argument, "matrix-vector dimension mismatch");
  RatVector out(rows_, Rational(0));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i] += Rational(at(i, j)) * v[j];
  return out;
}

IntervalVector IntMatrix::apply(const IntervalVector& v) const {
  if (v.size() != cols_) throw Error(ErrorCode::invalid_argument, "matrix-vector dimension mismatch");
  IntervalVector out(rows_, Interval(0L));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i] += Interval(at(i, j)) * v[j];
  return out;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorCode::invalid_argument, "matrix product dimension mismatch");
  IntMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const BigInt& aik = a.at(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c.at(i, j) += aik * b.at(k, j);
    }
  return c;
}

// ---------------------------------------------------------------------------
// Exact linear algebra

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(std::vector<RatVector>& rows, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[r], rows[p]);
    Rational inv = 1 / rows[r][c];
    for (auto& x : rows[r]) x *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      Rational f = rows[i][c];
      for (std::size_t j = 0; j < cols; ++j) rows[i][j] -= f * rows[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::size_t rational_rank(std::vector<RatVector> rows) {
  if (rows.empty()) return 0;
  return rref(rows, rows.front().size()).size();
}

std::vector<RatVector> rational_kernel(const IntMatrix& m) {
  std::vector<RatVector> rows(m.rows(), RatVector(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = Rational(m.at(i, j));
  auto pivots = rref(rows, m.cols());
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<RatVector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    RatVector v(m.cols(), Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -rows[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

bool is_integral(const RatVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x.get_den() == 1; });
}

}  // namespace bratteli
