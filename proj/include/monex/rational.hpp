#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "monex/errors.hpp"

namespace monex {

// Exact rational, always canonical: gcd(num, den) = 1, den > 0, zero is 0/1.
// Thin wrapper over mpq_class; construction canonicalizes, arithmetic preserves it.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(int n) : v_(n) {}                // NOLINT(google-explicit-constructor)
  Rational(long n) : v_(static_cast<long>(n)) {}  // NOLINT
  Rational(long long n) { set_ll(n); }      // NOLINT
  Rational(const mpz_class& n) : v_(n) {}   // NOLINT
  explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  Rational(long long num, long long den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    v_ = mpq_class(ll_to_mpz(num)) / mpq_class(ll_to_mpz(den));
    v_.canonicalize();
  }

  Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    // Set the components directly: routing through mpq division would run
    // two full-size gcds where canonicalize alone needs one, which matters
    // for the multi-megabit values interval measures produce.
    mpz_set(mpq_numref(v_.get_mpq_t()), num.get_mpz_t());
    mpz_set(mpq_denref(v_.get_mpq_t()), den.get_mpz_t());
    v_.canonicalize();
  }

  // Parses "n" or "n/d" (optional sign, arbitrary precision).
  static Rational parse(const std::string& text);

  const mpq_class& raw() const { return v_; }
  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }

  double to_double() const { return v_.get_d(); }

  // Canonical text form, always "num/den" (e.g. "3/2", "-1/4", "5/1").
  std::string str() const {
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  friend Rational operator+(const Rational& a, const Rational& b) { return wrap(a.v_ + b.v_); }
  friend Rational operator-(const Rational& a, const Rational& b) { return wrap(a.v_ - b.v_); }
  friend Rational operator*(const Rational& a, const Rational& b) { return wrap(a.v_ * b.v_); }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::invalid_argument("Rational: division by zero");
    return wrap(a.v_ / b.v_);
  }
  Rational operator-() const { return wrap(-v_); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::invalid_argument("Rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

 private:
  static Rational wrap(const mpq_class& q) {
    Rational r;
    r.v_ = q;  // arithmetic on canonical operands stays canonical
    return r;
  }
  static mpz_class ll_to_mpz(long long x) {
    mpz_class z;
    bool neg = x < 0;
    unsigned long long ux = neg ? 0ULL - static_cast<unsigned long long>(x)
                                : static_cast<unsigned long long>(x);
    mpz_import(z.get_mpz_t(), 1, 1, sizeof(ux), 0, 0, &ux);
    if (neg) z = -z;
    return z;
  }
  void set_ll(long long x) { v_ = mpq_class(ll_to_mpz(x)); }

  mpq_class v_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

inline Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

// floor(a) as an exact integer.
inline mpz_class floor_int(const Rational& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.numerator().get_mpz_t(), r.denominator().get_mpz_t());
  return q;
}

// Smallest dyadic m/2^bits with m integer such that m/2^bits >= sqrt(x); x >= 0.
Rational sqrt_upper(const Rational& x, unsigned bits = 32);

inline mpz_class int_pow(const mpz_class& base, unsigned long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

// Exact x^e; canonical since gcd(num,den) = 1 is preserved by powers.
inline Rational rat_pow(const Rational& x, unsigned long e) {
  return Rational(int_pow(x.numerator(), e), int_pow(x.denominator(), e));
}

// Natural log of a positive integer, exact to double precision even when the
// value itself overflows double range.
double log_mpz(const mpz_class& z);

double log_rational(const Rational& r);  // requires r > 0

// Either a finite rational or the single point at infinity of the projective line.
struct ExtendedRational {
  bool infinite = false;
  Rational value;  // meaningful only when !infinite

  ExtendedRational() = default;
  ExtendedRational(const Rational& v) : infinite(false), value(v) {}  // NOLINT
  static ExtendedRational inf() {
    ExtendedRational e;
    e.infinite = true;
    return e;
  }

  bool is_finite() const { return !infinite; }

  friend bool operator==(const ExtendedRational& a, const ExtendedRational& b) {
    if (a.infinite || b.infinite) return a.infinite == b.infinite;
    return a.value == b.value;
  }

  std::string str() const { return infinite ? "inf" : value.str(); }
};

}  // namespace monex
