#pragma once

#include <array>
#include <string>

#include "monex/rational.hpp"

namespace monex {

// Unimodular 2x2 rational matrix [[a,b],[c,d]], det = ad - bc = 1 enforced on
// construction. unchecked() exists only so verifiers can load possibly corrupt
// data and report on it instead of crashing.
struct Mat2 {
  Rational a, b, c, d;

  Mat2() : a(1), b(0), c(0), d(1) {}
  Mat2(Rational a_, Rational b_, Rational c_, Rational d_);

  static Mat2 identity() { return Mat2(); }
  static Mat2 unchecked(Rational a_, Rational b_, Rational c_, Rational d_);

  Rational det() const { return a * d - b * c; }
  bool is_identity() const { return a == Rational(1) && b.is_zero() && c.is_zero() && d == Rational(1); }

  std::array<Rational, 4> row_major() const { return {a, b, c, d}; }

  // Canonical text form: four reduced fractions, row-major, space separated.
  std::string str() const { return a.str() + " " + b.str() + " " + c.str() + " " + d.str(); }
  static Mat2 parse(const std::string& text);
  static Mat2 parse_unchecked(const std::string& text);

  friend bool operator==(const Mat2& x, const Mat2& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
  }
  friend bool operator!=(const Mat2& x, const Mat2& y) { return !(x == y); }
};

// Total order for deterministic tie-breaking (row-major entrywise).
bool mat_less(const Mat2& x, const Mat2& y);

Mat2 mat_mul(const Mat2& x, const Mat2& y);
inline Mat2 operator*(const Mat2& x, const Mat2& y) { return mat_mul(x, y); }

// Inverse of a det-1 matrix: [[d,-b],[-c,a]].
Mat2 mat_inv(const Mat2& g);

// g^n for any integer n (n < 0 via the inverse).
Mat2 mat_pow(const Mat2& g, long n);

// Squared entrywise-L2 distance: sum of squared entry differences.
Rational dist_sq(const Mat2& x, const Mat2& y);

// Squared entrywise-L2 norm of the 4-vector of entries.
Rational norm_sq(const Mat2& g);

Rational trace(const Mat2& g);

// flip(g) = [[d,-c],[-b,a]]; trace(mat_inv(h) * g) == inner4(g, flip(h)).
Mat2 flip(const Mat2& g);

// Standard inner product of the two matrices as vectors in R^4.
Rational inner4(const Mat2& x, const Mat2& y);

// Determinant of the 4x4 matrix whose rows are the entries of g0..g3.
Rational det4(const Mat2& g0, const Mat2& g1, const Mat2& g2, const Mat2& g3);

// Mobius action on the projective line: x -> (ax+b)/(cx+d). Total: the pole
// maps to infinity and infinity maps to a/c (or infinity when c = 0).
ExtendedRational mobius_apply(const Mat2& g, const ExtendedRational& x);

// Derivative 1/(cx+d)^2 at a finite point; PoleError when cx+d = 0.
Rational mobius_derivative(const Mat2& g, const Rational& x);

// Pole of the action ( -d/c ), or infinity when c = 0 (no finite pole).
ExtendedRational mobius_pole(const Mat2& g);

}  // namespace monex
