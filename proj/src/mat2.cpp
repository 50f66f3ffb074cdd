#include "monex/mat2.hpp"

#include <sstream>
#include <vector>

namespace monex {

Mat2::Mat2(Rational a_, Rational b_, Rational c_, Rational d_)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
  if (det() != Rational(1))
    throw std::invalid_argument("Mat2: determinant must be 1, got " + det().str());
}

Mat2 Mat2::unchecked(Rational a_, Rational b_, Rational c_, Rational d_) {
  Mat2 m;
  m.a = std::move(a_);
  m.b = std::move(b_);
  m.c = std::move(c_);
  m.d = std::move(d_);
  return m;
}

static std::array<Rational, 4> parse_entries(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> tok;
  std::string t;
  while (in >> t) tok.push_back(t);
  if (tok.size() != 4) throw ParseError("Mat2::parse: expected 4 fractions, got " + std::to_string(tok.size()));
  return {Rational::parse(tok[0]), Rational::parse(tok[1]), Rational::parse(tok[2]), Rational::parse(tok[3])};
}

Mat2 Mat2::parse(const std::string& text) {
  auto e = parse_entries(text);
  return Mat2(e[0], e[1], e[2], e[3]);
}

Mat2 Mat2::parse_unchecked(const std::string& text) {
  auto e = parse_entries(text);
  return Mat2::unchecked(e[0], e[1], e[2], e[3]);
}

bool mat_less(const Mat2& x, const Mat2& y) {
  if (x.a != y.a) return x.a < y.a;
  if (x.b != y.b) return x.b < y.b;
  if (x.c != y.c) return x.c < y.c;
  return x.d < y.d;
}

Mat2 mat_mul(const Mat2& x, const Mat2& y) {
  return Mat2::unchecked(x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                         x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d);
}

Mat2 mat_inv(const Mat2& g) { return Mat2::unchecked(g.d, -g.b, -g.c, g.a); }

Mat2 mat_pow(const Mat2& g, long n) {
  Mat2 base = n < 0 ? mat_inv(g) : g;
  unsigned long k = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  Mat2 acc = Mat2::identity();
  while (k) {
    if (k & 1) acc = mat_mul(acc, base);
    base = mat_mul(base, base);
    k >>= 1;
  }
  return acc;
}

Rational dist_sq(const Mat2& x, const Mat2& y) {
  Rational da = x.a - y.a, db = x.b - y.b, dc = x.c - y.c, dd = x.d - y.d;
  return da * da + db * db + dc * dc + dd * dd;
}

Rational norm_sq(const Mat2& g) { return g.a * g.a + g.b * g.b + g.c * g.c + g.d * g.d; }

Rational trace(const Mat2& g) { return g.a + g.d; }

Mat2 flip(const Mat2& g) { return Mat2::unchecked(g.d, -g.c, -g.b, g.a); }

Rational inner4(const Mat2& x, const Mat2& y) {
  return x.a * y.a + x.b * y.b + x.c * y.c + x.d * y.d;
}

Rational det4(const Mat2& g0, const Mat2& g1, const Mat2& g2, const Mat2& g3) {
  std::array<std::array<Rational, 4>, 4> m = {g0.row_major(), g1.row_major(), g2.row_major(),
                                              g3.row_major()};
  // Laplace expansion along the first row with exact 3x3 minors.
  auto det3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
    return m[r0][c0] * (m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1]) -
           m[r0][c1] * (m[r1][c0] * m[r2][c2] - m[r1][c2] * m[r2][c0]) +
           m[r0][c2] * (m[r1][c0] * m[r2][c1] - m[r1][c1] * m[r2][c0]);
  };
  return m[0][0] * det3(1, 2, 3, 1, 2, 3) - m[0][1] * det3(1, 2, 3, 0, 2, 3) +
         m[0][2] * det3(1, 2, 3, 0, 1, 3) - m[0][3] * det3(1, 2, 3, 0, 1, 2);
}

ExtendedRational mobius_apply(const Mat2& g, const ExtendedRational& x) {
  if (x.infinite) {
    if (g.c.is_zero()) return ExtendedRational::inf();
    return ExtendedRational(g.a / g.c);
  }
  Rational den = g.c * x.value + g.d;
  if (den.is_zero()) return ExtendedRational::inf();
  return ExtendedRational((g.a * x.value + g.b) / den);
}

Rational mobius_derivative(const Mat2& g, const Rational& x) {
  Rational den = g.c * x + g.d;
  if (den.is_zero()) throw PoleError("mobius_derivative: pole at x = " + x.str());
  return Rational(1) / (den * den);
}

ExtendedRational mobius_pole(const Mat2& g) {
  if (g.c.is_zero()) return ExtendedRational::inf();
  return ExtendedRational(-g.d / g.c);
}

}  // namespace monex
