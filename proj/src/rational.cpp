#include "monex/rational.hpp"

#include <cmath>

namespace monex {

Rational Rational::parse(const std::string& text) {
  if (text.empty()) throw ParseError("Rational::parse: empty string");
  std::string num = text, den = "1";
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    num = text.substr(0, slash);
    den = text.substr(slash + 1);
    if (num.empty() || den.empty()) throw ParseError("Rational::parse: bad fraction '" + text + "'");
  }
  auto digits_ok = [](const std::string& s) {
    size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  if (!digits_ok(num) || !digits_ok(den)) throw ParseError("Rational::parse: bad fraction '" + text + "'");
  mpz_class n(num), d(den);
  if (d == 0) throw ParseError("Rational::parse: zero denominator in '" + text + "'");
  return Rational(n, d);
}

Rational sqrt_upper(const Rational& x, unsigned bits) {
  if (x.sign() < 0) throw std::invalid_argument("sqrt_upper: negative input");
  if (x.is_zero()) return Rational(0);
  // ceil(sqrt(x * 4^bits)) / 2^bits >= sqrt(x): take y = ceil(num*4^b/den),
  // isqrt gives floor; bump until square >= y.
  mpz_class scaled_num = x.numerator() << (2 * bits);
  mpz_class q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), scaled_num.get_mpz_t(), x.denominator().get_mpz_t());
  mpz_class y = q + (r != 0 ? 1 : 0);  // ceil(x * 4^bits)
  mpz_class s;
  mpz_sqrt(s.get_mpz_t(), y.get_mpz_t());
  if (s * s < y) s += 1;
  mpz_class two_b = mpz_class(1) << bits;
  return Rational(s, two_b);
}

double log_mpz(const mpz_class& z) {
  if (z <= 0) throw std::invalid_argument("log_mpz: nonpositive input");
  long e = 0;
  double m = mpz_get_d_2exp(&e, z.get_mpz_t());
  return std::log(m) + static_cast<double>(e) * std::log(2.0);
}

double log_rational(const Rational& r) {
  if (r.sign() <= 0) throw std::invalid_argument("log_rational: nonpositive input");
  return log_mpz(r.numerator()) - log_mpz(r.denominator());
}

}  // namespace monex
