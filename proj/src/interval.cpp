#include "monex/interval.hpp"

#include <algorithm>

namespace monex {

Rational IntervalSet::measure() const {
  if (parts_.empty()) return Rational(0);
  // Image sets routinely hold tens of thousands of pieces whose endpoint
  // denominators are pairwise coprime, so the exact total genuinely has a
  // denominator near the product of all of them. Two things keep that
  // tractable: an adjacent-pair reduction so every addition multiplies
  // like-sized operands, and raw num/den arithmetic so no intermediate gcd
  // runs (each would cost more than all the multiplies combined only to
  // discover there is nothing to cancel). One canonicalization at the end.
  std::vector<mpz_class> num(parts_.size()), den(parts_.size());
  for (size_t i = 0; i < parts_.size(); ++i) {
    Rational len = parts_[i].length();
    num[i] = len.numerator();
    den[i] = len.denominator();
  }
  for (size_t n = num.size(); n > 1; n = (n + 1) / 2) {
    for (size_t i = 0; i < n / 2; ++i) {
      num[i] = num[2 * i] * den[2 * i + 1] + num[2 * i + 1] * den[2 * i];
      den[i] = den[2 * i] * den[2 * i + 1];
    }
    if (n % 2) {
      num[n / 2] = std::move(num[n - 1]);
      den[n / 2] = std::move(den[n - 1]);
    }
  }
  return Rational(num[0], den[0]);
}

void IntervalSet::assign(std::vector<Interval> parts) {
  parts.erase(std::remove_if(parts.begin(), parts.end(),
                             [](const Interval& iv) { return iv.degenerate(); }),
              parts.end());
  std::sort(parts.begin(), parts.end(),
            [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  parts_.clear();
  for (Interval& iv : parts) {
    if (!parts_.empty() && iv.lo <= parts_.back().hi) {
      if (iv.hi > parts_.back().hi) parts_.back().hi = iv.hi;
    } else {
      parts_.push_back(iv);
    }
  }
}

bool IntervalSet::contains(const Rational& x) const {
  for (const Interval& iv : parts_) {
    if (iv.lo > x) return false;
    if (x <= iv.hi) return true;
  }
  return false;
}

IntervalSet IntervalSet::intersect(const Interval& window) const {
  std::vector<Interval> out;
  for (const Interval& iv : parts_) {
    Rational lo = max(iv.lo, window.lo);
    Rational hi = min(iv.hi, window.hi);
    if (lo < hi) out.push_back(Interval(lo, hi));
  }
  IntervalSet r;
  r.assign(std::move(out));
  return r;
}

IntervalSet set_union(const IntervalSet& a, const IntervalSet& b) {
  std::vector<Interval> all = a.parts_;
  all.insert(all.end(), b.parts_.begin(), b.parts_.end());
  IntervalSet r;
  r.assign(std::move(all));
  return r;
}

IntervalSet set_intersect(const IntervalSet& a, const IntervalSet& b) {
  std::vector<Interval> out;
  size_t i = 0, j = 0;
  while (i < a.parts_.size() && j < b.parts_.size()) {
    const Interval& x = a.parts_[i];
    const Interval& y = b.parts_[j];
    Rational lo = max(x.lo, y.lo);
    Rational hi = min(x.hi, y.hi);
    if (lo < hi) out.push_back(Interval(lo, hi));
    if (x.hi < y.hi) {
      ++i;
    } else {
      ++j;
    }
  }
  IntervalSet r;
  r.assign(std::move(out));
  return r;
}

std::string IntervalSet::str() const {
  std::string out = "{";
  for (size_t i = 0; i < parts_.size(); ++i) {
    if (i) out += ", ";
    out += "[" + parts_[i].lo.str() + ", " + parts_[i].hi.str() + "]";
  }
  return out + "}";
}

}  // namespace monex
