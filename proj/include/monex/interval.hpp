#pragma once

#include <string>
#include <vector>

#include "monex/rational.hpp"

namespace monex {

// Closed interval [lo, hi] with rational endpoints, lo <= hi.
struct Interval {
  Rational lo, hi;

  Interval() : lo(0), hi(0) {}
  Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
    if (hi < lo) throw std::invalid_argument("Interval: hi < lo");
  }

  Rational length() const { return hi - lo; }
  bool degenerate() const { return lo == hi; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }

  friend bool operator==(const Interval& a, const Interval& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
};

// Finite union of positive-length closed intervals, kept sorted and disjoint;
// touching endpoints merge, degenerate pieces vanish. Measure is exact.
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(const Interval& iv) { assign({iv}); }
  explicit IntervalSet(std::vector<Interval> parts) { assign(std::move(parts)); }

  static IntervalSet unit() { return IntervalSet(Interval(Rational(0), Rational(1))); }

  const std::vector<Interval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  size_t size() const { return parts_.size(); }

  // Exact total length. Summed pairwise: image sets can hold tens of
  // thousands of pieces with pairwise-unrelated denominators, and a running
  // total would re-canonicalize an ever-growing denominator on every step.
  Rational measure() const;

  bool contains(const Rational& x) const;

  IntervalSet intersect(const Interval& window) const;
  friend IntervalSet set_union(const IntervalSet& a, const IntervalSet& b);
  friend IntervalSet set_intersect(const IntervalSet& a, const IntervalSet& b);

  friend bool operator==(const IntervalSet& a, const IntervalSet& b) {
    return a.parts_ == b.parts_;
  }

  std::string str() const;

 private:
  void assign(std::vector<Interval> parts);
  std::vector<Interval> parts_;
};

}  // namespace monex
