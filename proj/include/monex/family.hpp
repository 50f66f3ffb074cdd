#pragma once

#include <string>
#include <utility>
#include <vector>

#include "monex/forge.hpp"
#include "monex/interval.hpp"
#include "monex/mat2.hpp"

namespace monex {

enum class MapKind { identity, shift_plus, shift_minus, mobius };

std::string map_kind_name(MapKind k);

// One strictly increasing piece of a map of the unit interval. The domain is a
// single closed interval and the image stays inside [0,1]. A matrix action
// whose pole splits its region of validity contributes one piece per side.
struct PiecewiseMap {
  MapKind kind = MapKind::identity;
  Mat2 g;          // meaningful only for MapKind::mobius
  unsigned K = 0;  // meaningful only for the shift kinds, step is 1/K
  Interval domain{Rational(0), Rational(1)};

  // x must lie in the domain; exact.
  Rational eval(const Rational& x) const;

  // Derivative at x in the domain; always positive.
  Rational derivative(const Rational& x) const;

  // Exact image [eval(lo), eval(hi)] of the full domain.
  Interval image() const;

  std::string str() const;
};

PiecewiseMap identity_map();
PiecewiseMap shift_plus_map(unsigned K);   // x -> x + 1/K on [0, 1-1/K]
PiecewiseMap shift_minus_map(unsigned K);  // x -> x - 1/K on [1/K, 1]

struct MapFamily {
  std::vector<PiecewiseMap> maps;
  unsigned K = 0;
  Rational epsilon;    // radius the family was derived from; 0 when unspecified
  size_t dropped = 0;  // generator directions discarded for an empty domain
  std::vector<std::string> warnings;
};

// Smallest power of two >= 4/epsilon, clamped to at least 4. epsilon > 0.
unsigned default_K(const Rational& epsilon);

// The three base maps {identity, +1/K, -1/K} plus, for every h in
// gens and every inverse, the action x -> (ax+b)/(cx+d) restricted to the
// closed region of [0,1] that it keeps inside [0,1]. Pieces never touch the
// pole. Empty regions are dropped and recorded in warnings. K >= 2.
MapFamily build_family(const std::vector<Mat2>& gens, unsigned K,
                       const Rational& epsilon = Rational(0));

// Convenience overload: K = 0 picks default_K(gs.epsilon).
MapFamily build_family(const GeneratorSet& gs, unsigned K = 0);

// Exact image of a finite interval union under one piece (clipped to its
// domain) or under the whole family (union over pieces, A always kept by the
// identity map).
IntervalSet apply_map(const PiecewiseMap& m, const IntervalSet& A);
IntervalSet apply_family(const MapFamily& F, const IntervalSet& A);

struct ExpansionResult {
  Rational input;     // |A|
  Rational output;    // |F(A)|
  Rational ratio;     // output / input, exact
  bool exceeds_half;  // |A| > 1/2; the ratio is still computed
};

// A must be a nonempty subset of [0,1].
ExpansionResult expansion_ratio(const MapFamily& F, const IntervalSet& A);

// Extremes of psi(x) - x over one piece, attained at a domain endpoint or at
// an interior critical point. Critical points solve (cx+d)^2 = 1, so they are
// rational and the scan is exact.
std::pair<Rational, Rational> drift_range(const PiecewiseMap& m);

struct DeviationReport {
  Rational sup_dist;   // max |psi(x) - x| over the family
  Rational sup_slope;  // max |psi'(x) - 1|, attained at domain endpoints
  Rational drift_min;  // most negative psi(x) - x seen
  Rational drift_max;  // most positive psi(x) - x seen
  size_t mixed_sign = 0;  // pieces whose drift changes sign on their domain
};

DeviationReport sup_deviation(const MapFamily& F);

struct BalanceResult {
  bool balanced = false;
  unsigned witness = 0;        // first k in 1..K-1 with a cell jump, 0 if none
  std::vector<Rational> cell;  // cell[k-1] = |A intersect [(k-1)/K, k/K]|
  Rational total;              // |A|
};

// Scans the K-cell masses of A for the first adjacent jump of at least
// sigma*|A|. When none exists every cell is additionally checked against the
// uniformity bound |K*m(k) - |A|| < sigma*K^2*|A|. A must be a nonempty
// subset of [0,1], K >= 2, sigma > 0.
BalanceResult balance_test(const IntervalSet& A, unsigned K, const Rational& sigma);

}  // namespace monex
