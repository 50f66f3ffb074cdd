#include "monex/family.hpp"

#include <algorithm>
#include <stdexcept>

#include "monex/errors.hpp"

namespace monex {

std::string map_kind_name(MapKind k) {
  switch (k) {
    case MapKind::identity: return "identity";
    case MapKind::shift_plus: return "shift_plus";
    case MapKind::shift_minus: return "shift_minus";
    case MapKind::mobius: return "mobius";
  }
  throw std::logic_error("map_kind_name: bad kind");
}

Rational PiecewiseMap::eval(const Rational& x) const {
  if (!domain.contains(x)) throw std::invalid_argument("PiecewiseMap::eval: x outside domain");
  switch (kind) {
    case MapKind::identity: return x;
    case MapKind::shift_plus: return x + Rational(1, K);
    case MapKind::shift_minus: return x - Rational(1, K);
    case MapKind::mobius: {
      ExtendedRational y = mobius_apply(g, x);
      if (!y.is_finite()) throw PoleError("PiecewiseMap::eval: pole inside domain");
      return y.value;
    }
  }
  throw std::logic_error("PiecewiseMap::eval: bad kind");
}

Rational PiecewiseMap::derivative(const Rational& x) const {
  if (!domain.contains(x)) throw std::invalid_argument("PiecewiseMap::derivative: x outside domain");
  if (kind == MapKind::mobius) return mobius_derivative(g, x);
  return Rational(1);
}

Interval PiecewiseMap::image() const { return Interval(eval(domain.lo), eval(domain.hi)); }

std::string PiecewiseMap::str() const {
  std::string s = map_kind_name(kind);
  if (kind == MapKind::mobius) s += " [" + g.str() + "]";
  if (kind == MapKind::shift_plus || kind == MapKind::shift_minus)
    s += " 1/" + std::to_string(K);
  s += " on [" + domain.lo.str() + ", " + domain.hi.str() + "]";
  return s;
}

PiecewiseMap identity_map() {
  PiecewiseMap m;
  m.kind = MapKind::identity;
  m.domain = Interval(Rational(0), Rational(1));
  return m;
}

static void check_shift_K(unsigned K) {
  if (K < 2) throw InvalidK("shift map: K must be at least 2");
}

PiecewiseMap shift_plus_map(unsigned K) {
  check_shift_K(K);
  PiecewiseMap m;
  m.kind = MapKind::shift_plus;
  m.K = K;
  m.domain = Interval(Rational(0), Rational(1) - Rational(1, K));
  return m;
}

PiecewiseMap shift_minus_map(unsigned K) {
  check_shift_K(K);
  PiecewiseMap m;
  m.kind = MapKind::shift_minus;
  m.K = K;
  m.domain = Interval(Rational(1, K), Rational(1));
  return m;
}

unsigned default_K(const Rational& epsilon) {
  if (!(Rational(0) < epsilon)) throw std::invalid_argument("default_K: epsilon must be positive");
  Rational target = Rational(4) / epsilon;
  unsigned K = 4;
  while (Rational(static_cast<long>(K)) < target) {
    if (K > (1u << 30)) throw InvalidK("default_K: required K exceeds 2^31");
    K *= 2;
  }
  return K;
}

// In-domain predicate for the raw action of g: finite value inside [0,1].
static bool mobius_keeps(const Mat2& g, const Rational& x) {
  ExtendedRational y = mobius_apply(g, x);
  return y.is_finite() && Rational(0) <= y.value && y.value <= Rational(1);
}

// Maximal closed subintervals of [0,1] on which x -> (ax+b)/(cx+d) stays in
// [0,1]. The predicate changes only at preimages of 0 and 1 and at the pole,
// so midpoints between consecutive candidates decide each segment, and two
// in-domain segments merge exactly when the shared candidate is itself
// in-domain (never at the pole). At most two pieces result.
static std::vector<Interval> mobius_domains(const Mat2& g) {
  std::vector<Rational> cuts{Rational(0), Rational(1)};
  auto add_cut = [&cuts](const ExtendedRational& x) {
    if (x.is_finite() && Rational(0) < x.value && x.value < Rational(1))
      cuts.push_back(x.value);
  };
  Mat2 ginv = mat_inv(g);
  add_cut(mobius_apply(ginv, Rational(0)));
  add_cut(mobius_apply(ginv, Rational(1)));
  add_cut(mobius_pole(g));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Interval> out;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    Rational mid = (cuts[i] + cuts[i + 1]) / Rational(2);
    if (!mobius_keeps(g, mid)) continue;
    if (!out.empty() && out.back().hi == cuts[i] && mobius_keeps(g, cuts[i])) {
      out.back() = Interval(out.back().lo, cuts[i + 1]);
    } else {
      out.emplace_back(cuts[i], cuts[i + 1]);
    }
  }
  return out;
}

MapFamily build_family(const std::vector<Mat2>& gens, unsigned K, const Rational& epsilon) {
  if (K < 2) throw InvalidK("build_family: K must be at least 2");
  MapFamily F;
  F.K = K;
  F.epsilon = epsilon;
  F.maps.push_back(identity_map());
  F.maps.push_back(shift_plus_map(K));
  F.maps.push_back(shift_minus_map(K));

  std::vector<Mat2> directions;
  for (const Mat2& g : gens) {
    directions.push_back(g);
    directions.push_back(mat_inv(g));
  }
  for (const Mat2& h : directions) {
    std::vector<Interval> doms = mobius_domains(h);
    size_t kept = 0;
    for (const Interval& d : doms) {
      if (d.degenerate()) continue;
      PiecewiseMap m;
      m.kind = MapKind::mobius;
      m.g = h;
      m.domain = d;
      Interval im = m.image();
      if (im.lo < Rational(0) || Rational(1) < im.hi)
        throw std::logic_error("build_family: image escaped the unit interval");
      F.maps.push_back(m);
      ++kept;
    }
    if (kept == 0) {
      ++F.dropped;
      F.warnings.push_back("dropped [" + h.str() + "]: action leaves the unit interval");
    }
  }
  return F;
}

MapFamily build_family(const GeneratorSet& gs, unsigned K) {
  if (K == 0) K = default_K(gs.epsilon);
  return build_family(gs.gens, K, gs.epsilon);
}

IntervalSet apply_map(const PiecewiseMap& m, const IntervalSet& A) {
  std::vector<Interval> images;
  IntervalSet clipped = A.intersect(m.domain);
  for (const Interval& part : clipped.parts())
    images.emplace_back(m.eval(part.lo), m.eval(part.hi));
  return IntervalSet(std::move(images));
}

IntervalSet apply_family(const MapFamily& F, const IntervalSet& A) {
  std::vector<Interval> images;
  for (const PiecewiseMap& m : F.maps) {
    IntervalSet clipped = A.intersect(m.domain);
    for (const Interval& part : clipped.parts())
      images.emplace_back(m.eval(part.lo), m.eval(part.hi));
  }
  return IntervalSet(std::move(images));
}

static void require_unit_subset(const IntervalSet& A, const char* who) {
  if (A.empty()) throw EmptyInput(std::string(who) + ": set has measure zero");
  if (A.parts().front().lo < Rational(0) || Rational(1) < A.parts().back().hi)
    throw std::invalid_argument(std::string(who) + ": set must lie inside [0,1]");
}

ExpansionResult expansion_ratio(const MapFamily& F, const IntervalSet& A) {
  require_unit_subset(A, "expansion_ratio");
  ExpansionResult r;
  r.input = A.measure();
  r.output = apply_family(F, A).measure();
  r.ratio = r.output / r.input;
  r.exceeds_half = Rational(1, 2) < r.input;
  return r;
}

std::pair<Rational, Rational> drift_range(const PiecewiseMap& m) {
  switch (m.kind) {
    case MapKind::identity: return {Rational(0), Rational(0)};
    case MapKind::shift_plus: return {Rational(1, m.K), Rational(1, m.K)};
    case MapKind::shift_minus: return {Rational(-1, m.K), Rational(-1, m.K)};
    case MapKind::mobius: break;
  }
  // psi(x) - x is stationary where (cx+d)^2 = 1; both roots are rational.
  std::vector<Rational> xs{m.domain.lo, m.domain.hi};
  if (!m.g.c.is_zero()) {
    for (int s : {+1, -1}) {
      Rational root = (Rational(s) - m.g.d) / m.g.c;
      if (m.domain.lo < root && root < m.domain.hi) xs.push_back(root);
    }
  }
  Rational lo = m.eval(xs[0]) - xs[0], hi = lo;
  for (const Rational& x : xs) {
    Rational f = m.eval(x) - x;
    lo = min(lo, f);
    hi = max(hi, f);
  }
  return {lo, hi};
}

DeviationReport sup_deviation(const MapFamily& F) {
  if (F.maps.empty()) throw EmptyInput("sup_deviation: family has no maps");
  DeviationReport rep;
  rep.sup_dist = Rational(0);
  rep.sup_slope = Rational(0);
  rep.drift_min = Rational(0);
  rep.drift_max = Rational(0);
  bool first = true;
  for (const PiecewiseMap& m : F.maps) {
    auto [lo, hi] = drift_range(m);
    if (first) {
      rep.drift_min = lo;
      rep.drift_max = hi;
      first = false;
    } else {
      rep.drift_min = min(rep.drift_min, lo);
      rep.drift_max = max(rep.drift_max, hi);
    }
    rep.sup_dist = max(rep.sup_dist, max(abs(lo), abs(hi)));
    if (lo < Rational(0) && Rational(0) < hi) ++rep.mixed_sign;
    // psi' - 1 is monotone on a pole-free interval, so endpoints suffice.
    for (const Rational& x : {m.domain.lo, m.domain.hi})
      rep.sup_slope = max(rep.sup_slope, abs(m.derivative(x) - Rational(1)));
  }
  return rep;
}

BalanceResult balance_test(const IntervalSet& A, unsigned K, const Rational& sigma) {
  if (K < 2) throw InvalidK("balance_test: K must be at least 2");
  if (!(Rational(0) < sigma)) throw std::invalid_argument("balance_test: sigma must be positive");
  require_unit_subset(A, "balance_test");

  BalanceResult res;
  res.total = A.measure();
  res.cell.reserve(K);
  for (unsigned k = 1; k <= K; ++k) {
    Interval cell(Rational(static_cast<long>(k) - 1, K), Rational(static_cast<long>(k), K));
    res.cell.push_back(A.intersect(cell).measure());
  }
  Rational jump_bound = sigma * res.total;
  for (unsigned k = 1; k < K; ++k) {
    if (!(abs(res.cell[k] - res.cell[k - 1]) < jump_bound)) {
      res.balanced = false;
      res.witness = k;
      return res;
    }
  }
  res.balanced = true;
  // All adjacent jumps are below sigma*|A|, which forces every cell mass to
  // sit within sigma*K*|A| of the mean |A|/K. Verified exactly.
  Rational uniform_bound = sigma * Rational(static_cast<long>(K)) *
                           Rational(static_cast<long>(K)) * res.total;
  for (unsigned k = 0; k < K; ++k) {
    Rational dev = abs(Rational(static_cast<long>(K)) * res.cell[k] - res.total);
    if (!(dev < uniform_bound))
      throw std::logic_error("balance_test: uniformity bound failed on a balanced set");
  }
  return res;
}

}  // namespace monex
