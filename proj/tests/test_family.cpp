#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "monex/errors.hpp"
#include "monex/family.hpp"
#include "monex/rng.hpp"

using namespace monex;

namespace {

Rational rat(long long n, long long d = 1) { return Rational(n, d); }

IntervalSet set_of(std::vector<std::pair<long long, long long>> pts, long long den) {
  std::vector<Interval> parts;
  for (auto& [lo, hi] : pts) parts.emplace_back(rat(lo, den), rat(hi, den));
  return IntervalSet(std::move(parts));
}

bool subset(const IntervalSet& a, const IntervalSet& b) {
  return set_intersect(a, b) == a;
}

// Sharp two-piece fixture: pole 1/2 inside [0,1] and infinity mapped to 1/4.
const Mat2 straddle(rat(1), rat(-3, 4), rat(4), rat(-2));

}  // namespace

TEST_CASE("default grid size is the smallest power of two covering four over epsilon") {
  CHECK(default_K(rat(1)) == 4);
  CHECK(default_K(rat(1, 3)) == 16);
  CHECK(default_K(rat(1, 4)) == 16);
  CHECK(default_K(rat(1, 1000)) == 4096);
  CHECK(default_K(rat(5)) == 4);  // clamp: never below 4
  CHECK(default_K(Rational::parse("1169760531661/512")) == 4);
  CHECK_THROWS_AS(default_K(rat(0)), std::invalid_argument);
  CHECK_THROWS_AS(default_K(rat(-1, 2)), std::invalid_argument);
  CHECK_THROWS_AS(default_K(rat(1, 1LL << 40)), InvalidK);
}

TEST_CASE("shift maps move every point by exactly one cell") {
  PiecewiseMap up = shift_plus_map(4);
  CHECK(up.domain == Interval(rat(0), rat(3, 4)));
  CHECK(up.eval(rat(0)) == rat(1, 4));
  CHECK(up.eval(rat(3, 4)) == rat(1));
  CHECK(up.image() == Interval(rat(1, 4), rat(1)));
  CHECK(up.derivative(rat(1, 2)) == rat(1));

  PiecewiseMap down = shift_minus_map(4);
  CHECK(down.domain == Interval(rat(1, 4), rat(1)));
  CHECK(down.image() == Interval(rat(0), rat(3, 4)));

  CHECK_THROWS_AS(up.eval(rat(7, 8)), std::invalid_argument);
  CHECK_THROWS_AS(shift_plus_map(1), InvalidK);
}

TEST_CASE("empty generator list yields the three base maps") {
  MapFamily F = build_family(std::vector<Mat2>{}, 4);
  REQUIRE(F.maps.size() == 3);
  CHECK(F.maps[0].kind == MapKind::identity);
  CHECK(F.maps[1].kind == MapKind::shift_plus);
  CHECK(F.maps[2].kind == MapKind::shift_minus);
  CHECK(F.K == 4);
  CHECK(F.dropped == 0);
  CHECK(F.warnings.empty());
  CHECK_THROWS_AS(build_family(std::vector<Mat2>{}, 1), InvalidK);
}

TEST_CASE("quarter shear acts on the left three quarters") {
  Mat2 h(rat(1), rat(1, 4), rat(0), rat(1));
  MapFamily F = build_family({h}, 4);
  REQUIRE(F.maps.size() == 5);
  CHECK(F.dropped == 0);

  const PiecewiseMap& fwd = F.maps[3];
  CHECK(fwd.kind == MapKind::mobius);
  CHECK(fwd.g == h);
  CHECK(fwd.domain == Interval(rat(0), rat(3, 4)));
  CHECK(fwd.image() == Interval(rat(1, 4), rat(1)));

  const PiecewiseMap& bwd = F.maps[4];
  CHECK(bwd.g == mat_inv(h));
  CHECK(bwd.domain == Interval(rat(1, 4), rat(1)));
  CHECK(bwd.image() == Interval(rat(0), rat(3, 4)));
}

TEST_CASE("pole straddling action splits into two monotone pieces") {
  MapFamily F = build_family({straddle}, 4);
  REQUIRE(F.maps.size() == 7);
  CHECK(F.dropped == 0);

  const PiecewiseMap& left = F.maps[3];
  const PiecewiseMap& right = F.maps[4];
  CHECK(left.domain == Interval(rat(0), rat(5, 12)));
  CHECK(left.image() == Interval(rat(3, 8), rat(1)));
  CHECK(right.domain == Interval(rat(3, 4), rat(1)));
  CHECK(right.image() == Interval(rat(0), rat(1, 8)));

  // Strictly increasing on each side of the pole.
  CHECK(left.derivative(rat(0)) > rat(0));
  CHECK(left.derivative(rat(2, 5)) > rat(0));
  CHECK(right.derivative(rat(7, 8)) > rat(0));
  CHECK(left.eval(rat(1, 4)) == rat(1, 2));

  // The inverse direction splits as well: two more pieces.
  const PiecewiseMap& inv_a = F.maps[5];
  const PiecewiseMap& inv_b = F.maps[6];
  CHECK(inv_a.g == mat_inv(straddle));
  CHECK(inv_a.domain == Interval(rat(0), rat(1, 8)));
  CHECK(inv_a.image() == Interval(rat(3, 4), rat(1)));
  CHECK(inv_b.domain == Interval(rat(3, 8), rat(1)));
  CHECK(inv_b.image() == Interval(rat(0), rat(5, 12)));
}

TEST_CASE("maps that leave the unit interval are dropped with a warning") {
  Mat2 unit_shear(rat(1), rat(1), rat(0), rat(1));  // x + 1 touches [0,1] in one point
  MapFamily F = build_family({unit_shear}, 4);
  CHECK(F.maps.size() == 3);
  CHECK(F.dropped == 2);
  REQUIRE(F.warnings.size() == 2);
  CHECK(F.warnings[0].find("dropped") == 0);

  Mat2 far_shear(rat(1), rat(5), rat(0), rat(1));  // x + 5 misses entirely
  MapFamily G = build_family({far_shear}, 8);
  CHECK(G.maps.size() == 3);
  CHECK(G.dropped == 2);
}

TEST_CASE("family application is the exact union of piece images") {
  MapFamily F;
  F.K = 4;
  F.maps = {identity_map(), shift_plus_map(4)};
  IntervalSet A(Interval(rat(0), rat(1, 4)));
  IntervalSet image = apply_family(F, A);
  CHECK(image == IntervalSet(Interval(rat(0), rat(1, 2))));

  ExpansionResult r = expansion_ratio(F, A);
  CHECK(r.input == rat(1, 4));
  CHECK(r.output == rat(1, 2));
  CHECK(r.ratio == rat(2));
  CHECK(!r.exceeds_half);
}

TEST_CASE("expansion ratio preconditions and the exceeds half flag") {
  MapFamily F = build_family(std::vector<Mat2>{}, 4);
  CHECK_THROWS_AS(expansion_ratio(F, IntervalSet()), EmptyInput);
  CHECK_THROWS_AS(expansion_ratio(F, IntervalSet(Interval(rat(-1, 2), rat(1, 4)))),
                  std::invalid_argument);

  ExpansionResult r = expansion_ratio(F, IntervalSet(Interval(rat(0), rat(3, 4))));
  CHECK(r.exceeds_half);
  CHECK(r.output == rat(1));
  CHECK(r.ratio == rat(4, 3));
}

TEST_CASE("identity inclusion makes application monotone and non contracting") {
  MapFamily F = build_family({Mat2(rat(1), rat(1, 4), rat(0), rat(1))}, 4);
  IntervalSet A = set_of({{1, 3}, {10, 11}}, 16);
  IntervalSet B = set_of({{1, 3}, {10, 11}, {13, 14}}, 16);

  IntervalSet imA = apply_family(F, A);
  IntervalSet imB = apply_family(F, B);
  CHECK(subset(A, imA));
  CHECK(imA.measure() >= A.measure());
  CHECK(subset(imA, imB));
}

TEST_CASE("interval images have exactly the transported endpoints") {
  MapFamily F = build_family({Mat2(rat(1), rat(1, 4), rat(0), rat(1))}, 4);
  const PiecewiseMap& fwd = F.maps[3];
  IntervalSet J(Interval(rat(1, 8), rat(5, 8)));
  IntervalSet im = apply_map(fwd, J);
  CHECK(im == IntervalSet(Interval(rat(3, 8), rat(7, 8))));
  CHECK(im.measure() == fwd.eval(rat(5, 8)) - fwd.eval(rat(1, 8)));

  // Contracting piece of the pole fixture: still endpoint-exact.
  MapFamily G = build_family({straddle}, 4);
  IntervalSet Jm(Interval(rat(1, 8), rat(1, 4)));
  CHECK(apply_map(G.maps[3], Jm) == IntervalSet(Interval(rat(5, 12), rat(1, 2))));
}

TEST_CASE("deviation bounds are exact at endpoints and critical points") {
  MapFamily F;
  F.K = 4;
  PiecewiseMap m;
  m.kind = MapKind::mobius;
  m.g = straddle;
  m.domain = Interval(rat(0), rat(5, 12));
  F.maps = {m};

  // Drift minimum sits at the interior critical point x = 1/4 where the
  // derivative equals one; the maximum is at the right endpoint.
  auto [lo, hi] = drift_range(m);
  CHECK(lo == rat(1, 4));
  CHECK(hi == rat(7, 12));
  CHECK(m.derivative(rat(1, 4)) == rat(1));

  DeviationReport rep = sup_deviation(F);
  CHECK(rep.sup_dist == rat(7, 12));
  CHECK(rep.sup_slope == rat(8));  // psi'(5/12) = 9
  CHECK(rep.drift_min == rat(1, 4));
  CHECK(rep.drift_max == rat(7, 12));
  CHECK(rep.mixed_sign == 0);

  CHECK_THROWS_AS(sup_deviation(MapFamily{}), EmptyInput);
}

TEST_CASE("a synthetic near identity pair stays within ten epsilon") {
  // Commutator pair from the depth-50 shear search; both sit ~6e-4 from the
  // identity, so epsilon = 1/1000 is an honest radius for this family.
  Mat2 g1 = Mat2::parse("6247501/6250000 1/125000 1/125000 2501/2500");
  Mat2 g2 = Mat2::parse("6247501/6250000 -1/125000 -1/125000 2501/2500");
  Rational eps(1, 1000);
  MapFamily F = build_family({g1, g2}, default_K(eps), eps);
  CHECK(F.K == 4096);
  REQUIRE(F.maps.size() == 7);
  CHECK(F.dropped == 0);

  Rational floor_measure = rat(1) - rat(10) * eps;
  for (size_t i = 3; i < F.maps.size(); ++i)
    CHECK(F.maps[i].domain.length() >= floor_measure);

  DeviationReport rep = sup_deviation(F);
  CHECK(rep.sup_dist > rat(0));
  CHECK(rep.sup_dist < rat(10) * eps);
  CHECK(rep.sup_slope < rat(10) * eps);
  // Drift is genuinely two-sided: some direction pushes up near 0 and down
  // near 1, so the sign flips inside a single domain.
  CHECK(rep.drift_min < rat(0));
  CHECK(rep.drift_max > rat(0));
  CHECK(rep.mixed_sign >= 1);
}

TEST_CASE("generator set overload derives the grid from its epsilon") {
  GeneratorSet gs;
  gs.gens = {Mat2(rat(1), rat(1, 4), rat(0), rat(1))};
  gs.epsilon = rat(1, 4);
  MapFamily F = build_family(gs);
  CHECK(F.K == 16);
  CHECK(F.epsilon == rat(1, 4));
  CHECK(F.maps.size() == 5);

  MapFamily G = build_family(gs, 8);
  CHECK(G.K == 8);
}

TEST_CASE("cell masses drive the balance verdict") {
  IntervalSet first_cell(Interval(rat(0), rat(1, 4)));
  BalanceResult r = balance_test(first_cell, 4, rat(1, 2));
  CHECK(!r.balanced);
  CHECK(r.witness == 1);
  CHECK(r.total == rat(1, 4));
  REQUIRE(r.cell.size() == 4);
  CHECK(r.cell[0] == rat(1, 4));
  CHECK(r.cell[1] == rat(0));

  BalanceResult full = balance_test(IntervalSet::unit(), 4, rat(1, 100));
  CHECK(full.balanced);
  CHECK(full.witness == 0);
  CHECK(full.cell == std::vector<Rational>(4, rat(1, 4)));

  // Equal mass in every cell without filling any of them.
  IntervalSet striped = set_of({{1, 3}, {5, 7}, {9, 11}, {13, 15}}, 16);
  BalanceResult s = balance_test(striped, 4, rat(1, 100));
  CHECK(s.balanced);
  CHECK(s.total == rat(1, 2));
  CHECK(s.cell == std::vector<Rational>(4, rat(1, 8)));
}

TEST_CASE("an unbalanced witness certifies measured expansion") {
  MapFamily shifts = build_family(std::vector<Mat2>{}, 4);

  IntervalSet A(Interval(rat(0), rat(1, 4)));
  Rational sigma(1, 2);
  BalanceResult r = balance_test(A, 4, sigma);
  REQUIRE(!r.balanced);
  CHECK(expansion_ratio(shifts, A).ratio >= rat(1) + sigma);

  IntervalSet B(Interval(rat(1, 4), rat(1, 2)));
  Rational sigma2(1, 4);
  BalanceResult rb = balance_test(B, 4, sigma2);
  REQUIRE(!rb.balanced);
  CHECK(rb.witness == 1);
  CHECK(expansion_ratio(shifts, B).ratio == rat(3));
  CHECK(expansion_ratio(shifts, B).ratio >= rat(1) + sigma2);
}

TEST_CASE("random interval unions agree with a brute force balance scan") {
  const unsigned K = 16;
  const Rational sigma(1, 100);
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    CounterRng rng(seed);
    std::vector<Rational> xs;
    for (int i = 0; i < 40; ++i) xs.push_back(rat(static_cast<long long>(rng.next_below(65537)), 65536));
    std::sort(xs.begin(), xs.end());
    std::vector<Interval> parts;
    for (int i = 0; i < 40; i += 2) parts.emplace_back(xs[i], xs[i + 1]);
    IntervalSet A(std::move(parts));
    if (A.empty()) continue;

    // Independent oracle: clip each merged part against each cell by hand.
    std::vector<Rational> cell(K, rat(0));
    for (unsigned k = 0; k < K; ++k) {
      Rational lo = rat(k, K), hi = rat(k + 1, K);
      for (const Interval& p : A.parts()) {
        Rational a = max(p.lo, lo), b = min(p.hi, hi);
        if (a < b) cell[k] += b - a;
      }
    }
    Rational total(0);
    for (const Interval& p : A.parts()) total += p.length();
    unsigned expect_witness = 0;
    for (unsigned k = 1; k < K; ++k) {
      if (!(abs(cell[k] - cell[k - 1]) < sigma * total)) {
        expect_witness = k;
        break;
      }
    }

    BalanceResult r = balance_test(A, K, sigma);
    CHECK(r.total == total);
    CHECK(r.cell == cell);
    CHECK(r.balanced == (expect_witness == 0));
    CHECK(r.witness == expect_witness);
    Rational cell_sum(0);
    for (const Rational& c : r.cell) cell_sum += c;
    CHECK(cell_sum == total);
  }
}

TEST_CASE("preconditions reject degenerate balance queries") {
  IntervalSet A(Interval(rat(0), rat(1, 2)));
  CHECK_THROWS_AS(balance_test(A, 1, rat(1, 10)), InvalidK);
  CHECK_THROWS_AS(balance_test(IntervalSet(), 4, rat(1, 10)), EmptyInput);
  CHECK_THROWS_AS(balance_test(A, 4, rat(0)), std::invalid_argument);
  CHECK_THROWS_AS(balance_test(IntervalSet(Interval(rat(1, 2), rat(3, 2))), 4, rat(1, 10)),
                  std::invalid_argument);
}
