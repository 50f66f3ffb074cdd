#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "monex/errors.hpp"
#include "monex/graph.hpp"
#include "monex/rng.hpp"

using namespace monex;

namespace {

Rational rat(long long n, long long d = 1) { return Rational(n, d); }

using Edge = std::pair<uint32_t, uint32_t>;

MapFamily single(const PiecewiseMap& m) {
  MapFamily F;
  F.K = 4;
  F.maps = {m};
  return F;
}

// Independent edge oracle: positive-measure overlap computed via interval
// clipping rather than cell index arithmetic.
std::vector<Edge> oracle_edges(const PiecewiseMap& m, uint32_t n) {
  std::vector<Edge> out;
  for (uint32_t i = 0; i < n; ++i) {
    Interval cell(rat(i, n), rat(i + 1, n));
    IntervalSet piece = IntervalSet(cell).intersect(m.domain);
    if (piece.empty()) continue;
    Rational u = m.eval(piece.parts()[0].lo), v = m.eval(piece.parts()[0].hi);
    for (uint32_t j = 0; j < n; ++j) {
      if (max(u, rat(j, n)) < min(v, rat(j + 1, n))) out.emplace_back(i, j);
    }
  }
  return out;
}

const Mat2 straddle(rat(1), rat(-3, 4), rat(4), rat(-2));
const Mat2 quarter_shear(rat(1), rat(1, 4), rat(0), rat(1));

}  // namespace

TEST_CASE("identity family discretizes to the full identity matching") {
  LayeredBipartiteGraph g = discretize(single(identity_map()), 6);
  REQUIRE(g.layers.size() == 1);
  CHECK(g.provenance[0] == LayerProvenance{0, 0});
  CHECK(g.layers[0].defined() == 6);
  for (uint32_t i = 0; i < 6; ++i) CHECK(g.layers[0].targets[i] == i);
  CHECK(g.edge_count() == 6);
}

TEST_CASE("quarter shift on eight cells lands two cells to the right") {
  LayeredBipartiteGraph g = discretize(single(shift_plus_map(4)), 8);
  REQUIRE(g.layers.size() == 1);
  const PartialMonotoneMap& L = g.layers[0];
  CHECK(L.defined() == 6);
  for (uint32_t i = 0; i < 6; ++i) CHECK(L.targets[i] == i + 2);
  CHECK(!L.targets[6]);
  CHECK(!L.targets[7]);
}

TEST_CASE("half cell shear overlaps two cells and splits into two ranks") {
  Mat2 g16(rat(1), rat(1, 16), rat(0), rat(1));
  MapFamily built = build_family({g16}, 4);
  LayeredBipartiteGraph g = discretize(single(built.maps[3]), 8);
  REQUIRE(g.layers.size() == 2);
  CHECK(g.provenance[0] == LayerProvenance{0, 0});
  CHECK(g.provenance[1] == LayerProvenance{0, 1});

  // Rank 0 keeps every cell in place, rank 1 spills into the next cell.
  CHECK(g.layers[0].defined() == 8);
  for (uint32_t i = 0; i < 8; ++i) CHECK(g.layers[0].targets[i] == i);
  CHECK(g.layers[1].defined() == 7);
  for (uint32_t i = 0; i < 7; ++i) CHECK(g.layers[1].targets[i] == i + 1);
  CHECK(g.layers_per_psi() == std::vector<uint32_t>{2});
}

TEST_CASE("rank decomposition matches the worked example") {
  auto layers = monotone_decompose(4, {{1, 1}, {1, 2}, {2, 2}, {2, 3}});
  REQUIRE(layers.size() == 2);
  CHECK(layers[0].targets[1] == 1);
  CHECK(layers[0].targets[2] == 2);
  CHECK(layers[1].targets[1] == 2);
  CHECK(layers[1].targets[2] == 3);
  CHECK(layers[0].defined() == 2);
  CHECK(layers[1].defined() == 2);

  auto identity = monotone_decompose(5, {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}});
  REQUIRE(identity.size() == 1);
  CHECK(identity[0].defined() == 5);
}

TEST_CASE("crossing pairs are rejected") {
  CHECK_THROWS_AS(monotone_decompose(4, {{1, 2}, {2, 1}}), NotMonotoneRelation);
  // Crossing hidden in the second rank.
  CHECK_THROWS_AS(monotone_decompose(6, {{0, 1}, {0, 5}, {1, 2}, {1, 3}}), NotMonotoneRelation);
  CHECK_THROWS_AS(monotone_decompose(2, {{0, 5}}), std::invalid_argument);
}

TEST_CASE("ties split into separate strictly increasing layers") {
  auto two = monotone_decompose(4, {{0, 0}, {1, 0}});
  REQUIRE(two.size() == 2);
  CHECK(two[0].targets[0] == 0);
  CHECK(two[1].targets[1] == 0);

  // Four cells contracted onto one target: four singleton layers.
  auto four = monotone_decompose(4, {{0, 0}, {1, 0}, {2, 0}, {3, 0}});
  REQUIRE(four.size() == 4);
  std::set<Edge> covered;
  for (const auto& layer : four) {
    CHECK(layer.strictly_increasing());
    for (uint32_t i = 0; i < 4; ++i)
      if (layer.targets[i]) covered.insert({i, *layer.targets[i]});
  }
  CHECK(covered == std::set<Edge>{{0, 0}, {1, 0}, {2, 0}, {3, 0}});
}

TEST_CASE("dimension matrices are partial permutations that sum to the biadjacency") {
  LayeredBipartiteGraph id3 = discretize(single(identity_map()), 3);
  auto mats = dimension_matrices(id3);
  REQUIRE(mats.size() == 1);
  CHECK(mats[0] == std::vector<uint8_t>{1, 0, 0, 0, 1, 0, 0, 0, 1});

  Mat2 g16(rat(1), rat(1, 16), rat(0), rat(1));
  MapFamily built = build_family({g16}, 4);
  LayeredBipartiteGraph g = discretize(single(built.maps[3]), 8);
  auto layered = dimension_matrices(g);
  REQUIRE(layered.size() == 2);
  std::vector<int> sum(64, 0);
  for (const auto& M : layered) {
    for (uint32_t j = 0; j < 8; ++j) {
      int row = 0, col = 0;
      for (uint32_t i = 0; i < 8; ++i) {
        row += M[j * 8 + i];
        col += M[i * 8 + j];
      }
      CHECK(row <= 1);
      CHECK(col <= 1);
    }
    for (size_t e = 0; e < 64; ++e) sum[e] += M[e];
  }
  auto edges = g.unique_edges();
  CHECK(edges.size() == 15);
  for (auto [i, j] : edges) CHECK(sum[static_cast<size_t>(j) * 8 + i] == 1);
  int total = 0;
  for (int v : sum) total += v;
  CHECK(total == 15);
}

TEST_CASE("strictness and coverage hold across a mixed family") {
  MapFamily F = build_family({straddle, quarter_shear}, 4);
  LayeredBipartiteGraph g = discretize(F, 16);

  for (const PartialMonotoneMap& layer : g.layers) CHECK(layer.strictly_increasing());

  // Per-map coverage against the interval-clipping oracle.
  for (uint32_t m = 0; m < F.maps.size(); ++m) {
    std::vector<Edge> expect = oracle_edges(F.maps[m], 16);
    std::sort(expect.begin(), expect.end());
    std::vector<Edge> got;
    for (size_t l = 0; l < g.layers.size(); ++l) {
      if (g.provenance[l].psi != m) continue;
      for (uint32_t i = 0; i < 16; ++i)
        if (g.layers[l].targets[i]) got.emplace_back(i, *g.layers[l].targets[i]);
    }
    std::sort(got.begin(), got.end());
    CHECK(got == expect);
  }
}

TEST_CASE("left degrees respect the derivative bound") {
  MapFamily F = build_family({straddle, quarter_shear}, 4);
  LayeredBipartiteGraph g = discretize(F, 16);

  Rational bound(0);
  for (const PiecewiseMap& m : F.maps) {
    Rational sup_slope = max(m.derivative(m.domain.lo), m.derivative(m.domain.hi));
    mpz_class c;
    mpz_cdiv_q(c.get_mpz_t(), sup_slope.numerator().get_mpz_t(),
               sup_slope.denominator().get_mpz_t());
    bound += Rational(1) + Rational(c);
  }
  auto degs = g.left_degree();
  uint32_t max_deg = *std::max_element(degs.begin(), degs.end());
  CHECK(Rational(static_cast<long>(max_deg)) <= bound);
}

TEST_CASE("continuous and discrete neighborhoods agree on random cell sets") {
  const uint32_t n = 16;
  MapFamily F = build_family({straddle, quarter_shear}, 4);
  LayeredBipartiteGraph g = discretize(F, n);
  auto edges = g.unique_edges();

  for (uint64_t seed = 1; seed <= 10; ++seed) {
    CounterRng rng(seed);
    std::set<uint32_t> S;
    size_t want = 1 + rng.next_below(8);
    while (S.size() < want) S.insert(static_cast<uint32_t>(rng.next_below(n)));

    std::vector<Interval> cells;
    for (uint32_t i : S) cells.emplace_back(rat(i, n), rat(i + 1, n));
    IntervalSet A(std::move(cells));
    IntervalSet B = apply_family(F, A);

    std::set<uint32_t> discrete;
    for (auto [i, j] : edges)
      if (S.count(i)) discrete.insert(j);

    std::set<uint32_t> continuous;
    for (uint32_t j = 0; j < n; ++j) {
      if (!(B.intersect(Interval(rat(j, n), rat(j + 1, n))).measure() == rat(0)))
        continuous.insert(j);
    }
    CHECK(discrete == continuous);
  }
}

TEST_CASE("exports are deterministic and round trip") {
  MapFamily empty;
  empty.K = 4;
  LayeredBipartiteGraph none = discretize(empty, 2);
  CHECK(export_graph(none, "edge-csv") == "layer,i,j\n");

  LayeredBipartiteGraph id3 = discretize(single(identity_map()), 3);
  CHECK(export_graph(id3, "edge-csv") == "layer,i,j\n0,0,0\n0,1,1\n0,2,2\n");

  LayeredBipartiteGraph id2 = discretize(single(identity_map()), 2);
  CHECK(export_graph(id2, "matrix-csv") == "# layer 0 psi 0 rank 0\n1,0\n0,1\n");

  std::string dot = export_graph(id3, "dot");
  CHECK(dot.find("digraph") == 0);
  CHECK(dot.find("L1 -> R1 [label=\"0\"];") != std::string::npos);

  MapFamily F = build_family({straddle, quarter_shear}, 4);
  LayeredBipartiteGraph g = discretize(F, 12);
  std::string json = export_graph(g, "layered-json");
  LayeredBipartiteGraph back = import_layered_json(json);
  CHECK(back == g);
  CHECK(export_graph(back, "layered-json") == json);

  CHECK_THROWS_AS(export_graph(id3, "toml"), UnknownFormat);
  CHECK_THROWS_AS(import_layered_json("not json"), ParseError);
  CHECK_THROWS_AS(import_layered_json("{\"n\":2}"), ParseError);
  CHECK_THROWS_AS(import_layered_json(
                      "{\"layers\":[[1,0]],\"n\":2,\"provenance\":[[0,0]]}"),
                  NotMonotoneRelation);
}

TEST_CASE("discretize rejects tiny grids") {
  CHECK_THROWS_AS(discretize(single(identity_map()), 1), InvalidN);
  CHECK_THROWS_AS(discretize(single(identity_map()), 0), InvalidN);
}

TEST_CASE("parallel and serial discretization agree") {
  MapFamily F = build_family({straddle, quarter_shear}, 8);
  LayeredBipartiteGraph a = discretize(F, 32, Exec::parallel);
  LayeredBipartiteGraph b = discretize(F, 32, Exec::serial);
  CHECK(a == b);
}
