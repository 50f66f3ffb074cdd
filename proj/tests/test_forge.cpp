#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>


#include "monex/forge.hpp"

using namespace monex;

namespace {

Rational rat(long long n, long long d = 1) { return Rational(n, d); }

}  // namespace

TEST_CASE("sanov power seed is the classical integer shear pair") {
  for (unsigned q : {1u, 3u, 5u}) {
    SeedPair sp = seed_pair(SeedMode::sanov_power, q);
    CHECK(sp.g1 == Mat2(rat(1), rat(2), rat(0), rat(1)));
    CHECK(sp.g2 == Mat2(rat(1), rat(0), rat(2), rat(1)));
    CHECK(sp.r == 2 * q);
    CHECK(sp.cert_depth == 0);
    CHECK(sp.w1.length() == 2 * q);
    CHECK(sp.w2.length() == 2 * q);
  }
  // The pair itself certifies free to depth 10.
  SeedPair sp = seed_pair(SeedMode::sanov_power, 3);
  auto cert = freeness_certificate({sp.g1, sp.g2}, 10, 10'000'000);
  CHECK(cert.pass);
}

TEST_CASE("near-identity search picks the commutator pair at q = 50") {
  SeedPair sp = seed_pair(SeedMode::paper_search, 50, 8, 6, 10'000'000);
  // Frozen search result: conjugation-commutator words of length 4, an order
  // of magnitude closer to the identity than any single shear.
  CHECK(sp.g1 == Mat2::parse("6247501/6250000 1/125000 1/125000 2501/2500"));
  CHECK(sp.g2 == Mat2::parse("6247501/6250000 -1/125000 -1/125000 2501/2500"));
  CHECK(sp.w1 == Word::parse("+0,-1,-0,+1"));
  CHECK(sp.w2 == Word::parse("-0,+1,+0,-1"));
  CHECK(sp.r == 4);
  CHECK(sp.cert_depth == 8);
  Rational commutator_scale = Rational::parse("12500001/39062500000000");
  CHECK(dist_sq(sp.g1, Mat2::identity()) == commutator_scale);
  CHECK(dist_sq(sp.g2, Mat2::identity()) == commutator_scale);
  Rational shear_scale = Rational(1, 2500);
  CHECK(commutator_scale < shear_scale);
  auto cert = freeness_certificate({sp.g1, sp.g2}, 8, 10'000'000);
  CHECK(cert.pass);
  // Deterministic across execution modes.
  SeedPair sp_serial = seed_pair(SeedMode::paper_search, 50, 8, 6, 10'000'000, Exec::serial);
  CHECK(sp_serial.g1 == sp.g1);
  CHECK(sp_serial.g2 == sp.g2);
}

TEST_CASE("pipeline norm caps bound every word exactly") {
  ForgeConfig cfg;
  cfg.q = 3;
  cfg.ell = 5;
  ForgePipeline pipe = forge_prepare(cfg);
  CHECK(pipe.words.size() == pipe.mats.size());
  CHECK(pipe.stats.word_count == pipe.words.size());
  Rational seen_max(0);
  for (const Mat2& m : pipe.mats) {
    CHECK(norm_sq(m) <= pipe.stats.max_norm_sq);
    seen_max = max(seen_max, norm_sq(m));
  }
  CHECK(seen_max == pipe.stats.max_norm_sq);
  CHECK(pipe.stats.frobenius_bound * pipe.stats.frobenius_bound >= pipe.stats.max_norm_sq);
  CHECK(pipe.stats.operator_bound == rat_pow(rat(4, 3), 2UL * pipe.seed.r * cfg.ell));
  CHECK(pipe.stats.norm_cap == min(pipe.stats.frobenius_bound, pipe.stats.operator_bound));
  // Inverses share the entrywise norm, so the cap covers them too.
  for (const Mat2& m : pipe.mats) CHECK(norm_sq(mat_inv(m)) == norm_sq(m));
}

TEST_CASE("degenerate huge radius collects every word") {
  ForgeConfig cfg;
  cfg.q = 3;
  cfg.ell = 4;
  ForgePipeline pipe = forge_prepare(cfg);
  // Radius eps/N = 2N bounds the diameter of the word set, so the ball is
  // everything and the output is the whole translated word list sans identity.
  cfg.epsilon = Rational(2) * pipe.stats.norm_cap * pipe.stats.norm_cap;
  GeneratorSet gs = forge_from(pipe, cfg);
  CHECK(gs.gens.size() == pipe.words.size() - 1);
  CHECK(gs.stats.ball_size == pipe.words.size());
  CHECK(gs.Q == 1);
  PropertyReport rep = verify_properties(gs, 1, 2, 10'000'000);
  CHECK(rep.grid_pass);
  CHECK(rep.close_pass);
}

TEST_CASE("two-word pipeline is a singleton and cannot collide") {
  ForgeConfig cfg;
  cfg.q = 3;
  cfg.ell = 2;
  cfg.epsilon = rat(1, 100);
  CHECK(build_W(2).size() == 1);
  CHECK_THROWS_AS(forge(cfg), NoCollision);
}

TEST_CASE("smallest collision radius fixture at ell = 8") {
  ForgeConfig cfg;
  cfg.q = 3;
  cfg.ell = 8;
  ForgePipeline pipe = forge_prepare(cfg);
  Rational eps = forge_min_epsilon(cfg, 3);
  // Frozen ladder result. Integer entries space the words at least 1 apart,
  // so the collision radius is necessarily macroscopic here.
  CHECK(eps == Rational::parse("1169760531661/512"));
  CHECK(densest_cell_count(pipe, eps) >= 3);
  cfg.epsilon = eps;
  GeneratorSet gs = forge_from(pipe, cfg);
  CHECK(gs.gens.size() == 4);
  CHECK(gs.stats.ball_size == 5);
  CHECK(gs.Q == 1);
  CHECK(gs.epsilon_achieved == Rational::parse("1905180063552/1"));
  CHECK(gs.w0_word == Word::parse("+0,+0,+0,+0,+0,+1,+1,+1,+0,+0,+0,+0,+0,+1,+1,+1"));
  Rational eps_sq = eps * eps;
  for (const Mat2& g : gs.gens) CHECK(dist_sq(g, Mat2::identity()) <= eps_sq);

  PropertyReport rep = verify_properties(gs, 2, 6, 10'000'000);
  CHECK(rep.freeness.pass);
  CHECK(rep.grid_pass);
  CHECK(rep.close_pass);
  REQUIRE(rep.separation.size() == 2);
  for (const auto& row : rep.separation) {
    CHECK(row.pass);
    CHECK(row.bound == rat(1));
    CHECK(row.min_dist_sq >= rat(1));
  }
  CHECK(rep.separation[0].words == 9);
  CHECK(rep.separation[0].elements == 9);
  CHECK(rep.separation[0].min_dist_sq == Rational::parse("26093785152/1"));
  CHECK(rep.separation[1].words == 65);
  CHECK(rep.separation[1].elements == 65);
  CHECK(rep.separation[1].min_dist_sq == Rational::parse("2900955200/1"));
  CHECK(rep.all_pass());

  // Determinism: serial pipeline reproduces the parallel one bit for bit.
  GeneratorSet gs2 = forge_from(forge_prepare(cfg, Exec::serial), cfg, Exec::serial);
  CHECK(gs2.gens == gs.gens);
  CHECK(gs2.w0 == gs.w0);
  CHECK(gs2.Q == gs.Q);
  CHECK(gs2.epsilon_achieved == gs.epsilon_achieved);
}

TEST_CASE("denominator cap divides and bounds the forged grid") {
  ForgeConfig cfg;
  cfg.q = 3;
  cfg.ell = 4;
  ForgePipeline pipe = forge_prepare(cfg);
  cfg.epsilon = Rational(2) * pipe.stats.norm_cap * pipe.stats.norm_cap;
  GeneratorSet gs = forge_from(pipe, cfg);
  CHECK(gs.stats.denominator_cap == int_pow(mpz_class(3), 4UL * gs.seed.r * cfg.ell));
  CHECK(gs.stats.denominator_cap_ok);
}

TEST_CASE("property checks fail on deliberately corrupted sets") {
  // Hand-built set on the quarter grid: one shear at distance 1/4.
  GeneratorSet gs;
  gs.gens = {Mat2(rat(1), rat(1, 4), rat(0), rat(1))};
  gs.Q = 4;
  gs.epsilon = rat(1, 3);
  gs.epsilon_achieved = rat(1, 16);
  PropertyReport good = verify_properties(gs, 1, 4, 1'000'000);
  CHECK(good.grid_pass);
  CHECK(good.close_pass);
  CHECK(good.freeness.pass);

  // Perturbing an entry by 1/(2Q) leaves the grid: denominator 8 does not divide 4.
  GeneratorSet off_grid = gs;
  off_grid.gens[0] = Mat2::unchecked(rat(1), rat(1, 4) + rat(1, 8), rat(0), rat(1));
  PropertyReport bad_grid = verify_properties(off_grid, 1, 4, 1'000'000);
  CHECK(!bad_grid.grid_pass);
  CHECK(bad_grid.grid_offender == 0);

  // Perturbing by 1/Q stays on the grid but breaks identity closeness:
  // dist_sq = 1/4 > (1/3)^2.
  GeneratorSet far = gs;
  far.gens[0] = Mat2::unchecked(rat(1), rat(1, 4) + rat(1, 4), rat(0), rat(1));
  PropertyReport bad_close = verify_properties(far, 1, 4, 1'000'000);
  CHECK(bad_close.grid_pass);
  CHECK(!bad_close.close_pass);
  CHECK(bad_close.close_offender == 0);
  CHECK(!bad_close.all_pass());
}

TEST_CASE("word ball separation on the quarter shear grid") {
  // Distinct matrices on the (1/Q)-grid differ by at least 1/Q in some entry.
  std::vector<Mat2> gens = {Mat2(rat(1), rat(1, 4), rat(0), rat(1)),
                            Mat2(rat(1), rat(0), rat(1, 4), rat(1))};
  BallElements ball = word_ball(gens, 1, 1'000'000);
  CHECK(ball.words == 5);  // empty word plus four letters
  CHECK(ball.elements.size() == 5);
  MinPairResult mp = min_pairwise_dist_sq(ball.elements);
  CHECK(mp.dist_sq == rat(1, 16));  // shear vs identity, exactly (1/Q)^2
  GeneratorSet gs;
  gs.gens = gens;
  gs.Q = 4;
  gs.epsilon = rat(1);
  PropertyReport rep = verify_properties(gs, 1, 4, 1'000'000);
  REQUIRE(rep.separation.size() == 1);
  CHECK(rep.separation[0].pass);
  CHECK(rep.separation[0].bound == rat(1, 16));
  CHECK(rep.separation[0].min_dist_sq == rat(1, 16));
  CHECK(rep.separation[0].exponent == doctest::Approx(1.0));
}

TEST_CASE("minimum pair scan matches a direct quadratic oracle") {
  std::vector<Mat2> mats;
  for (long long t = -3; t <= 3; ++t) mats.push_back(Mat2(rat(1), rat(t, 7), rat(0), rat(1)));
  mats.push_back(Mat2(rat(1), rat(0), rat(2, 7), rat(1)));
  Rational best(0);
  size_t bi = 0, bj = 0;
  bool have = false;
  for (size_t i = 0; i < mats.size(); ++i)
    for (size_t j = i + 1; j < mats.size(); ++j) {
      Rational d = dist_sq(mats[i], mats[j]);
      if (!have || d < best) {
        best = d;
        bi = i;
        bj = j;
        have = true;
      }
    }
  for (Exec e : {Exec::serial, Exec::parallel}) {
    MinPairResult mp = min_pairwise_dist_sq(mats, e);
    CHECK(mp.dist_sq == best);
    CHECK(mp.i == bi);
    CHECK(mp.j == bj);
  }
}

TEST_CASE("forged free sets stay free as a set") {
  ForgeConfig cfg;
  cfg.q = 3;
  cfg.ell = 6;
  ForgePipeline pipe = forge_prepare(cfg);
  cfg.epsilon = Rational(2) * pipe.stats.norm_cap * pipe.stats.norm_cap;
  GeneratorSet gs = forge_from(pipe, cfg);
  // Shadow of seed freeness: depth-2 scan over the whole translated word set.
  auto cert = freeness_certificate(gs.gens, 2, 10'000'000);
  CHECK(cert.pass);
}

TEST_CASE("forge budget gate fires before enumeration") {
  ForgeConfig cfg;
  cfg.ell = 30;
  cfg.word_budget = 1'000'000;
  CHECK_THROWS_AS(forge_prepare(cfg), BudgetExceeded);
}

TEST_CASE("config validation rejects degenerate parameters") {
  ForgeConfig cfg;
  cfg.ell = 1;
  CHECK_THROWS_AS(forge(cfg), std::invalid_argument);
  cfg.ell = 4;
  cfg.epsilon = rat(0);
  CHECK_THROWS_AS(forge(cfg), std::invalid_argument);
  cfg.epsilon = rat(-1, 2);
  CHECK_THROWS_AS(forge(cfg), std::invalid_argument);
}
