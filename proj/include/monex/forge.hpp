#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "monex/exec.hpp"
#include "monex/mat2.hpp"
#include "monex/words.hpp"

namespace monex {

// How the free seed pair is produced. sanov_power raises the base shears to
// integer shears with off-diagonal 2 (free by classical ping-pong);
// near-identity search enumerates short products of the base shears and picks
// the pair closest to the identity that passes an exhaustive freeness scan.
enum class SeedMode { sanov_power, paper_search };

std::string seed_mode_name(SeedMode m);
SeedMode seed_mode_parse(const std::string& text);

struct SeedPair {
  Mat2 g1, g2;
  unsigned r = 1;          // base-shear letters per seed generator
  unsigned cert_depth = 0; // exhaustive scan depth backing the pair; 0 = ping-pong
  Word w1, w2;             // the seed generators as words in the base shears
};

struct ForgeConfig {
  unsigned q = 3;                   // base shear denominator
  unsigned ell = 8;                 // admissible word half-length
  Rational epsilon = Rational(1);   // target identity-closeness radius
  SeedMode seed_mode = SeedMode::sanov_power;
  unsigned freeness_depth = 10;     // scan depth for certificates
  uint64_t word_budget = 10'000'000;
  unsigned search_len = 6;          // near-identity search: max seed word length
};

// Deterministic seed selection. paper_search scores candidate pairs by the
// larger squared distance to the identity and returns the first, in
// (score, enumeration order), that passes the freeness scan at freeness_depth.
SeedPair seed_pair(SeedMode mode, unsigned q, unsigned freeness_depth = 8,
                   unsigned search_len = 6, uint64_t budget = 10'000'000,
                   Exec exec = Exec::parallel);

struct ForgeStats {
  size_t word_count = 0;      // admissible doubled words
  Rational max_norm_sq;       // exact max squared entrywise-L2 norm over the words
  Rational frobenius_bound;   // dyadic upper bound on its square root
  Rational operator_bound;    // (1+1/q)^(2 r ell), valid for the words and inverses
  Rational norm_cap;          // min of the two bounds; the N in the ball radius eps/N
  Rational cell_side;         // eps / (2N): 4-cube cells of diameter <= eps/N
  size_t densest_cell = 0;    // words in the selected cell
  size_t ball_size = 0;       // words within eps/N of the center, center included
  Rational q_rule_value;      // (1+1/q)^(12 r), reported against the 1.01 rule
  bool q_rule_pass = false;
  mpz_class denominator_cap{1};  // q^(4 r ell); Q must divide it
  bool denominator_cap_ok = false;
};

struct SeparationRow {
  unsigned k = 0;
  size_t words = 0;      // reduced words of length <= k, empty word included
  size_t elements = 0;   // distinct matrices among their values
  Rational min_dist_sq;  // over distinct element pairs
  Rational bound;        // (1/Q)^(2k)
  bool pass = false;     // min_dist_sq >= bound
  double exponent = 0;   // e with min dist = Q^-e; 0 when Q = 1
};

// Exact certification of a forged set: freeness scan, denominator grid
// membership, identity closeness, and pairwise word-ball separation. The two
// exponents are measurements, not assertions.
struct PropertyReport {
  mpz_class Q{1};
  size_t size = 0;
  double exp_q_eps = 0;   // log Q / log(1/eps)
  double exp_q_size = 0;  // log Q / log |gens|
  FreenessResult freeness;
  unsigned freeness_depth = 0;
  bool grid_pass = false;   // every entry times Q is an integer
  int grid_offender = -1;
  bool close_pass = false;  // dist_sq(g, 1) <= eps^2 for every g
  int close_offender = -1;
  std::vector<SeparationRow> separation;

  bool all_pass() const;
};

struct GeneratorSet {
  std::vector<Mat2> gens;
  mpz_class Q{1};             // least common denominator of all entries
  Rational epsilon;           // configured target radius
  Rational epsilon_achieved;  // max over gens of dist_sq(g, 1)
  Mat2 w0;
  Word w0_word;               // center word over the seed pair alphabet
  SeedPair seed;
  ForgeConfig config;
  ForgeStats stats;
  std::optional<PropertyReport> certificates;
};

// Seed selection, word enumeration and evaluation, norm caps. Everything that
// does not depend on epsilon, so radius searches can reuse it.
struct ForgePipeline {
  SeedPair seed;
  std::vector<Word> words;
  std::vector<Mat2> mats;
  ForgeStats stats;
};

ForgePipeline forge_prepare(const ForgeConfig& cfg, Exec exec = Exec::parallel);

// Occupancy of the fullest grid cell when cells have side epsilon / (2N).
size_t densest_cell_count(const ForgePipeline& pipe, const Rational& epsilon);

// Collision step: pick the fullest cell, take its least word as center w0,
// gather the exact ball around it, and map members through w0^-1. Each output
// is re-verified exactly: dist_sq(1,g) <= N^2 dist_sq(w0, w0 g) <= eps^2.
GeneratorSet forge_from(const ForgePipeline& pipe, const ForgeConfig& cfg,
                        Exec exec = Exec::parallel);

GeneratorSet forge(const ForgeConfig& cfg, Exec exec = Exec::parallel);

// Smallest epsilon on a deterministic halving/doubling ladder, sharpened by
// `rounds` bisection steps, whose fullest cell still holds >= min_cell words.
Rational forge_min_epsilon(const ForgeConfig& cfg, size_t min_cell = 3,
                           Exec exec = Exec::parallel, unsigned rounds = 40);

PropertyReport verify_properties(const GeneratorSet& gs, unsigned k_max,
                                 unsigned freeness_depth, uint64_t budget,
                                 Exec exec = Exec::parallel);

// Distinct matrices reachable by reduced words of length <= k over the set and
// its inverses; identity included. Sorted entrywise for determinism.
struct BallElements {
  std::vector<Mat2> elements;
  size_t words = 0;
};
BallElements word_ball(const std::vector<Mat2>& gens, unsigned k, uint64_t budget);

struct MinPairResult {
  Rational dist_sq;
  size_t i = 0, j = 0;
};

// Minimum squared distance over unordered pairs; ties resolve to the smallest
// index pair, so serial and parallel runs agree bit for bit. Needs >= 2 inputs.
MinPairResult min_pairwise_dist_sq(const std::vector<Mat2>& mats, Exec exec = Exec::parallel);

}  // namespace monex
