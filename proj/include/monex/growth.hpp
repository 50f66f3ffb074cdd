#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "monex/exec.hpp"
#include "monex/forge.hpp"
#include "monex/mat2.hpp"

namespace monex {

// Double-precision unimodular matrix for scale-delta measurements. Exactness
// lives upstream in Mat2; at measurement scales delta >= 1e-12 the 1e-16
// arithmetic error of doubles is immaterial, and the type boundary keeps the
// exact and measured worlds from mixing silently.
struct FloatMat {
  double a = 1, b = 0, c = 0, d = 1;
  bool sampled = false;  // true when produced numerically rather than by
                         // exact descent from a Mat2

  double det() const { return a * d - b * c; }
};

// Validating constructors: |det - 1| <= 1e-9 or std::invalid_argument.
// Products and inverses of constructed matrices are deliberately unchecked:
// determinant drift along long products is part of what gets measured.
FloatMat float_mat(double a, double b, double c, double d, bool sampled = true);
FloatMat float_of(const Mat2& g);
std::vector<FloatMat> float_of_all(const std::vector<Mat2>& gs);

FloatMat fm_mul(const FloatMat& x, const FloatMat& y);
FloatMat fm_inv(const FloatMat& g);  // algebraic inverse of a det-1 matrix
double fm_dist(const FloatMat& x, const FloatMat& y);  // L2 over the 4 entries

// Cubical cell index map at side length delta on the matrix entries; any two
// points in one cell are at most 2*delta apart in the entrywise L2 metric.
struct DeltaGrid {
  double delta = 1;
  std::array<int64_t, 4> cell_of(const FloatMat& m) const;
};

struct CoverSandwich {
  uint32_t lower = 0;  // greedy 2delta-separated subset size
  uint32_t upper = 0;  // greedy delta-net size
};

// Two-sided bracket on the delta-ball covering number N_delta(S):
// lower <= N_delta(S) <= upper, and upper <= N_{delta/2}(S). Deterministic in
// the input order. Empty input gives (0, 0).
CoverSandwich covering_number(const std::vector<FloatMat>& S, double delta);

// Minimal number of delta-balls centered at points of S that cover S, by
// branch-and-bound set cover. TooLarge above cap. Used as the exact oracle
// for sandwich checks on small instances.
uint32_t covering_exact(const std::vector<FloatMat>& S, double delta, uint32_t cap = 36);

struct SeparationPoint {
  double rho = 0;
  uint32_t separated = 0;  // greedy 2*rho-separated subset size
};

struct ProductGrowthReport {
  CoverSandwich a_cover;    // sandwich for the symmetrized input set
  CoverSandwich aaa_cover;  // sandwich for the triple products (exact path only)
  double n_a = 0;           // point estimates feeding the exponent
  double n_aaa = 0;
  double exponent = 0;  // log(n_aaa / n_a) / log(1/delta)
  bool sampled = false;
  uint64_t products = 0;  // triples evaluated
  double delta = 0;
  uint64_t seed = 0;
  uint32_t set_size = 0;  // |A union A^-1|
  std::vector<SeparationPoint> separation;  // rho ladder on the input set
  std::string method;                       // "exact-sandwich" | "sampled-chao1"
};

// Covering growth from A to AAA after symmetrizing A := A union A^-1.
// When |A|^3 <= sample_budget every triple product is streamed through the
// same greedy nets as A (like-for-like estimates); otherwise sample_budget
// uniform triples are binned into delta-cells and the occupied-cell count is
// bias-corrected for unseen cells (Chao estimator). Deterministic in seed;
// sampling shards are fixed, so thread count does not affect results.
ProductGrowthReport product_growth(const std::vector<FloatMat>& A, double delta,
                                   uint64_t sample_budget = 4'000'000,
                                   uint64_t seed = 0x6006, Exec exec = Exec::parallel);

// Sup-density estimate of the length-ell uniform-letter product distribution
// over gens and their inverses, smoothed to scale delta: max cell count
// divided by samples * delta^3 (delta^3 is the reference cell volume on the
// 3-dimensional det-1 surface). The absolute value carries a fixed cell/ball
// shape constant, so only ratios across ell are meaningful; those ratios are
// the measured flattening. Deterministic in seed, thread-count independent.
double flatness(const std::vector<Mat2>& gens, uint32_t ell, double delta,
                uint32_t samples, uint64_t seed, Exec exec = Exec::parallel);
double flatness(const GeneratorSet& gs, uint32_t ell, double delta, uint32_t samples,
                uint64_t seed, Exec exec = Exec::parallel);

struct TraceGrowthReport {
  std::array<uint32_t, 4> trace_counts{};  // occupied delta-cells per trace line
  CoverSandwich a_cover;                   // sandwich for A itself
  uint32_t best_mask = 0;  // bitmask of the three probes with the largest counts
  double product3 = 0;     // product of those three counts
  double margin = 0;       // product3 / a_cover.upper
  double delta = 0;
};

// Projects A onto the four trace lines x -> trace(probe^-1 x) (computed as
// the inner product with the flipped probe) and compares the best three-way
// product of line covering counts against the covering of A. The probes must
// be linearly independent as vectors in R^4, checked exactly before any
// float descends.
TraceGrowthReport trace_set_growth(const std::vector<FloatMat>& A,
                                   const std::array<Mat2, 4>& probes, double delta);

// Exact identity: trace(diag(x,1/x) g diag(y,1/y) g) equals
// a^2 xy + d^2/(xy) + bc (x/y + y/x). Always true; exists as a regression
// tripwire for the matrix code. Throws std::invalid_argument when x or y is 0.
bool trace_identity_check(const Rational& x, const Rational& y, const Mat2& g);

// Scalar amplification: forms 4-fold products S4 of the symmetrized S, then
// D = { xy + gamma/(xy) + lambda (x/y + y/x) : x, y in S4 }, and returns the
// occupied delta-cell count of D. Stages above the budget are uniformly
// sampled (deterministic in seed). S must lie in [1/2, 2]; gamma > 0.
uint32_t amplification_set(const std::vector<double>& S, double gamma, double lambda,
                           double delta, uint64_t budget = 2'000'000,
                           uint64_t seed = 0xa3f1);

// Exact occupied-cell counts of A+A and A*A on the length-delta line grid.
// A must lie in [-1, 1] and be pairwise delta-separated.
std::pair<uint32_t, uint32_t> sum_product(const std::vector<double>& A, double delta);

// Occupied cells of the length-delta grid on the line: the number of distinct
// floor(v/delta) values. Exact for finite sets; within a factor two of the
// radius-delta ball covering number.
uint32_t grid_cover_1d(const std::vector<double>& values, double delta);

}  // namespace monex
