#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "monex/exec.hpp"
#include "monex/family.hpp"
#include "monex/graph.hpp"

namespace monex {

struct ExpansionReport {
  uint32_t n = 0;
  std::string method;               // "exhaustive"
  Rational min_ratio;               // exact
  std::vector<uint32_t> argmin_set; // witness A attaining the minimum
  uint64_t subsets = 0;             // how many sets were enumerated
};

// Minimum of |N(A)|/|A| over nonempty A in the left class with 2|A| <= n,
// by full enumeration. Exact; the witness is the smallest qualifying subset
// in mask order. cap guards the 2^n blowup.
ExpansionReport vertex_expansion_exact(const LayeredBipartiteGraph& g, uint32_t cap = 24,
                                       Exec exec = Exec::parallel);

struct SpectralReport {
  uint32_t left = 0, right = 0;  // sizes after isolated-vertex removal
  double sigma2 = 0.0;
  double tolerance = 0.0;
  double residual = 0.0;  // eigen-residual of the returned pair
  uint32_t iterations = 0;
  uint64_t seed = 0;
  std::string method;  // "spectral"
};

// Second singular value of the degree-normalized biadjacency operator.
// The top pair is known in closed form (sqrt-degree vectors, sigma1 = 1) and
// is deflated exactly; power iteration runs on the complement. Floating
// point by design: this is a measurement, not a certificate.
SpectralReport spectral_gap_report(const LayeredBipartiteGraph& g, double tol,
                                   uint64_t seed = 0x5eed);
double spectral_gap(const LayeredBipartiteGraph& g, double tol);

// Dense Jacobi eigensolver on the same normalized operator, used as an
// independent oracle for small n. Deterministic.
double sigma2_dense_oracle(const LayeredBipartiteGraph& g);

// Vertex-expansion lower bound implied by sigma2 at worst-case density 1/2.
// Valid for biregular graphs; reported as a bound, never a measurement.
double tanner_bound(double sigma2);

struct CorpusReport {
  size_t count = 0;    // sets evaluated
  size_t skipped = 0;  // sets violating the measure precondition
  Rational min_ratio;
  size_t argmin_index = 0;  // index into the evaluated corpus
  bool all_above_one = false;
  std::string method;  // "continuous"
};

// Exact minimum family-expansion ratio over a corpus of interval sets.
// Sets with measure > 1/2 or measure 0 are skipped and counted.
CorpusReport continuous_corpus_test(const MapFamily& fam,
                                    const std::vector<IntervalSet>& corpus);

// Corpus generators. All exact-rational and deterministic in the seed.
std::vector<IntervalSet> corpus_random(uint32_t count, uint32_t parts, uint64_t seed);
std::vector<IntervalSet> corpus_cantor(uint32_t depth);    // middle-half iterates
std::vector<IntervalSet> corpus_cells(uint32_t K);         // the K grid cells
std::vector<IntervalSet> corpus_preimage(const MapFamily& fam, uint32_t per_map,
                                         uint64_t seed);

// Fixed 200-set corpus used by the command-line `expand` default and the
// acceptance run: Cantor iterates (depth 12), the K grid cells, two random
// preimages per family map, then random 4-part sets filling up to exactly
// 200. Deterministic; truncates in that order if the structured part already
// exceeds 200.
std::vector<IntervalSet> builtin_corpus(const MapFamily& fam);

struct DimensionReport {
  uint32_t n = 0, k = 0, D = 0, trials = 0;
  uint16_t p = 2;
  uint64_t seed = 0;
  Rational min_growth;
  double mean_growth = 0.0;
  uint32_t resamples = 0;             // rank-deficient samples thrown away
  std::vector<uint32_t> span_dims;    // one result per trial
  std::string method;                 // "dimension"
};

// For each trial draws a uniform D-dimensional subspace V of F_p^n (random
// matrix, resample until full rank) and measures dim span of the union of
// M_i(V) by elimination. mats are n*n row-major 0-1 matrices.
DimensionReport subspace_dimension_test(const std::vector<std::vector<uint8_t>>& mats,
                                        uint16_t p, uint32_t D, uint32_t trials,
                                        uint64_t seed, Exec exec = Exec::parallel);

}  // namespace monex
