#include "monex/growth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "monex/errors.hpp"
#include "monex/rng.hpp"

namespace monex {

namespace {

constexpr double kDetTol = 1e-9;

double fm_dist2(const FloatMat& x, const FloatMat& y) {
  double da = x.a - y.a, db = x.b - y.b, dc = x.c - y.c, dd = x.d - y.d;
  return da * da + db * db + dc * dc + dd * dd;
}

struct ArrayHash {
  size_t operator()(const std::array<int64_t, 4>& c) const {
    uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (int64_t v : c) {
      h ^= static_cast<uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0xbf58476d1ce4e5b9ULL;
      h ^= h >> 29;
    }
    return static_cast<size_t>(h);
  }
};

using CellMap = std::unordered_map<std::array<int64_t, 4>, uint64_t, ArrayHash>;

// Incremental greedy net: kept points are pairwise more than `radius` apart
// and every inserted point is within `radius` of a kept one. Buckets with
// cell side = radius make each insert check at most the 3^4 neighbor cells.
class GreedyNet {
 public:
  explicit GreedyNet(double radius)
      : r2_(radius * radius), grid_{radius} {}

  bool insert(const FloatMat& p) {
    std::array<int64_t, 4> c = grid_.cell_of(p);
    if (hit(c, p)) return false;  // own cell first: the common saturated case
    std::array<int64_t, 4> n;
    for (int64_t d0 = -1; d0 <= 1; ++d0)
      for (int64_t d1 = -1; d1 <= 1; ++d1)
        for (int64_t d2 = -1; d2 <= 1; ++d2)
          for (int64_t d3 = -1; d3 <= 1; ++d3) {
            if (!d0 && !d1 && !d2 && !d3) continue;
            n = {c[0] + d0, c[1] + d1, c[2] + d2, c[3] + d3};
            if (hit(n, p)) return false;
          }
    uint32_t idx = static_cast<uint32_t>(centers_.size());
    centers_.push_back(p);
    buckets_[c].push_back(idx);
    return true;
  }

  uint32_t size() const { return static_cast<uint32_t>(centers_.size()); }

 private:
  bool hit(const std::array<int64_t, 4>& cell, const FloatMat& p) const {
    auto it = buckets_.find(cell);
    if (it == buckets_.end()) return false;
    for (uint32_t idx : it->second)
      if (fm_dist2(p, centers_[idx]) <= r2_) return true;
    return false;
  }

  double r2_;
  DeltaGrid grid_;
  std::vector<FloatMat> centers_;
  std::unordered_map<std::array<int64_t, 4>, std::vector<uint32_t>, ArrayHash> buckets_;
};

bool fm_lex_less(const FloatMat& x, const FloatMat& y) {
  if (x.a != y.a) return x.a < y.a;
  if (x.b != y.b) return x.b < y.b;
  if (x.c != y.c) return x.c < y.c;
  return x.d < y.d;
}

bool fm_exact_eq(const FloatMat& x, const FloatMat& y) {
  return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
}

// Bias-corrected estimate of the total number of cells given the observed
// counts (Chao's estimator from singleton and doubleton frequencies).
double chao_estimate(const CellMap& bins) {
  double c = static_cast<double>(bins.size());
  double f1 = 0, f2 = 0;
  for (const auto& [cell, count] : bins) {
    if (count == 1) ++f1;
    if (count == 2) ++f2;
  }
  if (f2 > 0) return c + f1 * f1 / (2 * f2);
  return c + f1 * (f1 - 1) / 2;
}

constexpr uint32_t kShards = 64;  // fixed shard count keeps results
                                  // independent of the thread count

}  // namespace

FloatMat float_mat(double a, double b, double c, double d, bool sampled) {
  FloatMat m{a, b, c, d, sampled};
  if (!(std::fabs(m.det() - 1.0) <= kDetTol))
    throw std::invalid_argument("float_mat: determinant is not 1 within 1e-9");
  return m;
}

FloatMat float_of(const Mat2& g) {
  return float_mat(g.a.to_double(), g.b.to_double(), g.c.to_double(), g.d.to_double(),
                   /*sampled=*/false);
}

std::vector<FloatMat> float_of_all(const std::vector<Mat2>& gs) {
  std::vector<FloatMat> out;
  out.reserve(gs.size());
  for (const Mat2& g : gs) out.push_back(float_of(g));
  return out;
}

FloatMat fm_mul(const FloatMat& x, const FloatMat& y) {
  return FloatMat{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                  x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d,
                  x.sampled || y.sampled};
}

FloatMat fm_inv(const FloatMat& g) { return FloatMat{g.d, -g.b, -g.c, g.a, g.sampled}; }

double fm_dist(const FloatMat& x, const FloatMat& y) { return std::sqrt(fm_dist2(x, y)); }

std::array<int64_t, 4> DeltaGrid::cell_of(const FloatMat& m) const {
  return {static_cast<int64_t>(std::floor(m.a / delta)),
          static_cast<int64_t>(std::floor(m.b / delta)),
          static_cast<int64_t>(std::floor(m.c / delta)),
          static_cast<int64_t>(std::floor(m.d / delta))};
}

CoverSandwich covering_number(const std::vector<FloatMat>& S, double delta) {
  if (!(delta > 0)) throw std::invalid_argument("covering_number: delta must be positive");
  GreedyNet up(delta), low(2 * delta);
  for (const FloatMat& p : S) {
    up.insert(p);
    low.insert(p);
  }
  return {low.size(), up.size()};
}

uint32_t covering_exact(const std::vector<FloatMat>& S, double delta, uint32_t cap) {
  if (!(delta > 0)) throw std::invalid_argument("covering_exact: delta must be positive");
  if (S.size() > cap || S.size() > 64)
    throw TooLarge("covering_exact: set exceeds the search cap");
  uint32_t n = static_cast<uint32_t>(S.size());
  if (n == 0) return 0;
  double d2 = delta * delta;
  std::vector<uint64_t> cover(n, 0);
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j = 0; j < n; ++j)
      if (fm_dist2(S[i], S[j]) <= d2) cover[i] |= 1ull << j;

  uint64_t full = (n == 64) ? ~0ull : (1ull << n) - 1;

  // Greedy initial bound.
  uint32_t best = 0;
  for (uint64_t covered = 0; covered != full; ++best) {
    uint32_t pick = 0;
    int gain = -1;
    for (uint32_t i = 0; i < n; ++i) {
      int g = std::popcount(cover[i] & ~covered);
      if (g > gain) {
        gain = g;
        pick = i;
      }
    }
    covered |= cover[pick];
  }

  // Branch and bound on the lowest uncovered point.
  uint32_t max_ball = 1;
  for (uint32_t i = 0; i < n; ++i)
    max_ball = std::max<uint32_t>(max_ball, static_cast<uint32_t>(std::popcount(cover[i])));
  auto dfs = [&](auto&& self, uint64_t covered, uint32_t used) -> void {
    if (covered == full) {
      best = std::min(best, used);
      return;
    }
    uint32_t remaining = static_cast<uint32_t>(std::popcount(~covered & full));
    if (used + (remaining + max_ball - 1) / max_ball >= best) return;
    uint32_t p = static_cast<uint32_t>(std::countr_zero(~covered & full));
    for (uint32_t i = 0; i < n; ++i)
      if (cover[i] & (1ull << p)) self(self, covered | cover[i], used + 1);
  };
  dfs(dfs, 0, 0);
  return best;
}

ProductGrowthReport product_growth(const std::vector<FloatMat>& A, double delta,
                                   uint64_t sample_budget, uint64_t seed, Exec exec) {
  if (!(delta > 0 && delta < 1))
    throw std::invalid_argument("product_growth: delta must be in (0, 1)");
  if (A.empty()) throw EmptyInput("product_growth: empty input set");

  std::vector<FloatMat> S = A;
  for (const FloatMat& g : A) S.push_back(fm_inv(g));
  std::sort(S.begin(), S.end(), fm_lex_less);
  S.erase(std::unique(S.begin(), S.end(), fm_exact_eq), S.end());
  if (static_cast<uint64_t>(S.size()) > sample_budget)
    throw BudgetExceeded("product_growth: budget below the symmetrized set size");

  ProductGrowthReport rep;
  rep.delta = delta;
  rep.seed = seed;
  rep.set_size = static_cast<uint32_t>(S.size());
  rep.a_cover = covering_number(S, delta);

  for (double rho = delta; rho <= 16 * delta; rho *= 2) {
    GreedyNet sep(2 * rho);
    for (const FloatMat& p : S) sep.insert(p);
    rep.separation.push_back({rho, sep.size()});
  }

  uint32_t n = rep.set_size;
  unsigned __int128 cube = static_cast<unsigned __int128>(n) * n * n;
  if (cube <= sample_budget) {
    GreedyNet up(delta), low(2 * delta);
    for (uint32_t i = 0; i < n; ++i)
      for (uint32_t j = 0; j < n; ++j) {
        FloatMat pre = fm_mul(S[i], S[j]);
        for (uint32_t k = 0; k < n; ++k) {
          FloatMat p = fm_mul(pre, S[k]);
          up.insert(p);
          low.insert(p);
        }
      }
    rep.aaa_cover = {low.size(), up.size()};
    rep.n_aaa = up.size();
    rep.products = static_cast<uint64_t>(cube);
    rep.method = "exact-sandwich";
  } else {
    rep.sampled = true;
    std::vector<CellMap> shard_bins(kShards);
    DeltaGrid grid{delta};
    int threads = thread_count(exec);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (uint32_t s = 0; s < kShards; ++s) {
      uint64_t draws = sample_budget / kShards + (s < sample_budget % kShards ? 1 : 0);
      CounterRng rng(CounterRng::sub_seed(seed, s));
      CellMap& bins = shard_bins[s];
      for (uint64_t t = 0; t < draws; ++t) {
        const FloatMat& x = S[rng.next_below(n)];
        const FloatMat& y = S[rng.next_below(n)];
        const FloatMat& z = S[rng.next_below(n)];
        ++bins[grid.cell_of(fm_mul(fm_mul(x, y), z))];
      }
    }
    CellMap bins;
    for (const CellMap& part : shard_bins)
      for (const auto& [cell, count] : part) bins[cell] += count;
    rep.n_aaa = chao_estimate(bins);
    rep.products = sample_budget;
    rep.method = "sampled-chao1";
  }

  rep.n_a = rep.a_cover.upper;
  if (rep.n_a > 0 && rep.n_aaa > 0)
    rep.exponent = std::log(rep.n_aaa / rep.n_a) / std::log(1.0 / delta);
  return rep;
}

double flatness(const std::vector<Mat2>& gens, uint32_t ell, double delta,
                uint32_t samples, uint64_t seed, Exec exec) {
  if (gens.empty()) throw EmptyInput("flatness: no generators");
  if (ell < 1) throw std::invalid_argument("flatness: ell must be at least 1");
  if (samples < 10000) throw std::invalid_argument("flatness: need at least 10^4 samples");
  if (!(delta > 0)) throw std::invalid_argument("flatness: delta must be positive");

  std::vector<FloatMat> letters;
  letters.reserve(2 * gens.size());
  for (const Mat2& g : gens) {
    letters.push_back(float_of(g));
    letters.push_back(float_of(mat_inv(g)));
  }
  uint64_t L = letters.size();

  std::vector<CellMap> shard_bins(kShards);
  DeltaGrid grid{delta};
  int threads = thread_count(exec);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (uint32_t s = 0; s < kShards; ++s) {
    uint64_t draws = samples / kShards + (s < samples % kShards ? 1 : 0);
    CounterRng rng(CounterRng::sub_seed(seed, s));
    CellMap& bins = shard_bins[s];
    for (uint64_t t = 0; t < draws; ++t) {
      FloatMat acc;  // identity
      for (uint32_t step = 0; step < ell; ++step)
        acc = fm_mul(acc, letters[rng.next_below(L)]);
      ++bins[grid.cell_of(acc)];
    }
  }
  CellMap bins;
  for (const CellMap& part : shard_bins)
    for (const auto& [cell, count] : part) bins[cell] += count;
  uint64_t peak = 0;
  for (const auto& [cell, count] : bins) peak = std::max(peak, count);
  return static_cast<double>(peak) /
         (static_cast<double>(samples) * delta * delta * delta);
}

double flatness(const GeneratorSet& gs, uint32_t ell, double delta, uint32_t samples,
                uint64_t seed, Exec exec) {
  return flatness(gs.gens, ell, delta, samples, seed, exec);
}

TraceGrowthReport trace_set_growth(const std::vector<FloatMat>& A,
                                   const std::array<Mat2, 4>& probes, double delta) {
  if (A.empty()) throw EmptyInput("trace_set_growth: empty input set");
  if (!(delta > 0)) throw std::invalid_argument("trace_set_growth: delta must be positive");
  if (det4(probes[0], probes[1], probes[2], probes[3]).is_zero())
    throw DegenerateProbes("trace_set_growth: probes are linearly dependent");

  TraceGrowthReport rep;
  rep.delta = delta;
  for (uint32_t i = 0; i < 4; ++i) {
    // Entrywise dot with flip(p) reads off the trace functional of p; probes
    // only need linear independence, so skip the det-1 gate of float_of.
    Mat2 f = flip(probes[i]);
    double fa = f.a.to_double(), fb = f.b.to_double();
    double fc = f.c.to_double(), fd = f.d.to_double();
    std::vector<double> vals;
    vals.reserve(A.size());
    for (const FloatMat& x : A)
      vals.push_back(x.a * fa + x.b * fb + x.c * fc + x.d * fd);
    rep.trace_counts[i] = grid_cover_1d(vals, delta);
  }
  rep.a_cover = covering_number(A, delta);

  uint32_t drop = 0;
  for (uint32_t i = 1; i < 4; ++i)
    if (rep.trace_counts[i] < rep.trace_counts[drop]) drop = i;
  rep.best_mask = 0xF & ~(1u << drop);
  rep.product3 = 1;
  for (uint32_t i = 0; i < 4; ++i)
    if (i != drop) rep.product3 *= rep.trace_counts[i];
  rep.margin = rep.product3 / rep.a_cover.upper;
  return rep;
}

bool trace_identity_check(const Rational& x, const Rational& y, const Mat2& g) {
  if (x.is_zero() || y.is_zero())
    throw std::invalid_argument("trace_identity_check: x and y must be nonzero");
  Mat2 vx(x, Rational(0), Rational(0), Rational(1) / x);
  Mat2 vy(y, Rational(0), Rational(0), Rational(1) / y);
  Rational lhs = trace(vx * g * vy * g);
  Rational xy = x * y;
  Rational rhs = g.a * g.a * xy + g.d * g.d / xy + g.b * g.c * (x / y + y / x);
  return lhs == rhs;
}

uint32_t amplification_set(const std::vector<double>& S, double gamma, double lambda,
                           double delta, uint64_t budget, uint64_t seed) {
  if (S.empty()) throw EmptyInput("amplification_set: empty input set");
  if (!(gamma > 0)) throw std::invalid_argument("amplification_set: gamma must be positive");
  if (!(delta > 0)) throw std::invalid_argument("amplification_set: delta must be positive");
  for (double v : S)
    if (!(v >= 0.5 && v <= 2.0))
      throw std::invalid_argument("amplification_set: values must lie in [1/2, 2]");
  if (budget < S.size())
    throw BudgetExceeded("amplification_set: budget below the set size");

  std::vector<double> sym = S;
  for (double v : S) sym.push_back(1.0 / v);
  std::sort(sym.begin(), sym.end());
  sym.erase(std::unique(sym.begin(), sym.end()), sym.end());
  uint64_t n = sym.size();

  CounterRng rng(seed);
  std::vector<double> s4;
  unsigned __int128 quads = static_cast<unsigned __int128>(n) * n * n * n;
  if (quads <= budget) {
    s4.reserve(static_cast<size_t>(quads));
    for (double x1 : sym)
      for (double x2 : sym)
        for (double x3 : sym)
          for (double x4 : sym) s4.push_back(x1 * x2 * x3 * x4);
  } else {
    s4.reserve(budget);
    for (uint64_t t = 0; t < budget; ++t)
      s4.push_back(sym[rng.next_below(n)] * sym[rng.next_below(n)] *
                   sym[rng.next_below(n)] * sym[rng.next_below(n)]);
  }
  std::sort(s4.begin(), s4.end());
  s4.erase(std::unique(s4.begin(), s4.end()), s4.end());
  uint64_t m = s4.size();

  std::vector<double> D;
  unsigned __int128 pairs = static_cast<unsigned __int128>(m) * m;
  auto value = [gamma, lambda](double x, double y) {
    return x * y + gamma / (x * y) + lambda * (x / y + y / x);
  };
  if (pairs <= budget) {
    D.reserve(static_cast<size_t>(pairs));
    for (double x : s4)
      for (double y : s4) D.push_back(value(x, y));
  } else {
    D.reserve(budget);
    for (uint64_t t = 0; t < budget; ++t)
      D.push_back(value(s4[rng.next_below(m)], s4[rng.next_below(m)]));
  }
  return grid_cover_1d(D, delta);
}

std::pair<uint32_t, uint32_t> sum_product(const std::vector<double>& A, double delta) {
  if (!(delta > 0)) throw std::invalid_argument("sum_product: delta must be positive");
  if (A.empty()) throw EmptyInput("sum_product: empty input set");
  for (double v : A)
    if (!(v >= -1.0 && v <= 1.0))
      throw std::invalid_argument("sum_product: values must lie in [-1, 1]");
  std::vector<double> sorted = A;
  std::sort(sorted.begin(), sorted.end());
  for (size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] - sorted[i - 1] < delta * (1 - 1e-12))
      throw std::invalid_argument("sum_product: values must be delta-separated");
  size_t n = sorted.size();
  if (n * n > 50'000'000) throw TooLarge("sum_product: set too large for the n^2 scan");

  std::vector<double> sums, prods;
  sums.reserve(n * n);
  prods.reserve(n * n);
  for (double x : sorted)
    for (double y : sorted) {
      sums.push_back(x + y);
      prods.push_back(x * y);
    }
  return {grid_cover_1d(sums, delta), grid_cover_1d(prods, delta)};
}

uint32_t grid_cover_1d(const std::vector<double>& values, double delta) {
  if (!(delta > 0)) throw std::invalid_argument("grid_cover_1d: delta must be positive");
  std::unordered_set<int64_t> cells;
  cells.reserve(values.size());
  for (double v : values) cells.insert(static_cast<int64_t>(std::floor(v / delta)));
  return static_cast<uint32_t>(cells.size());
}

}  // namespace monex
