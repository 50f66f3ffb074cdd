#include "monex/expansion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "monex/errors.hpp"
#include "monex/gfp.hpp"
#include "monex/rng.hpp"

namespace monex {

ExpansionReport vertex_expansion_exact(const LayeredBipartiteGraph& g, uint32_t cap, Exec exec) {
  if (g.n > cap) throw TooLarge("vertex_expansion_exact: n exceeds the enumeration cap");
  if (g.n < 2) throw EmptyInput("vertex_expansion_exact: need at least two vertices");

  std::vector<uint32_t> nb(g.n, 0);
  for (auto [i, j] : g.unique_edges()) nb[i] |= 1u << j;

  const uint32_t n = g.n;
  const uint32_t full = (n == 32) ? ~0u : (1u << n) - 1;

  struct Best {
    uint64_t num = ~0ull;  // ratio num/den, start at +infinity
    uint64_t den = 1;
    uint32_t mask = 0;
  };
  // Strictly better ratio, or equal ratio with a smaller witness mask.
  auto better = [](const Best& a, const Best& b) {
    unsigned __int128 l = static_cast<unsigned __int128>(a.num) * b.den;
    unsigned __int128 r = static_cast<unsigned __int128>(b.num) * a.den;
    if (l != r) return l < r;
    return a.mask < b.mask && a.num != ~0ull;
  };

  int threads = thread_count(exec);
  std::vector<Best> local(threads);
  std::vector<uint64_t> counts(threads, 0);
#pragma omp parallel num_threads(threads)
  {
#ifdef _OPENMP
    int tid = omp_get_thread_num();
#else
    int tid = 0;
#endif
    Best mine;
    uint64_t seen = 0;
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
    for (int64_t mask = 1; mask <= static_cast<int64_t>(full); ++mask) {
      uint32_t m = static_cast<uint32_t>(mask);
      uint32_t size = static_cast<uint32_t>(std::popcount(m));
      if (2 * size > n) continue;
      uint32_t N = 0;
      for (uint32_t rest = m; rest;) {
        uint32_t bit = rest & (0u - rest);
        N |= nb[static_cast<uint32_t>(std::countr_zero(bit))];
        rest ^= bit;
      }
      ++seen;
      Best cand{static_cast<uint64_t>(std::popcount(N)), size, m};
      if (better(cand, mine)) mine = cand;
    }
    local[tid] = mine;
    counts[tid] = seen;
  }

  Best best;
  uint64_t seen = 0;
  for (int t = 0; t < threads; ++t) {
    seen += counts[t];
    if (better(local[t], best)) best = local[t];
  }

  ExpansionReport rep;
  rep.n = n;
  rep.method = "exhaustive";
  rep.min_ratio = Rational(static_cast<long long>(best.num), static_cast<long long>(best.den));
  for (uint32_t i = 0; i < n; ++i)
    if (best.mask & (1u << i)) rep.argmin_set.push_back(i);
  rep.subsets = seen;
  return rep;
}

namespace {

// Degree-normalized biadjacency with isolated vertices removed and the known
// top singular pair (sqrt-degree vectors, sigma1 = 1).
struct NormOp {
  uint32_t nl = 0, nr = 0;
  std::vector<uint32_t> ei, ej;
  std::vector<double> w;
  std::vector<double> v1;  // unit left top singular vector
};

NormOp build_op(const LayeredBipartiteGraph& g) {
  auto edges = g.unique_edges();
  if (edges.empty()) throw EmptyInput("spectral_gap: graph has no edges");
  std::vector<uint32_t> dl(g.n, 0), dr(g.n, 0);
  for (auto [i, j] : edges) {
    ++dl[i];
    ++dr[j];
  }
  std::vector<uint32_t> lmap(g.n, ~0u), rmap(g.n, ~0u);
  NormOp op;
  for (uint32_t i = 0; i < g.n; ++i) {
    if (dl[i]) lmap[i] = op.nl++;
    if (dr[i]) rmap[i] = op.nr++;
  }
  op.v1.resize(op.nl);
  double norm = 0;
  for (uint32_t i = 0; i < g.n; ++i) {
    if (!dl[i]) continue;
    op.v1[lmap[i]] = std::sqrt(static_cast<double>(dl[i]));
    norm += dl[i];
  }
  norm = std::sqrt(norm);
  for (double& x : op.v1) x /= norm;
  op.ei.reserve(edges.size());
  op.ej.reserve(edges.size());
  op.w.reserve(edges.size());
  for (auto [i, j] : edges) {
    op.ei.push_back(lmap[i]);
    op.ej.push_back(rmap[j]);
    op.w.push_back(1.0 / std::sqrt(static_cast<double>(dl[i]) * dr[j]));
  }
  return op;
}

// z = Bt B x for the normalized operator.
void apply_btb(const NormOp& op, const std::vector<double>& x, std::vector<double>& y,
               std::vector<double>& z) {
  std::fill(y.begin(), y.end(), 0.0);
  for (size_t e = 0; e < op.w.size(); ++e) y[op.ej[e]] += op.w[e] * x[op.ei[e]];
  std::fill(z.begin(), z.end(), 0.0);
  for (size_t e = 0; e < op.w.size(); ++e) z[op.ei[e]] += op.w[e] * y[op.ej[e]];
}

void deflate(const NormOp& op, std::vector<double>& x) {
  double dot = 0;
  for (uint32_t i = 0; i < op.nl; ++i) dot += x[i] * op.v1[i];
  for (uint32_t i = 0; i < op.nl; ++i) x[i] -= dot * op.v1[i];
}

double norm2(const std::vector<double>& x) {
  double s = 0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace

SpectralReport spectral_gap_report(const LayeredBipartiteGraph& g, double tol, uint64_t seed) {
  if (!(tol > 0)) throw std::invalid_argument("spectral_gap: tol must be positive");
  NormOp op = build_op(g);
  SpectralReport rep;
  rep.left = op.nl;
  rep.right = op.nr;
  rep.tolerance = tol;
  rep.seed = seed;
  rep.method = "spectral";
  if (op.nl < 2 || op.nr < 1) return rep;  // rank-one operator, sigma2 = 0

  CounterRng rng(seed);
  std::vector<double> x(op.nl), y(op.nr), z(op.nl), r(op.nl);
  for (;;) {
    for (double& v : x) v = rng.next_unit() - 0.5;
    deflate(op, x);
    double nx = norm2(x);
    if (nx > 1e-9) {
      for (double& v : x) v /= nx;
      break;
    }
  }

  const uint32_t max_iter = 2000000;
  double lambda = 0;
  for (uint32_t it = 1; it <= max_iter; ++it) {
    apply_btb(op, x, y, z);
    deflate(op, z);
    lambda = 0;
    for (uint32_t i = 0; i < op.nl; ++i) lambda += x[i] * z[i];
    double res = 0;
    for (uint32_t i = 0; i < op.nl; ++i) {
      double d = z[i] - lambda * x[i];
      res += d * d;
    }
    res = std::sqrt(res);
    double sigma = std::sqrt(std::max(0.0, lambda));
    rep.iterations = it;
    rep.residual = res;
    rep.sigma2 = sigma;
    if (res <= 0.5 * tol * std::max(sigma, tol)) return rep;
    double nz = norm2(z);
    if (nz < 1e-300) {  // annihilated: everything orthogonal to v1 is null
      rep.sigma2 = 0;
      rep.residual = 0;
      return rep;
    }
    for (uint32_t i = 0; i < op.nl; ++i) x[i] = z[i] / nz;
  }
  throw NoConvergence("spectral_gap: power iteration hit the cap", rep.residual);
}

double spectral_gap(const LayeredBipartiteGraph& g, double tol) {
  return spectral_gap_report(g, tol).sigma2;
}

double sigma2_dense_oracle(const LayeredBipartiteGraph& g) {
  NormOp op = build_op(g);
  if (op.nl < 2 || op.nr < 1) return 0.0;
  const uint32_t n = op.nl;
  std::vector<double> B(static_cast<size_t>(op.nr) * n, 0.0);
  for (size_t e = 0; e < op.w.size(); ++e)
    B[static_cast<size_t>(op.ej[e]) * n + op.ei[e]] = op.w[e];
  std::vector<double> M(static_cast<size_t>(n) * n, 0.0);
  for (uint32_t j = 0; j < op.nr; ++j)
    for (uint32_t a = 0; a < n; ++a) {
      double bja = B[static_cast<size_t>(j) * n + a];
      if (bja == 0.0) continue;
      for (uint32_t b = 0; b < n; ++b)
        M[static_cast<size_t>(a) * n + b] += bja * B[static_cast<size_t>(j) * n + b];
    }

  auto at = [&M, n](uint32_t i, uint32_t j) -> double& {
    return M[static_cast<size_t>(i) * n + j];
  };
  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0;
    for (uint32_t p = 0; p < n; ++p)
      for (uint32_t q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
    if (off < 1e-26) break;
    for (uint32_t p = 0; p < n; ++p) {
      for (uint32_t q = p + 1; q < n; ++q) {
        double apq = at(p, q);
        if (std::abs(apq) < 1e-300) continue;
        double tau = (at(q, q) - at(p, p)) / (2 * apq);
        double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1 + tau * tau));
        double c = 1.0 / std::sqrt(1 + t * t), s = t * c;
        for (uint32_t k = 0; k < n; ++k) {
          double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (uint32_t k = 0; k < n; ++k) {
          double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (uint32_t i = 0; i < n; ++i) eig[i] = at(i, i);
  std::sort(eig.begin(), eig.end(), std::greater<>());
  return std::sqrt(std::max(0.0, eig[1]));
}

double tanner_bound(double sigma2) { return 2.0 / (1.0 + sigma2 * sigma2); }

CorpusReport continuous_corpus_test(const MapFamily& fam,
                                    const std::vector<IntervalSet>& corpus) {
  CorpusReport rep;
  rep.method = "continuous";
  bool have = false;
  for (size_t idx = 0; idx < corpus.size(); ++idx) {
    const IntervalSet& A = corpus[idx];
    Rational m = A.measure();
    bool inside = !A.empty() && !(A.parts().front().lo < Rational(0)) &&
                  !(Rational(1) < A.parts().back().hi);
    if (!inside || m.is_zero() || Rational(1, 2) < m) {
      ++rep.skipped;
      continue;
    }
    Rational ratio = expansion_ratio(fam, A).ratio;
    ++rep.count;
    if (!have || ratio < rep.min_ratio) {
      have = true;
      rep.min_ratio = ratio;
      rep.argmin_index = idx;
    }
  }
  if (!have) throw EmptyInput("continuous_corpus_test: no admissible corpus sets");
  rep.all_above_one = Rational(1) < rep.min_ratio;
  return rep;
}

std::vector<IntervalSet> corpus_random(uint32_t count, uint32_t parts, uint64_t seed) {
  std::vector<IntervalSet> out;
  out.reserve(count);
  for (uint32_t c = 0; c < count; ++c) {
    CounterRng rng(CounterRng::sub_seed(seed, c));
    std::vector<Rational> xs;
    xs.reserve(2 * parts);
    for (uint32_t i = 0; i < 2 * parts; ++i)
      xs.push_back(Rational(static_cast<long long>(rng.next_below(65537)), 65536));
    std::sort(xs.begin(), xs.end());
    std::vector<Interval> ivs;
    for (uint32_t i = 0; i < 2 * parts; i += 2) ivs.emplace_back(xs[i], xs[i + 1]);
    IntervalSet A(std::move(ivs));
    if (Rational(1, 2) < A.measure()) {
      std::vector<Interval> shrunk;
      for (const Interval& p : A.parts())
        shrunk.emplace_back(p.lo / Rational(2), p.hi / Rational(2));
      A = IntervalSet(std::move(shrunk));
    }
    if (A.empty()) A = IntervalSet(Interval(Rational(0), Rational(1, 4)));
    out.push_back(std::move(A));
  }
  return out;
}

std::vector<IntervalSet> corpus_cantor(uint32_t depth) {
  std::vector<IntervalSet> out;
  std::vector<Interval> cur{Interval(Rational(0), Rational(1))};
  for (uint32_t k = 0; k < depth; ++k) {
    std::vector<Interval> next;
    for (const Interval& iv : cur) {
      Rational quarter = iv.length() / Rational(4);
      next.emplace_back(iv.lo, iv.lo + quarter);
      next.emplace_back(iv.hi - quarter, iv.hi);
    }
    cur = std::move(next);
    out.emplace_back(cur);
  }
  return out;
}

std::vector<IntervalSet> corpus_cells(uint32_t K) {
  if (K < 2) throw InvalidK("corpus_cells: K must be at least 2");
  std::vector<IntervalSet> out;
  for (uint32_t k = 1; k <= K; ++k)
    out.emplace_back(Interval(Rational(k - 1, K), Rational(k, K)));
  return out;
}

std::vector<IntervalSet> corpus_preimage(const MapFamily& fam, uint32_t per_map,
                                         uint64_t seed) {
  std::vector<IntervalSet> out;
  for (size_t m = 0; m < fam.maps.size(); ++m) {
    const PiecewiseMap& psi = fam.maps[m];
    if (psi.kind == MapKind::identity) continue;
    for (uint32_t t = 0; t < per_map; ++t) {
      CounterRng rng(CounterRng::sub_seed(seed, m * 1009 + t));
      Interval im = psi.image();
      Rational span = im.length();
      if (span.is_zero()) continue;
      Rational a = im.lo + span * Rational(static_cast<long long>(rng.next_below(192)), 256);
      Rational b = a + (im.hi - a) * Rational(1 + static_cast<long long>(rng.next_below(255)), 256);
      // Pull [a,b] back through the map.
      Rational lo, hi;
      switch (psi.kind) {
        case MapKind::shift_plus:
          lo = a - Rational(1, psi.K);
          hi = b - Rational(1, psi.K);
          break;
        case MapKind::shift_minus:
          lo = a + Rational(1, psi.K);
          hi = b + Rational(1, psi.K);
          break;
        case MapKind::mobius: {
          Mat2 inv = mat_inv(psi.g);
          lo = mobius_apply(inv, a).value;
          hi = mobius_apply(inv, b).value;
          break;
        }
        default:
          continue;
      }
      if (Rational(1, 2) < hi - lo) hi = lo + Rational(1, 2);
      out.emplace_back(Interval(lo, hi));
    }
  }
  return out;
}

std::vector<IntervalSet> builtin_corpus(const MapFamily& fam) {
  constexpr size_t kCorpusSize = 200;
  std::vector<IntervalSet> out = corpus_cantor(12);
  for (auto& s : corpus_cells(fam.K)) out.push_back(std::move(s));
  for (auto& s : corpus_preimage(fam, 2, 0xc0de)) out.push_back(std::move(s));
  if (out.size() > kCorpusSize) {
    out.resize(kCorpusSize);
    return out;
  }
  uint32_t fill = static_cast<uint32_t>(kCorpusSize - out.size());
  for (auto& s : corpus_random(fill, 4, 0xc0de)) out.push_back(std::move(s));
  return out;
}

DimensionReport subspace_dimension_test(const std::vector<std::vector<uint8_t>>& mats,
                                        uint16_t p, uint32_t D, uint32_t trials,
                                        uint64_t seed, Exec exec) {
  if (!is_prime_u16(p)) throw BadPrime("subspace_dimension_test: p must be a prime below 2^16");
  if (mats.empty()) throw BadDimension("subspace_dimension_test: no matrices");
  uint32_t n = 0;
  while (static_cast<size_t>(n) * n < mats[0].size()) ++n;
  if (static_cast<size_t>(n) * n != mats[0].size())
    throw BadDimension("subspace_dimension_test: matrices must be square");
  for (const auto& M : mats)
    if (M.size() != mats[0].size())
      throw BadDimension("subspace_dimension_test: matrix sizes differ");
  if (D < 1 || 2 * D > n)
    throw BadDimension("subspace_dimension_test: need 1 <= D <= n/2");
  if (trials < 1) throw BadDimension("subspace_dimension_test: need at least one trial");

  DimensionReport rep;
  rep.n = n;
  rep.k = static_cast<uint32_t>(mats.size());
  rep.D = D;
  rep.p = p;
  rep.trials = trials;
  rep.seed = seed;
  rep.method = "dimension";
  rep.span_dims.assign(trials, 0);

  const uint32_t k = rep.k;
  uint32_t resamples = 0;
  int threads = thread_count(exec);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads) reduction(+ : resamples)
  for (uint32_t t = 0; t < trials; ++t) {
    CounterRng rng(CounterRng::sub_seed(seed, t));
    std::vector<uint16_t> V(static_cast<size_t>(n) * D);
    for (;;) {
      for (auto& v : V) v = static_cast<uint16_t>(rng.next_below(p));
      std::vector<uint16_t> copy = V;
      if (gfp_rank(copy, n, D, p) == D) break;
      ++resamples;
    }
    // Rows of the span matrix are the transposed images M_i * V[:, j].
    std::vector<uint16_t> span(static_cast<size_t>(k) * D * n, 0);
    for (uint32_t im = 0; im < k; ++im) {
      const auto& M = mats[im];
      for (uint32_t r = 0; r < n; ++r) {
        for (uint32_t c = 0; c < n; ++c) {
          if (!M[static_cast<size_t>(r) * n + c]) continue;
          for (uint32_t j = 0; j < D; ++j) {
            size_t row = static_cast<size_t>(im) * D + j;
            uint32_t val = span[row * n + r] + V[static_cast<size_t>(c) * D + j];
            span[row * n + r] = static_cast<uint16_t>(val % p);
          }
        }
      }
    }
    rep.span_dims[t] = gfp_rank(span, k * D, n, p);
  }
  rep.resamples = resamples;

  Rational minr;
  double mean = 0;
  for (uint32_t t = 0; t < trials; ++t) {
    Rational g(rep.span_dims[t], D);
    if (t == 0 || g < minr) minr = g;
    mean += static_cast<double>(rep.span_dims[t]);
  }
  rep.min_growth = minr;
  rep.mean_growth = mean / (static_cast<double>(D) * trials);
  return rep;
}

}  // namespace monex
