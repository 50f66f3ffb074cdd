#include "monex/forge.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

namespace monex {

std::string seed_mode_name(SeedMode m) {
  return m == SeedMode::sanov_power ? "sanov_power" : "paper_search";
}

SeedMode seed_mode_parse(const std::string& text) {
  if (text == "sanov_power") return SeedMode::sanov_power;
  if (text == "paper_search") return SeedMode::paper_search;
  throw ParseError("seed_mode_parse: unknown mode '" + text + "'");
}

namespace {

struct MatLess {
  bool operator()(const Mat2& x, const Mat2& y) const { return mat_less(x, y); }
};

Mat2 base_shear_upper(unsigned q) {
  return Mat2(Rational(1), Rational(1, static_cast<long long>(q)), Rational(0), Rational(1));
}

Mat2 base_shear_lower(unsigned q) {
  return Mat2(Rational(1), Rational(0), Rational(1, static_cast<long long>(q)), Rational(1));
}

}  // namespace

SeedPair seed_pair(SeedMode mode, unsigned q, unsigned freeness_depth, unsigned search_len,
                   uint64_t budget, Exec exec) {
  if (q < 1) throw std::invalid_argument("seed_pair: q must be >= 1");
  Mat2 h1 = base_shear_upper(q);
  Mat2 h2 = base_shear_lower(q);

  if (mode == SeedMode::sanov_power) {
    SeedPair sp;
    sp.g1 = mat_pow(h1, 2L * q);
    sp.g2 = mat_pow(h2, 2L * q);
    sp.r = 2 * q;
    sp.cert_depth = 0;  // off-diagonal 2: free by ping-pong, no scan needed
    sp.w1 = Word::from_codes(std::vector<uint32_t>(2 * q, 0));
    sp.w2 = Word::from_codes(std::vector<uint32_t>(2 * q, 2));
    return sp;
  }

  // Distinct group elements reachable by short words, each kept with its
  // least word (the visit order is prefix order, not length order).
  std::map<Mat2, Word, MatLess> seen;
  for_each_reduced(2, search_len, budget, [&](const Word& w) {
    if (w.empty()) return true;
    Mat2 m = word_eval(w, {h1, h2});
    if (m.is_identity()) return true;
    auto it = seen.find(m);
    if (it == seen.end())
      seen.emplace(m, w);
    else if (w < it->second)
      it->second = w;
    return true;
  });

  struct Candidate {
    Rational d;
    Word w;
    Mat2 m;
  };
  std::vector<Candidate> cands;
  cands.reserve(seen.size());
  for (const auto& [m, w] : seen) cands.push_back({dist_sq(m, Mat2::identity()), w, m});
  std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
    if (x.d != y.d) return x.d < y.d;
    return x.w < y.w;
  });

  // Pairs in nondecreasing score order; score(i < j) = d[j] since d is sorted.
  for (size_t j = 1; j < cands.size(); ++j) {
    for (size_t i = 0; i < j; ++i) {
      if (mat_mul(cands[i].m, cands[j].m).is_identity()) continue;
      auto res = freeness_certificate({cands[i].m, cands[j].m}, freeness_depth, budget, exec);
      if (!res.pass) continue;
      SeedPair sp;
      sp.g1 = cands[i].m;
      sp.g2 = cands[j].m;
      sp.r = static_cast<unsigned>(std::max(cands[i].w.length(), cands[j].w.length()));
      sp.cert_depth = static_cast<unsigned>(freeness_depth);
      sp.w1 = cands[i].w;
      sp.w2 = cands[j].w;
      return sp;
    }
  }
  throw NoPairFound("seed_pair: no certified pair within search length " +
                    std::to_string(search_len));
}

namespace {

void validate_config(const ForgeConfig& cfg) {
  if (cfg.q < 1) throw std::invalid_argument("forge: q must be >= 1");
  if (cfg.ell < 2) throw std::invalid_argument("forge: ell must be >= 2");
  if (cfg.epsilon.sign() <= 0) throw std::invalid_argument("forge: epsilon must be > 0");
}

}  // namespace

ForgePipeline forge_prepare(const ForgeConfig& cfg, Exec exec) {
  validate_config(cfg);
  if (int_pow(3, cfg.ell - 2) > mpz_class(static_cast<unsigned long>(cfg.word_budget)))
    throw BudgetExceeded("forge_prepare: word count bound 3^(ell-2) exceeds budget");

  ForgePipeline pipe;
  pipe.seed = seed_pair(cfg.seed_mode, cfg.q, cfg.freeness_depth, cfg.search_len,
                        cfg.word_budget, exec);
  pipe.words = build_W(cfg.ell);
  pipe.mats = word_eval_all(pipe.words, {pipe.seed.g1, pipe.seed.g2}, exec);

  ForgeStats& st = pipe.stats;
  st.word_count = pipe.words.size();
  st.max_norm_sq = Rational(0);
  for (const Mat2& m : pipe.mats) st.max_norm_sq = max(st.max_norm_sq, norm_sq(m));
  st.frobenius_bound = sqrt_upper(st.max_norm_sq);
  Rational shear_cap(static_cast<long long>(cfg.q) + 1, static_cast<long long>(cfg.q));
  st.operator_bound = rat_pow(shear_cap, 2UL * pipe.seed.r * cfg.ell);
  st.norm_cap = min(st.frobenius_bound, st.operator_bound);
  st.q_rule_value = rat_pow(shear_cap, 12UL * pipe.seed.r);
  st.q_rule_pass = st.q_rule_value < Rational(101, 100);
  st.denominator_cap = int_pow(cfg.q, 4UL * pipe.seed.r * cfg.ell);
  return pipe;
}

namespace {

using CellKey = std::array<mpz_class, 4>;

CellKey cell_of(const Mat2& m, const Rational& side) {
  return {floor_int(m.a / side), floor_int(m.b / side), floor_int(m.c / side),
          floor_int(m.d / side)};
}

struct BucketBest {
  size_t count = 0;
  size_t first_index = 0;
};

// Fullest cell; ties go to the cell whose least (first-seen) word index is
// smallest. Insertion order is word order, so first_index is the cell minimum.
BucketBest bucket_scan(const ForgePipeline& pipe, const Rational& side) {
  std::map<CellKey, BucketBest> cells;
  for (size_t i = 0; i < pipe.mats.size(); ++i) {
    CellKey key = cell_of(pipe.mats[i], side);
    auto [it, fresh] = cells.try_emplace(key, BucketBest{0, i});
    it->second.count += 1;
    (void)fresh;
  }
  BucketBest best;
  for (const auto& [key, cell] : cells) {
    if (cell.count > best.count ||
        (cell.count == best.count && cell.first_index < best.first_index))
      best = cell;
  }
  return best;
}

}  // namespace

size_t densest_cell_count(const ForgePipeline& pipe, const Rational& epsilon) {
  if (epsilon.sign() <= 0) throw std::invalid_argument("densest_cell_count: epsilon must be > 0");
  Rational side = epsilon / (Rational(2) * pipe.stats.norm_cap);
  return bucket_scan(pipe, side).count;
}

GeneratorSet forge_from(const ForgePipeline& pipe, const ForgeConfig& cfg, Exec exec) {
  validate_config(cfg);
  const Rational& eps = cfg.epsilon;
  Rational side = eps / (Rational(2) * pipe.stats.norm_cap);
  BucketBest cell = bucket_scan(pipe, side);

  GeneratorSet gs;
  gs.seed = pipe.seed;
  gs.config = cfg;
  gs.stats = pipe.stats;
  gs.stats.cell_side = side;
  gs.stats.densest_cell = cell.count;
  gs.epsilon = eps;
  gs.w0 = pipe.mats[cell.first_index];
  gs.w0_word = pipe.words[cell.first_index];

  Rational radius_sq = (eps / pipe.stats.norm_cap) * (eps / pipe.stats.norm_cap);
  int64_t n = static_cast<int64_t>(pipe.mats.size());
  std::vector<char> inside(pipe.mats.size(), 0);
  int threads = thread_count(exec);
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
  for (int64_t i = 0; i < n; ++i)
    inside[static_cast<size_t>(i)] =
        dist_sq(pipe.mats[static_cast<size_t>(i)], gs.w0) <= radius_sq ? 1 : 0;

  Mat2 w0_inv = mat_inv(gs.w0);
  Rational eps_sq = eps * eps;
  Rational cap_sq = pipe.stats.norm_cap * pipe.stats.norm_cap;
  std::map<Mat2, bool, MatLess> taken;
  gs.epsilon_achieved = Rational(0);
  size_t ball = 0;
  for (size_t i = 0; i < pipe.mats.size(); ++i) {
    if (!inside[i]) continue;
    ++ball;
    Mat2 g = mat_mul(w0_inv, pipe.mats[i]);
    if (g.is_identity()) continue;
    if (!taken.emplace(g, true).second) continue;
    Rational close = dist_sq(g, Mat2::identity());
    Rational moved = dist_sq(gs.w0, pipe.mats[i]);
    if (close > cap_sq * moved || close > eps_sq)
      throw std::logic_error("forge_from: norm cap failed to dominate a ball member");
    gs.gens.push_back(g);
    gs.epsilon_achieved = max(gs.epsilon_achieved, close);
  }
  gs.stats.ball_size = ball;

  if (gs.gens.empty())
    throw NoCollision("forge_from: collision ball holds only the center word; "
                      "increase ell or epsilon");

  mpz_class q_lcm(1);
  for (const Mat2& g : gs.gens)
    for (const Rational& e : g.row_major())
      mpz_lcm(q_lcm.get_mpz_t(), q_lcm.get_mpz_t(), e.denominator().get_mpz_t());
  gs.Q = q_lcm;
  gs.stats.denominator_cap_ok =
      mpz_divisible_p(gs.stats.denominator_cap.get_mpz_t(), gs.Q.get_mpz_t()) != 0;
  return gs;
}

GeneratorSet forge(const ForgeConfig& cfg, Exec exec) {
  return forge_from(forge_prepare(cfg, exec), cfg, exec);
}

Rational forge_min_epsilon(const ForgeConfig& cfg, size_t min_cell, Exec exec, unsigned rounds) {
  ForgePipeline pipe = forge_prepare(cfg, exec);
  auto count = [&](const Rational& eps) { return densest_cell_count(pipe, eps); };

  Rational lo, hi;
  const unsigned kLadderCap = 200;
  if (count(Rational(1)) >= min_cell) {
    hi = Rational(1);
    unsigned steps = 0;
    for (;; ++steps) {
      if (steps > kLadderCap)
        throw NoConvergence("forge_min_epsilon: halving ladder never fell below the target",
                            static_cast<double>(min_cell));
      Rational half = hi / Rational(2);
      if (count(half) < min_cell) {
        lo = half;
        break;
      }
      hi = half;
    }
  } else {
    lo = Rational(1);
    unsigned steps = 0;
    for (;; ++steps) {
      if (steps > kLadderCap)
        throw NoConvergence("forge_min_epsilon: doubling ladder never reached the target",
                            static_cast<double>(min_cell));
      Rational twice = lo * Rational(2);
      if (count(twice) >= min_cell) {
        hi = twice;
        break;
      }
      lo = twice;
    }
  }

  for (unsigned i = 0; i < rounds; ++i) {
    Rational mid = (lo + hi) / Rational(2);
    if (count(mid) >= min_cell)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

BallElements word_ball(const std::vector<Mat2>& gens, unsigned k, uint64_t budget) {
  if (gens.empty()) throw EmptyInput("word_ball: no generators");
  std::map<Mat2, bool, MatLess> seen;
  BallElements out;
  for_each_reduced(static_cast<uint32_t>(gens.size()), k, budget, [&](const Word& w) {
    out.words += 1;
    seen.emplace(word_eval(w, gens), true);
    return true;
  });
  out.elements.reserve(seen.size());
  for (const auto& [m, used] : seen) {
    (void)used;
    out.elements.push_back(m);
  }
  return out;
}

MinPairResult min_pairwise_dist_sq(const std::vector<Mat2>& mats, Exec exec) {
  if (mats.size() < 2) throw EmptyInput("min_pairwise_dist_sq: need at least two matrices");
  int64_t n = static_cast<int64_t>(mats.size());
  MinPairResult best{Rational(0), mats.size(), mats.size()};
  bool have = false;
  int threads = thread_count(exec);
#pragma omp parallel num_threads(threads)
  {
    MinPairResult mine{Rational(0), mats.size(), mats.size()};
    bool filled = false;
#pragma omp for schedule(dynamic, 1) nowait
    for (int64_t i = 0; i < n - 1; ++i) {
      for (int64_t j = i + 1; j < n; ++j) {
        Rational d = dist_sq(mats[static_cast<size_t>(i)], mats[static_cast<size_t>(j)]);
        bool better = !filled || d < mine.dist_sq ||
                      (d == mine.dist_sq &&
                       (static_cast<size_t>(i) < mine.i ||
                        (static_cast<size_t>(i) == mine.i && static_cast<size_t>(j) < mine.j)));
        if (better) {
          mine = {d, static_cast<size_t>(i), static_cast<size_t>(j)};
          filled = true;
        }
      }
    }
#pragma omp critical(monex_min_pair)
    {
      if (filled) {
        bool better = !have || mine.dist_sq < best.dist_sq ||
                      (mine.dist_sq == best.dist_sq &&
                       (mine.i < best.i || (mine.i == best.i && mine.j < best.j)));
        if (better) {
          best = mine;
          have = true;
        }
      }
    }
  }
  return best;
}

bool PropertyReport::all_pass() const {
  if (!freeness.pass || !grid_pass || !close_pass) return false;
  for (const SeparationRow& row : separation)
    if (!row.pass) return false;
  return true;
}

PropertyReport verify_properties(const GeneratorSet& gs, unsigned k_max,
                                 unsigned freeness_depth, uint64_t budget, Exec exec) {
  if (gs.gens.empty()) throw EmptyInput("verify_properties: empty generator set");
  if (k_max < 1) throw InvalidK("verify_properties: k_max must be >= 1");

  PropertyReport rep;
  rep.Q = gs.Q;
  rep.size = gs.gens.size();

  double log_q = gs.Q > 1 ? log_mpz(gs.Q) : 0.0;
  double log_inv_eps = -log_rational(gs.epsilon);
  rep.exp_q_eps = (log_q != 0.0 && log_inv_eps != 0.0) ? log_q / log_inv_eps : 0.0;
  double log_size = rep.size > 1 ? std::log(static_cast<double>(rep.size)) : 0.0;
  rep.exp_q_size = (log_q != 0.0 && log_size != 0.0) ? log_q / log_size : 0.0;

  rep.freeness = freeness_certificate(gs.gens, freeness_depth, budget, exec);
  rep.freeness_depth = freeness_depth;

  rep.grid_pass = true;
  rep.grid_offender = -1;
  for (size_t i = 0; i < gs.gens.size() && rep.grid_pass; ++i)
    for (const Rational& e : gs.gens[i].row_major())
      if (!mpz_divisible_p(gs.Q.get_mpz_t(), e.denominator().get_mpz_t())) {
        rep.grid_pass = false;
        rep.grid_offender = static_cast<int>(i);
        break;
      }

  rep.close_pass = true;
  rep.close_offender = -1;
  Rational eps_sq = gs.epsilon * gs.epsilon;
  for (size_t i = 0; i < gs.gens.size(); ++i)
    if (dist_sq(gs.gens[i], Mat2::identity()) > eps_sq) {
      rep.close_pass = false;
      rep.close_offender = static_cast<int>(i);
      break;
    }

  for (unsigned k = 1; k <= k_max; ++k) {
    BallElements ball = word_ball(gs.gens, k, budget);
    SeparationRow row;
    row.k = k;
    row.words = ball.words;
    row.elements = ball.elements.size();
    MinPairResult mp = min_pairwise_dist_sq(ball.elements, exec);
    row.min_dist_sq = mp.dist_sq;
    row.bound = Rational(mpz_class(1), int_pow(gs.Q, 2UL * k));
    row.pass = row.min_dist_sq >= row.bound;
    row.exponent = (gs.Q > 1 && mp.dist_sq.sign() > 0)
                       ? -0.5 * log_rational(mp.dist_sq) / log_mpz(gs.Q)
                       : 0.0;
    rep.separation.push_back(row);
  }
  return rep;
}

}  // namespace monex
