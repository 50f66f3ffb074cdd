#include "monex/words.hpp"

#include <algorithm>

#include "monex/errors.hpp"

namespace monex {

Word Word::from_letters(const std::vector<Letter>& letters) {
  std::vector<uint32_t> codes;
  codes.reserve(letters.size());
  for (const Letter& l : letters) {
    if (l.sign != 1 && l.sign != -1) throw std::invalid_argument("Word: sign must be +1 or -1");
    codes.push_back(l.code());
  }
  return from_codes(std::move(codes));
}

Word Word::from_codes(std::vector<uint32_t> codes) {
  for (size_t i = 0; i + 1 < codes.size(); ++i)
    if ((codes[i] ^ 1u) == codes[i + 1])
      throw std::invalid_argument("Word: not reduced at position " + std::to_string(i));
  Word w;
  w.codes_ = std::move(codes);
  return w;
}

Word concat_reduce(const Word& u, const Word& v) {
  size_t i = u.codes_.size(), j = 0;
  while (i > 0 && j < v.codes_.size() && (u.codes_[i - 1] ^ 1u) == v.codes_[j]) {
    --i;
    ++j;
  }
  Word w;
  w.codes_.reserve(i + (v.codes_.size() - j));
  w.codes_.insert(w.codes_.end(), u.codes_.begin(), u.codes_.begin() + i);
  w.codes_.insert(w.codes_.end(), v.codes_.begin() + j, v.codes_.end());
  return w;
}

Word Word::inverse() const {
  Word w;
  w.codes_.reserve(codes_.size());
  for (auto it = codes_.rbegin(); it != codes_.rend(); ++it) w.codes_.push_back(*it ^ 1u);
  return w;
}

uint32_t Word::max_index() const {
  uint32_t m = 0;
  for (uint32_t c : codes_) m = std::max(m, c / 2);
  return m;
}

std::string Word::str() const {
  std::string out;
  for (size_t i = 0; i < codes_.size(); ++i) {
    Letter l = Letter::from_code(codes_[i]);
    if (i) out += ',';
    out += (l.sign > 0 ? '+' : '-');
    out += std::to_string(l.index);
  }
  return out;
}

Word Word::parse(const std::string& text) {
  std::vector<Letter> letters;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    std::string tok = text.substr(pos, end - pos);
    if (tok.size() < 2 || (tok[0] != '+' && tok[0] != '-'))
      throw ParseError("Word::parse: bad letter '" + tok + "'");
    for (size_t i = 1; i < tok.size(); ++i)
      if (tok[i] < '0' || tok[i] > '9') throw ParseError("Word::parse: bad letter '" + tok + "'");
    letters.push_back(Letter{static_cast<uint32_t>(std::stoul(tok.substr(1))),
                             tok[0] == '+' ? +1 : -1});
    pos = end + (end < text.size() ? 1 : 0);
  }
  return from_letters(letters);
}

mpz_class count_reduced_exact(uint32_t rank, size_t len) {
  if (rank == 0) throw std::invalid_argument("count_reduced_exact: rank 0");
  if (len == 0) return 1;
  mpz_class n = 2 * static_cast<long>(rank);
  mpz_class step = n - 1;
  mpz_class out = n;
  for (size_t i = 1; i < len; ++i) out *= step;
  return out;
}

mpz_class count_reduced_upto(uint32_t rank, size_t len) {
  mpz_class total = 0;
  for (size_t m = 0; m <= len; ++m) total += count_reduced_exact(rank, m);
  return total;
}

void for_each_reduced(uint32_t rank, size_t max_len, uint64_t budget,
                      const std::function<bool(const Word&)>& visit) {
  if (rank == 0) throw std::invalid_argument("for_each_reduced: rank 0");
  mpz_class total = count_reduced_upto(rank, max_len);
  if (total > mpz_class(static_cast<unsigned long>(budget)))
    throw BudgetExceeded("for_each_reduced: " + total.get_str() + " words exceed budget " +
                         std::to_string(budget));
  std::vector<uint32_t> stack;
  if (!visit(Word())) return;
  if (max_len == 0) return;
  uint32_t letters = 2 * rank;
  // Iterative DFS in prefix order; stack holds the current word's codes.
  stack.push_back(0);
  while (!stack.empty()) {
    uint32_t code = stack.back();
    bool valid = code < letters &&
                 (stack.size() < 2 || (stack[stack.size() - 2] ^ 1u) != code);
    if (valid) {
      if (!visit(Word::from_codes(stack))) return;
      if (stack.size() < max_len) {
        stack.push_back(0);
        continue;
      }
    }
    // Advance: move to the next sibling, popping exhausted levels.
    for (;;) {
      uint32_t next = ++stack.back();
      if (next < letters) break;
      stack.pop_back();
      if (stack.empty()) return;
    }
  }
}

std::vector<Word> enumerate_reduced(uint32_t rank, size_t max_len, uint64_t budget) {
  std::vector<Word> out;
  for_each_reduced(rank, max_len, budget, [&](const Word& w) {
    out.push_back(w);
    return true;
  });
  return out;
}

std::vector<Word> build_W(size_t ell) {
  if (ell < 2) throw std::invalid_argument("build_W: ell must be >= 2");
  // Codes over the pair alphabet: 0 = g0, 1 = g0^-1, 2 = g1, 3 = g1^-1.
  std::vector<Word> out;
  std::vector<uint32_t> w(ell);
  w[0] = 0;
  w[ell - 1] = 2;
  std::function<void(size_t)> rec = [&](size_t pos) {
    if (pos == ell - 1) {
      if ((w[pos - 1] ^ 1u) == w[pos]) return;
      std::vector<uint32_t> doubled;
      doubled.reserve(2 * ell);
      doubled.insert(doubled.end(), w.begin(), w.end());
      doubled.insert(doubled.end(), w.begin(), w.end());
      out.push_back(Word::from_codes(std::move(doubled)));
      return;
    }
    for (uint32_t c = 0; c < 4; ++c) {
      if ((w[pos - 1] ^ 1u) == c) continue;
      w[pos] = c;
      rec(pos + 1);
    }
  };
  rec(1);
  return out;
}

Mat2 word_eval(const Word& w, const std::vector<Mat2>& gens) {
  Mat2 acc = Mat2::identity();
  for (size_t i = 0; i < w.length(); ++i) {
    Letter l = w.letter(i);
    if (l.index >= gens.size())
      throw std::invalid_argument("word_eval: letter index " + std::to_string(l.index) +
                                  " out of range for " + std::to_string(gens.size()) + " generators");
    acc = mat_mul(acc, l.sign > 0 ? gens[l.index] : mat_inv(gens[l.index]));
  }
  return acc;
}

std::vector<Mat2> word_eval_all(const std::vector<Word>& ws, const std::vector<Mat2>& gens,
                                Exec mode) {
  std::vector<Mat2> out(ws.size());
  int64_t n = static_cast<int64_t>(ws.size());
  int threads = thread_count(mode);
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
  for (int64_t i = 0; i < n; ++i) out[static_cast<size_t>(i)] = word_eval(ws[static_cast<size_t>(i)], gens);
  return out;
}

namespace {

struct ScanBest {
  bool found = false;
  std::vector<uint32_t> witness;
  uint64_t visited = 0;
};

// DFS below one root letter, keeping the running product on a stack. Only
// words strictly shorter than the best witness so far can improve the result.
void scan_root(const std::vector<Mat2>& gens, const std::vector<Mat2>& invs, uint32_t root,
               size_t depth, ScanBest& best) {
  uint32_t letters = static_cast<uint32_t>(2 * gens.size());
  std::vector<uint32_t> word;
  std::vector<Mat2> prod;
  word.reserve(depth);
  prod.reserve(depth + 1);
  prod.push_back(Mat2::identity());

  auto push = [&](uint32_t code) {
    const Mat2& g = (code & 1) ? invs[code / 2] : gens[code / 2];
    prod.push_back(mat_mul(prod.back(), g));
    word.push_back(code);
  };

  auto limit = [&]() { return best.found ? best.witness.size() - 1 : depth; };

  push(root);
  for (;;) {
    ++best.visited;
    if (prod.back().is_identity()) {
      if (!best.found || word.size() < best.witness.size() ||
          (word.size() == best.witness.size() && word < best.witness)) {
        best.found = true;
        best.witness = word;
      }
      // Backtrack: nothing below this node can be shorter.
    } else if (word.size() < limit()) {
      push(0);
      if ((word[word.size() - 2] ^ 1u) == word.back()) {
        // First child backtracks over the alphabet start; advance below.
      } else {
        continue;
      }
    }
    // Advance to the next sibling / ancestor sibling.
    for (;;) {
      uint32_t next = word.back() + 1;
      word.pop_back();
      prod.pop_back();
      if (word.empty()) return;  // root letter is fixed per scan
      while (next < letters && (word.back() ^ 1u) == next) ++next;
      if (next < letters) {
        push(next);
        break;
      }
    }
  }
}

}  // namespace

FreenessResult freeness_certificate(const std::vector<Mat2>& gens, size_t depth, uint64_t budget,
                                    Exec mode) {
  if (gens.empty()) throw std::invalid_argument("freeness_certificate: no generators");
  uint32_t rank = static_cast<uint32_t>(gens.size());
  mpz_class total = count_reduced_upto(rank, depth) - 1;
  if (total > mpz_class(static_cast<unsigned long>(budget)))
    throw BudgetExceeded("freeness_certificate: " + total.get_str() + " words exceed budget " +
                         std::to_string(budget));

  std::vector<Mat2> invs;
  invs.reserve(gens.size());
  for (const Mat2& g : gens) invs.push_back(mat_inv(g));

  uint32_t letters = 2 * rank;
  std::vector<ScanBest> roots(letters);
  if (depth >= 1) {
    int threads = thread_count(mode);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (uint32_t r = 0; r < letters; ++r) scan_root(gens, invs, r, depth, roots[r]);
  }

  FreenessResult res;
  res.depth = depth;
  for (const ScanBest& b : roots) {
    res.words_checked += b.visited;
    if (!b.found) continue;
    Word cand = Word::from_codes(b.witness);
    if (res.pass || cand < res.witness) {
      res.pass = false;
      res.witness = cand;
    }
  }
  return res;
}

std::vector<Rational> kesten_distribution(uint32_t k, uint32_t t) {
  if (k == 0) throw std::invalid_argument("kesten_distribution: rank 0");
  Rational back(1, 2 * static_cast<long long>(k));
  Rational fwd = Rational(1) - back;
  std::vector<Rational> p(t + 1, Rational(0));
  p[0] = Rational(1);
  for (uint32_t step = 0; step < t; ++step) {
    std::vector<Rational> q(t + 1, Rational(0));
    for (uint32_t m = 0; m <= step; ++m) {
      if (p[m].is_zero()) continue;
      if (m == 0) {
        q[1] += p[0];
      } else {
        q[m - 1] += p[m] * back;
        if (m + 1 <= t) q[m + 1] += p[m] * fwd;
      }
    }
    p.swap(q);
  }
  return p;
}

Rational kesten_return_prob(uint32_t k, uint32_t t) { return kesten_distribution(k, t)[0]; }

}  // namespace monex
