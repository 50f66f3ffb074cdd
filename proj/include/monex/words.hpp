#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "monex/exec.hpp"
#include "monex/mat2.hpp"

namespace monex {

// One signed generator occurrence. Packed code = 2*index + (sign < 0);
// the inverse letter is code ^ 1, so codes order as g0, g0^-1, g1, g1^-1, ...
struct Letter {
  uint32_t index;
  int sign;  // +1 or -1

  uint32_t code() const { return 2 * index + (sign < 0 ? 1u : 0u); }
  static Letter from_code(uint32_t c) { return Letter{c / 2, (c & 1) ? -1 : +1}; }
  Letter inverse() const { return Letter{index, -sign}; }

  friend bool operator==(const Letter& x, const Letter& y) {
    return x.index == y.index && x.sign == y.sign;
  }
};

// Freely reduced word. The reduced invariant is structural: construction
// rejects adjacent inverse pairs, so [g g^-1] is not representable.
class Word {
 public:
  Word() = default;

  static Word from_letters(const std::vector<Letter>& letters);
  static Word from_codes(std::vector<uint32_t> codes);

  // Reduces at the seam only; u and v are already reduced.
  friend Word concat_reduce(const Word& u, const Word& v);

  Word inverse() const;

  size_t length() const { return codes_.size(); }
  bool empty() const { return codes_.empty(); }
  const std::vector<uint32_t>& codes() const { return codes_; }
  Letter letter(size_t i) const { return Letter::from_code(codes_[i]); }
  uint32_t max_index() const;

  // Text form "+0,-1,+0"; the empty word serializes to the empty string.
  std::string str() const;
  static Word parse(const std::string& text);

  friend bool operator==(const Word& x, const Word& y) { return x.codes_ == y.codes_; }
  friend bool operator!=(const Word& x, const Word& y) { return !(x == y); }
  // (length, codes) order: shorter first, then lexicographic by code.
  friend bool operator<(const Word& x, const Word& y) {
    if (x.codes_.size() != y.codes_.size()) return x.codes_.size() < y.codes_.size();
    return x.codes_ < y.codes_;
  }

 private:
  std::vector<uint32_t> codes_;
};

// Number of reduced words of length exactly len over `rank` free generators.
mpz_class count_reduced_exact(uint32_t rank, size_t len);
// Number of reduced words of length <= len, empty word included.
mpz_class count_reduced_upto(uint32_t rank, size_t len);

// Visits every reduced word of length <= max_len in depth-first prefix order
// (empty word first). Throws BudgetExceeded upfront if the total count would
// exceed `budget`. Return false from the visitor to stop early.
void for_each_reduced(uint32_t rank, size_t max_len, uint64_t budget,
                      const std::function<bool(const Word&)>& visit);

std::vector<Word> enumerate_reduced(uint32_t rank, size_t max_len, uint64_t budget);

// Doubled admissible words over a free pair (indices 0 and 1): w = s1..sl with
// s1 = g0, sl = g1, no backtracking; the result lists w*w, reduced, length 2l,
// in lexicographic order of w. Requires ell >= 2.
std::vector<Word> build_W(size_t ell);

// Matrices assigned by position: letter index i evaluates to gens[i].
Mat2 word_eval(const Word& w, const std::vector<Mat2>& gens);

// Batch evaluation; entries are independent, so the parallel path is
// bit-identical to the serial one.
std::vector<Mat2> word_eval_all(const std::vector<Word>& ws, const std::vector<Mat2>& gens,
                                Exec mode = Exec::parallel);

struct FreenessResult {
  bool pass = true;
  Word witness;             // shortest identity word when !pass (ties: lex least)
  size_t depth = 0;         // search depth L that was certified
  uint64_t words_checked = 0;
};

// Exhaustively checks every nonempty reduced word of length <= depth over the
// given matrices for evaluating to the identity. Pass is only a certificate up
// to this depth, never a proof of freeness.
FreenessResult freeness_certificate(const std::vector<Mat2>& gens, size_t depth,
                                    uint64_t budget, Exec mode = Exec::parallel);

// Exact distribution of distance-from-origin for the simple random walk on a
// free group of rank k (uniform over the 2k letters each step), after t steps.
// Entry m is the probability of being at distance m.
std::vector<Rational> kesten_distribution(uint32_t k, uint32_t t);

// Exact return probability p^(t)(e,e); zero for odd t.
Rational kesten_return_prob(uint32_t k, uint32_t t);

}  // namespace monex
