#include "monex/gfp.hpp"

#include <stdexcept>

#include "monex/errors.hpp"

namespace monex {

bool is_prime_u16(uint32_t p) {
  if (p < 2 || p > 65535) return false;
  if (p % 2 == 0) return p == 2;
  for (uint32_t d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

uint16_t gfp_inv(uint16_t x, uint16_t p) {
  if (!is_prime_u16(p)) throw BadPrime("gfp_inv: p must be a prime below 2^16");
  if (x % p == 0) throw std::invalid_argument("gfp_inv: zero has no inverse");
  // Fermat: x^(p-2) mod p.
  uint64_t base = x % p, acc = 1, e = p - 2;
  while (e) {
    if (e & 1) acc = acc * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<uint16_t>(acc);
}

uint32_t gfp_rank(std::vector<uint16_t>& a, uint32_t rows, uint32_t cols, uint16_t p) {
  if (!is_prime_u16(p)) throw BadPrime("gfp_rank: p must be a prime below 2^16");
  if (a.size() != static_cast<size_t>(rows) * cols)
    throw BadDimension("gfp_rank: buffer size mismatch");
  uint32_t rank = 0;
  for (uint32_t col = 0; col < cols && rank < rows; ++col) {
    uint32_t pivot = rank;
    while (pivot < rows && a[static_cast<size_t>(pivot) * cols + col] % p == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != rank)
      for (uint32_t c = col; c < cols; ++c)
        std::swap(a[static_cast<size_t>(pivot) * cols + c],
                  a[static_cast<size_t>(rank) * cols + c]);
    uint64_t inv = gfp_inv(a[static_cast<size_t>(rank) * cols + col] % p, p);
    for (uint32_t c = col; c < cols; ++c) {
      size_t idx = static_cast<size_t>(rank) * cols + c;
      a[idx] = static_cast<uint16_t>(a[idx] % p * inv % p);
    }
    for (uint32_t r = rank + 1; r < rows; ++r) {
      uint64_t f = a[static_cast<size_t>(r) * cols + col] % p;
      if (!f) continue;
      uint64_t neg = p - f;
      for (uint32_t c = col; c < cols; ++c) {
        size_t idx = static_cast<size_t>(r) * cols + c;
        a[idx] = static_cast<uint16_t>(
            (a[idx] + neg * a[static_cast<size_t>(rank) * cols + c]) % p);
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace monex
