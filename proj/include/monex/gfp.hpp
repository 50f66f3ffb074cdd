#pragma once

#include <cstdint>
#include <vector>

namespace monex {

bool is_prime_u16(uint32_t p);

// x^-1 mod p for prime p and x != 0 mod p.
uint16_t gfp_inv(uint16_t x, uint16_t p);

// Rank of a row-major rows x cols matrix with entries already reduced mod p.
// Destroys the buffer (Gaussian elimination, partial pivoting by first
// nonzero). p must be prime and fit 16 bits.
uint32_t gfp_rank(std::vector<uint16_t>& a, uint32_t rows, uint32_t cols, uint16_t p);

}  // namespace monex
