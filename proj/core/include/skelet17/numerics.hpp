#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace skelet17 {

// All quantities in the process are exact integers. Desk-scale runs stay far
// below 2^63, but a silent wrap would forge a proof, so every arithmetic
// helper below checks for overflow and throws instead of wrapping.
using Int = std::int64_t;

class OverflowError : public std::runtime_error {
 public:
  explicit OverflowError(const std::string& what) : std::runtime_error(what) {}
};

Int checked_add(Int a, Int b);
Int checked_sub(Int a, Int b);
Int checked_mul(Int a, Int b);

// 2^e for e in [0, 62].
Int pow2(int e);

// <a / 2^j>: nearest integer with half-integers rounded up, in pure integer
// arithmetic. Requires a >= 0, j >= 0.
Int half_up_q(Int a, int j);

// d_j(a, b) = |<a/2^j> - <b/2^j>|. Symmetric in a and b.
Int d_j(int j, Int a, Int b);

// Largest e with 2^e | n. Requires n >= 1; n = 0 has no valuation and is a
// domain error, never a default.
int nu2(Int n);

// Digit i of the Gray code of n: <n/2^i> mod 2. Digit 0 is n mod 2; digits
// at indices >= 1 form the reflected Gray code of n shifted up one position.
int gray_digit(Int n, int i);

// Inverse of gray_digit for digits 1..l: digits[t] holds digit t+1. Returns
// the unique n in [0, 2^l) whose Gray digits at indices 1..l match.
Int gray_decode(std::span<const std::uint8_t> digits);

}  // namespace skelet17
