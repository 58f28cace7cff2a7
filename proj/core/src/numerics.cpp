#include "skelet17/numerics.hpp"

#include <bit>

namespace skelet17 {

Int checked_add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw OverflowError("integer overflow in " + std::to_string(a) + " + " +
                        std::to_string(b));
  }
  return r;
}

Int checked_sub(Int a, Int b) {
  Int r;
  if (__builtin_sub_overflow(a, b, &r)) {
    throw OverflowError("integer overflow in " + std::to_string(a) + " - " +
                        std::to_string(b));
  }
  return r;
}

Int checked_mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw OverflowError("integer overflow in " + std::to_string(a) + " * " +
                        std::to_string(b));
  }
  return r;
}

Int pow2(int e) {
  if (e < 0 || e > 62) {
    throw OverflowError("2^" + std::to_string(e) + " outside checked range");
  }
  return Int{1} << e;
}

Int half_up_q(Int a, int j) {
  if (a < 0 || j < 0) {
    throw std::domain_error("half_up_q requires a >= 0, j >= 0");
  }
  if (j == 0) return a;
  if (j > 62) return 0;  // a < 2^63 <= 2^(j-1), so the quotient rounds to 0
  // (a + 2^(j-1)) may not fit a signed word when j = 63-ish; a is bounded by
  // the checked add.
  return checked_add(a, Int{1} << (j - 1)) >> j;
}

Int d_j(int j, Int a, Int b) {
  const Int qa = half_up_q(a, j);
  const Int qb = half_up_q(b, j);
  return qa >= qb ? qa - qb : qb - qa;
}

int nu2(Int n) {
  if (n < 1) {
    throw std::domain_error("nu2 undefined for n = " + std::to_string(n));
  }
  return std::countr_zero(static_cast<std::uint64_t>(n));
}

int gray_digit(Int n, int i) {
  return static_cast<int>(half_up_q(n, i) & 1);
}

Int gray_decode(std::span<const std::uint8_t> digits) {
  const std::size_t len = digits.size();
  if (len > 62) {
    throw OverflowError("gray_decode: digit string longer than checked range");
  }
  // digits[t] is Gray digit t+1, i.e. standard Gray bit t of the result.
  Int n = 0;
  int bit = 0;
  for (std::size_t t = len; t-- > 0;) {
    bit ^= digits[t] & 1;
    if (bit) n |= Int{1} << t;
  }
  return n;
}

}  // namespace skelet17
