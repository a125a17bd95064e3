#include "starfield/symbols/combinatorics.hpp"

#include <limits>
#include <stdexcept>

namespace starfield::symbols {
namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    throw std::overflow_error("combinatorial value exceeds 64-bit range");
  }
  return a * b;
}

}  // namespace

std::uint64_t factorial(unsigned n) {
  std::uint64_t r = 1;
  for (unsigned k = 2; k <= n; ++k) r = checked_mul(r, k);
  return r;
}

std::uint64_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    // r * (n - k + i) is divisible by i at every step.
    r = checked_mul(r, n - k + i) / i;
  }
  return r;
}

std::uint64_t falling_factorial(unsigned n, unsigned k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (unsigned i = 0; i < k; ++i) r = checked_mul(r, n - i);
  return r;
}

std::uint64_t multi_factorial(std::span<const unsigned> orders) {
  std::uint64_t r = 1;
  for (unsigned m : orders) r = checked_mul(r, factorial(m));
  return r;
}

}  // namespace starfield::symbols
