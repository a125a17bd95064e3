#pragma once

#include <cstdint>
#include <span>

namespace starfield::symbols {

// Integer combinatorics; throws std::overflow_error past uint64 range.
std::uint64_t factorial(unsigned n);
std::uint64_t binomial(unsigned n, unsigned k);
std::uint64_t falling_factorial(unsigned n, unsigned k);

// Product of factorials over a multi-index.
std::uint64_t multi_factorial(std::span<const unsigned> orders);

}  // namespace starfield::symbols
