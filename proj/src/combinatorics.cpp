#include "gmetric/combinatorics.hpp"

namespace gmetric::combinatorics {

std::uint64_t multichoose(std::uint64_t n, std::uint64_t k) {
  if (k == 0) return 1;
  if (n == 0) return 0;
  // C(n + k - 1, k) with the smaller of k and n - 1 as the loop bound.
  const std::uint64_t top = n + k - 1;
  std::uint64_t r = k < n - 1 ? k : n - 1;
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= r; ++i) result = result * (top - r + i) / i;
  return result;
}

std::uint64_t ipow(std::uint64_t base, unsigned exponent) {
  std::uint64_t out = 1;
  while (exponent--) out *= base;
  return out;
}

}  // namespace gmetric::combinatorics
