#pragma once
// Enumeration helpers shared by the checkers.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "gmetric/core.hpp"

namespace gmetric::combinatorics {

// Number of multisets of size k drawn from n symbols: C(n + k - 1, k).
std::uint64_t multichoose(std::uint64_t n, std::uint64_t k);

std::uint64_t ipow(std::uint64_t base, unsigned exponent);

// Calls fn(const std::vector<PointIndex>&) for every non-decreasing sequence
// of length k over [0, n). Sequences arrive in lexicographic order.
template <class Fn>
void for_each_multiset(std::size_t n, std::size_t k, Fn&& fn) {
  if (k == 0) {
    fn(std::vector<PointIndex>{});
    return;
  }
  if (n == 0) return;
  std::vector<PointIndex> seq(k, 0);
  while (true) {
    fn(static_cast<const std::vector<PointIndex>&>(seq));
    std::size_t pos = k;
    while (pos > 0 && seq[pos - 1] == n - 1) --pos;
    if (pos == 0) return;
    const PointIndex next = seq[pos - 1] + 1;
    for (std::size_t i = pos - 1; i < k; ++i) seq[i] = next;
  }
}

// Calls fn for every ordered sequence of length k over [0, n) (odometer order).
template <class Fn>
void for_each_tuple(std::size_t n, std::size_t k, Fn&& fn) {
  if (n == 0) return;
  std::vector<PointIndex> seq(k, 0);
  while (true) {
    fn(static_cast<const std::vector<PointIndex>&>(seq));
    std::size_t pos = k;
    while (pos > 0 && seq[pos - 1] == n - 1) {
      seq[pos - 1] = 0;
      --pos;
    }
    if (pos == 0) return;
    ++seq[pos - 1];
  }
}

// Uniform integer in [0, bound) from a 64-bit engine by rejection; unlike
// std::uniform_int_distribution its output is the same on every standard library.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

// Uniform real in [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// `count` copies of `a` followed by `k - count` copies of `b`.
inline std::vector<PointIndex> repeated(PointIndex a, std::size_t count, PointIndex b,
                                        std::size_t k) {
  std::vector<PointIndex> out(k, b);
  for (std::size_t i = 0; i < count && i < k; ++i) out[i] = a;
  return out;
}

}  // namespace gmetric::combinatorics
