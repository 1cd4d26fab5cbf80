// Compiled with -mavx2 only; reached through the dispatcher after a CPU check.
#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "gmetric/simd.hpp"

namespace gmetric::simd::detail {
namespace {

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

// Four targets per step; each lane accumulates coordinates in the same order
// as the scalar loop, so results match it bit for bit.
void distance_row(const double* coords, std::size_t n_points, std::size_t dim,
                  std::size_t i, Norm norm, double* out) {
  std::size_t j = 0;
  for (; j + 4 <= n_points; j += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < dim; ++k) {
      const double* row = coords + k * n_points;
      const __m256d diff = _mm256_sub_pd(_mm256_set1_pd(row[i]), _mm256_loadu_pd(row + j));
      switch (norm) {
        case Norm::l1:
          acc = _mm256_add_pd(acc, abs_pd(diff));
          break;
        case Norm::l2:
          acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
          break;
        case Norm::linf:
          acc = _mm256_max_pd(acc, abs_pd(diff));
          break;
      }
    }
    if (norm == Norm::l2) acc = _mm256_sqrt_pd(acc);
    _mm256_storeu_pd(out + j, acc);
  }
  for (; j < n_points; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double* row = coords + k * n_points;
      const double diff = row[i] - row[j];
      switch (norm) {
        case Norm::l1:
          acc = acc + std::fabs(diff);
          break;
        case Norm::l2:
          acc = acc + diff * diff;
          break;
        case Norm::linf:
          acc = std::max(acc, std::fabs(diff));
          break;
      }
    }
    out[j] = norm == Norm::l2 ? std::sqrt(acc) : acc;
  }
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double reduce_sum(const double* values, std::size_t count) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(values + i));
  double total = hsum(acc);
  for (; i < count; ++i) total += values[i];
  return total;
}

template <class VecOp, class ScalarOp>
double reduce_extreme(const double* values, std::size_t count, VecOp vec_op, ScalarOp op) {
  if (count == 0) return 0.0;
  if (count < 4) {
    double acc = values[0];
    for (std::size_t i = 1; i < count; ++i) acc = op(acc, values[i]);
    return acc;
  }
  __m256d acc = _mm256_loadu_pd(values);
  std::size_t i = 4;
  for (; i + 4 <= count; i += 4) acc = vec_op(acc, _mm256_loadu_pd(values + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double result = op(op(lanes[0], lanes[1]), op(lanes[2], lanes[3]));
  for (; i < count; ++i) result = op(result, values[i]);
  return result;
}

double reduce_max(const double* values, std::size_t count) {
  return reduce_extreme(
      values, count, [](__m256d a, __m256d b) { return _mm256_max_pd(a, b); },
      [](double a, double b) { return std::max(a, b); });
}

double reduce_min(const double* values, std::size_t count) {
  return reduce_extreme(
      values, count, [](__m256d a, __m256d b) { return _mm256_min_pd(a, b); },
      [](double a, double b) { return std::min(a, b); });
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{Backend::avx2, distance_row, reduce_sum, reduce_max,
                                 reduce_min};
  return table;
}

}  // namespace gmetric::simd::detail
