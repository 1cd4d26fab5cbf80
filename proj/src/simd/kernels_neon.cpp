// aarch64 variant; two doubles per register.
#include <arm_neon.h>

#include <algorithm>
#include <cmath>

#include "gmetric/simd.hpp"

namespace gmetric::simd::detail {
namespace {

void distance_row(const double* coords, std::size_t n_points, std::size_t dim,
                  std::size_t i, Norm norm, double* out) {
  std::size_t j = 0;
  for (; j + 2 <= n_points; j += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t k = 0; k < dim; ++k) {
      const double* row = coords + k * n_points;
      const float64x2_t diff = vsubq_f64(vdupq_n_f64(row[i]), vld1q_f64(row + j));
      switch (norm) {
        case Norm::l1:
          acc = vaddq_f64(acc, vabsq_f64(diff));
          break;
        case Norm::l2:
          acc = vaddq_f64(acc, vmulq_f64(diff, diff));
          break;
        case Norm::linf:
          acc = vmaxq_f64(acc, vabsq_f64(diff));
          break;
      }
    }
    if (norm == Norm::l2) acc = vsqrtq_f64(acc);
    vst1q_f64(out + j, acc);
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

double reduce_sum(const double* values, std::size_t count) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= count; i += 2) acc = vaddq_f64(acc, vld1q_f64(values + i));
  double total = vaddvq_f64(acc);
  for (; i < count; ++i) total += values[i];
  return total;
}

double reduce_max(const double* values, std::size_t count) {
  if (count == 0) return 0.0;
  double acc = values[0];
  std::size_t i = 1;
  if (count >= 2) {
    float64x2_t v = vld1q_f64(values);
    for (i = 2; i + 2 <= count; i += 2) v = vmaxq_f64(v, vld1q_f64(values + i));
    acc = vmaxvq_f64(v);
  }
  for (; i < count; ++i) acc = std::max(acc, values[i]);
  return acc;
}

double reduce_min(const double* values, std::size_t count) {
  if (count == 0) return 0.0;
  double acc = values[0];
  std::size_t i = 1;
  if (count >= 2) {
    float64x2_t v = vld1q_f64(values);
    for (i = 2; i + 2 <= count; i += 2) v = vminq_f64(v, vld1q_f64(values + i));
    acc = vminvq_f64(v);
  }
  for (; i < count; ++i) acc = std::min(acc, values[i]);
  return acc;
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable table{Backend::neon, distance_row, reduce_sum, reduce_max,
                                 reduce_min};
  return table;
}

}  // namespace gmetric::simd::detail
