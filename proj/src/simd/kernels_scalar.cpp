#include <algorithm>
#include <cmath>

#include "gmetric/simd.hpp"

namespace gmetric::simd::detail {
namespace {

void distance_row(const double* coords, std::size_t n_points, std::size_t dim,
                  std::size_t i, Norm norm, double* out) {
  for (std::size_t j = 0; j < n_points; ++j) {
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
  double acc = 0.0;
  for (std::size_t i = 0; i < count; ++i) acc += values[i];
  return acc;
}

double reduce_max(const double* values, std::size_t count) {
  double acc = count ? values[0] : 0.0;
  for (std::size_t i = 1; i < count; ++i) acc = std::max(acc, values[i]);
  return acc;
}

double reduce_min(const double* values, std::size_t count) {
  double acc = count ? values[0] : 0.0;
  for (std::size_t i = 1; i < count; ++i) acc = std::min(acc, values[i]);
  return acc;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Backend::scalar, distance_row, reduce_sum, reduce_max,
                                 reduce_min};
  return table;
}

}  // namespace gmetric::simd::detail
