#include "gmetric/simd.hpp"

namespace gmetric::simd {

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
    case Backend::neon:
      return "neon";
  }
  return "unknown";
}

const KernelTable* kernels_for(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return &detail::scalar_table();
    case Backend::avx2:
#if defined(GMETRIC_BUILD_AVX2)
      if (__builtin_cpu_supports("avx2")) return &detail::avx2_table();
#endif
      return nullptr;
    case Backend::neon:
#if defined(GMETRIC_BUILD_NEON)
      return &detail::neon_table();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const KernelTable& active_kernels() {
  static const KernelTable& table = [] () -> const KernelTable& {
    for (Backend b : {Backend::avx2, Backend::neon}) {
      if (const KernelTable* t = kernels_for(b)) return *t;
    }
    return detail::scalar_table();
  }();
  return table;
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon}) {
    if (kernels_for(b)) out.push_back(b);
  }
  return out;
}

double sum(std::span<const double> values) {
  return active_kernels().reduce_sum(values.data(), values.size());
}

double max(std::span<const double> values) {
  return active_kernels().reduce_max(values.data(), values.size());
}

double min(std::span<const double> values) {
  return active_kernels().reduce_min(values.data(), values.size());
}

std::vector<double> distance_matrix(std::span<const double> coords, std::size_t n_points,
                                    std::size_t dim, Norm norm, const KernelTable& table) {
  std::vector<double> out(n_points * n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    table.distance_row(coords.data(), n_points, dim, i, norm, out.data() + i * n_points);
  }
  return out;
}

}  // namespace gmetric::simd
