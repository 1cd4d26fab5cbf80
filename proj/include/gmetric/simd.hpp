#pragma once
// Data-parallel inner loops behind the distance matrix and the pairwise
// reductions used by the max/average/diameter constructions.
//
// Every kernel exists as a scalar reference and, where the build and the CPU
// allow it, as an AVX2 (x86-64) or NEON (aarch64) variant. The active table is
// picked once at first use from the CPU feature set.
//
// Equivalence contract between backends:
//   distance_row, reduce_max, reduce_min  bit-identical
//   reduce_sum                            equal up to summation order

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace gmetric::simd {

enum class Norm { l1, l2, linf };

enum class Backend { scalar, avx2, neon };

std::string_view backend_name(Backend backend);

// Points are stored coordinate-major: coords[k * n_points + j] is coordinate k
// of point j. That layout lets the vector variants process several targets j
// per instruction.
struct KernelTable {
  Backend backend;
  // out[j] = ||p_i - p_j|| for every j in [0, n_points).
  void (*distance_row)(const double* coords, std::size_t n_points, std::size_t dim,
                       std::size_t i, Norm norm, double* out);
  double (*reduce_sum)(const double* values, std::size_t count);
  double (*reduce_max)(const double* values, std::size_t count);
  double (*reduce_min)(const double* values, std::size_t count);
};

// Table for `backend`, or nullptr when it was not compiled in or the CPU
// lacks the instructions.
const KernelTable* kernels_for(Backend backend);

// Best available table. Never null.
const KernelTable& active_kernels();

std::vector<Backend> available_backends();

// Convenience wrappers over active_kernels().
double sum(std::span<const double> values);
double max(std::span<const double> values);
double min(std::span<const double> values);

// Full symmetric distance matrix (row-major, n x n) for coordinate-major points.
std::vector<double> distance_matrix(std::span<const double> coords, std::size_t n_points,
                                    std::size_t dim, Norm norm,
                                    const KernelTable& table = active_kernels());

namespace detail {
// Per-backend entry points; defined in kernels_<backend>.cpp.
const KernelTable& scalar_table();
#if defined(GMETRIC_BUILD_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(GMETRIC_BUILD_NEON)
const KernelTable& neon_table();
#endif
}  // namespace detail

}  // namespace gmetric::simd
