#pragma once
// Ground sets, base metrics, point tuples and the g-metric evaluation
// interface shared by every other module.

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gmetric/error.hpp"

namespace gmetric {

using PointIndex = std::size_t;

enum class MetricSource { euclidean, l1, linf, explicit_matrix };

std::string_view to_string(MetricSource source);

// Row-major square matrix of base distances.
struct DistanceMatrix {
  std::size_t side = 0;
  std::vector<double> values;

  double operator()(std::size_t i, std::size_t j) const { return values[i * side + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values[i * side + j]; }

  static DistanceMatrix from_rows(const std::vector<std::vector<double>>& rows);
};

// Checks applied to explicit matrices when a sample is built.
enum class MatrixCheck {
  metric,  // square, symmetric, zero diagonal, nonnegative, triangle inequality
  shape,   // square and finite only; used to audit deliberately broken matrices
};

/// A finite indexed point set together with its base metric.
///
/// Points are either real vectors of a common dimension or opaque labels.
/// Labels need an explicit matrix. The full distance matrix is computed once
/// at construction; the sample is immutable afterwards.
class GroundSample {
 public:
  static GroundSample from_points(std::vector<std::vector<double>> points, MetricSource metric);
  static GroundSample from_scalars(std::span<const double> values,
                                   MetricSource metric = MetricSource::l1);
  static GroundSample from_matrix(DistanceMatrix matrix, MatrixCheck check = MatrixCheck::metric,
                                  std::vector<std::string> labels = {});
  // Vector points whose distances come from an explicit matrix.
  static GroundSample from_points_and_matrix(std::vector<std::vector<double>> points,
                                             DistanceMatrix matrix,
                                             MatrixCheck check = MatrixCheck::metric);

  std::size_t size() const noexcept { return size_; }
  MetricSource metric() const noexcept { return metric_; }
  bool has_coordinates() const noexcept { return dimension_ > 0; }
  // 0 for label samples.
  std::size_t dimension() const noexcept { return dimension_; }

  // Unchecked accessors for hot loops; indices must be < size().
  double distance(PointIndex i, PointIndex j) const noexcept {
    return distances_.values[i * size_ + j];
  }
  double coordinate(PointIndex i, std::size_t k) const noexcept {
    return coords_[k * size_ + i];
  }

  std::vector<double> point(PointIndex i) const;
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const DistanceMatrix& distances() const noexcept { return distances_; }

 private:
  GroundSample() = default;

  std::size_t size_ = 0;
  std::size_t dimension_ = 0;
  MetricSource metric_ = MetricSource::euclidean;
  std::vector<double> coords_;  // coordinate-major, see simd.hpp
  std::vector<std::string> labels_;
  DistanceMatrix distances_;
};

// Parses the ground-sample JSON document:
//   {"points": [[f64,...],...] | ["label",...],
//    "metric": "euclidean" | "l1" | "linf" | {"matrix": [[f64,...],...]}}
GroundSample load_ground_sample(std::string_view document);
GroundSample load_ground_sample_file(const std::filesystem::path& path);

// Validation result for a candidate metric matrix; names a witness when it fails.
struct MetricCheckResult {
  bool ok = true;
  std::string reason;
  std::vector<std::size_t> witness;
};
MetricCheckResult check_metric_matrix(const DistanceMatrix& matrix, double tolerance = 1e-12);

double base_distance(const GroundSample& sample, PointIndex i, PointIndex j);

/// Ordered (n+1)-tuple of point indices.
class PointTuple {
 public:
  PointTuple(std::vector<PointIndex> indices, int order);
  explicit PointTuple(std::vector<PointIndex> indices);  // order = size - 1

  int order() const noexcept { return order_; }
  const std::vector<PointIndex>& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }

  // Sorted copy of the indices; the form construction kernels consume.
  std::vector<PointIndex> canonical() const;
  // Distinct indices, ascending.
  std::vector<PointIndex> support() const;

  bool operator==(const PointTuple&) const = default;

 private:
  std::vector<PointIndex> indices_;
  int order_;
};

// Block split for the split triangle inequality: blocks of s+1 and t+1 points
// plus the mediator w, with s + t + 1 = order.
struct SplitSpec {
  int s = 0;
  int t = 0;
  PointIndex w_index = 0;

  bool valid_for(int order) const noexcept { return s >= 0 && t >= 0 && s + t + 1 == order; }
};

enum class ConstructionKind {
  base,
  discrete,
  diameter,
  norm_diameter,
  average,
  max,
  shortest_path,
  enclosing_ball,
  non_mi,
  sum,
  transform,
};

std::string_view to_string(ConstructionKind kind);
std::optional<ConstructionKind> construction_kind_from_string(std::string_view name);

// What the catalog claims about a construction. The verifier compares these
// claims against what it observes.
struct Claims {
  bool gmetric = true;                   // proven to satisfy (g1)-(g4)
  bool conjectural = false;              // open problem; audits gather evidence only
  bool multiplicity_independent = true;  // value depends on the support only
};

// Construction kernel interface. Kernels receive indices sorted ascending.
class GMetricKernel {
 public:
  virtual ~GMetricKernel() = default;
  virtual double eval(const GroundSample& sample, std::span<const PointIndex> sorted) const = 0;
  // Throws Error(incompatible_sample) when the sample cannot be evaluated.
  virtual void check_sample(const GroundSample& sample) const = 0;
  virtual std::string describe() const = 0;
};

/// An order-n functional on (n+1)-tuples of sample points.
///
/// Cheap to copy; shares an immutable kernel. Safe to evaluate concurrently.
class GMetric {
 public:
  GMetric(int order, ConstructionKind kind, Claims claims,
          std::shared_ptr<const GMetricKernel> kernel);

  int order() const noexcept { return order_; }
  ConstructionKind kind() const noexcept { return kind_; }
  const Claims& claims() const noexcept { return claims_; }
  std::string describe() const { return kernel_->describe(); }

  // Validated evaluation: checks order, indices and sample compatibility,
  // then canonicalizes by sorting.
  double evaluate(const GroundSample& sample, const PointTuple& tuple) const;

  // Hot-path evaluation; `sorted` must be ascending, in range, of length
  // order()+1, on a sample that passed check_sample().
  double evaluate_sorted(const GroundSample& sample, std::span<const PointIndex> sorted) const {
    return kernel_->eval(sample, sorted);
  }

  // Evaluation on arbitrary indices (any order); sorts into a small buffer.
  double evaluate_indices(const GroundSample& sample, std::span<const PointIndex> indices) const;

  void check_sample(const GroundSample& sample) const { kernel_->check_sample(sample); }

  const std::shared_ptr<const GMetricKernel>& kernel() const noexcept { return kernel_; }

 private:
  int order_;
  ConstructionKind kind_;
  Claims claims_;
  std::shared_ptr<const GMetricKernel> kernel_;
};

double evaluate(const GMetric& g, const GroundSample& sample, const PointTuple& tuple);

// Evaluates g on free coordinate points (iterates of a map, perturbed tuples).
// Points are sorted lexicographically first, so the value does not depend on
// the order they are passed in.
double evaluate_points(const GMetric& g, std::span<const std::vector<double>> points,
                       MetricSource metric);

}  // namespace gmetric
