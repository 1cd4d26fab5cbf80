#pragma once
// Catalog of concrete g-metrics and the sum / increasing-subadditive-transform
// combinators.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gmetric/core.hpp"

namespace gmetric {

// Largest tuple the shortest-path construction will enumerate ((n+1)! paths).
inline constexpr int kShortestPathMaxPoints = 9;

// The base metric itself as an order-1 functional: g(x, y) = delta(x, y).
GMetric make_base_metric();

// 0 on constant tuples, 1 otherwise.
GMetric make_discrete(int order);

// max x_i - min x_j on scalar samples.
GMetric make_diameter(int order);

// max ||x_i|| - min ||x_j||. Not a g-metric: distinct points of equal norm
// evaluate to 0. Kept as a known-failing fixture for the verifier.
GMetric make_norm_diameter(int order);

// (n+1)^-2 * sum over ordered pairs (i, j), diagonal included, of delta(x_i, x_j).
GMetric make_average(int order);

// max over pairs of delta(x_i, x_j).
GMetric make_max(int order);

// Length of the shortest path visiting every tuple entry, by enumerating all
// orderings. Proven for order <= 2; conjectural above.
GMetric make_shortest_path(int order);

// Diameter of the smallest closed Euclidean ball containing the tuple's points
// (dimension <= 3). Conjectural for order >= 3.
GMetric make_enclosing_ball(int order);

// Order-2 functional on a two-point labeled sample {x, y}:
// G(x,x,y) = 1, G(x,y,y) = 2, zero on constant tuples. A valid g-metric that
// is not multiplicity-independent.
GMetric make_non_mi();

GMetric make_construction(ConstructionKind kind, int order);

GMetric sum_gmetrics(const GMetric& a, const GMetric& b);

struct TransformSpec {
  enum class Kind {
    scale,    // k * x, k > 0
    bounded,  // x / (1 + x)
    root,     // x^(1/p), p >= 1
    log1p,    // log(1 + x)
    clamp,    // min(k, x), k > 0
  };
  Kind kind = Kind::scale;
  double parameter = 1.0;

  // Throws Error(invalid_parameter) on an out-of-range parameter.
  void validate() const;
  double apply(double x) const;
};

std::string_view to_string(TransformSpec::Kind kind);
TransformSpec::Kind transform_kind_from_string(std::string_view name);

GMetric transform_gmetric(const GMetric& g, TransformSpec psi);

// Builds a g-metric from the construction-spec JSON document:
//   {"kind": ..., "order": n, "transforms": [{"kind": ..., "param": ...}],
//    "sum_with": <nested spec>}
// Transforms apply to this level's construction before the nested sum is added.
GMetric parse_construction_spec(std::string_view document);

// Minimal enclosing ball of a point cloud (randomized incremental algorithm).
struct Ball {
  std::vector<double> center;
  double radius = 0.0;
};
Ball min_enclosing_ball(std::span<const std::vector<double>> points);

}  // namespace gmetric
