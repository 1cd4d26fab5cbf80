#include "gmetric/core.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gmetric/simd.hpp"
#include "json.hpp"

namespace gmetric {

namespace {

using nlohmann::json;

simd::Norm norm_for(MetricSource source) {
  switch (source) {
    case MetricSource::l1:
      return simd::Norm::l1;
    case MetricSource::linf:
      return simd::Norm::linf;
    default:
      return simd::Norm::l2;
  }
}

std::string describe_triple(std::size_t a, std::size_t b, std::size_t c) {
  std::ostringstream os;
  os << "(" << a << "," << b << "," << c << ")";
  return os.str();
}

void require_valid_matrix(const DistanceMatrix& matrix, MatrixCheck check) {
  if (matrix.values.size() != matrix.side * matrix.side) {
    throw Error(ErrorCode::invalid_sample, "distance matrix is not square");
  }
  for (double v : matrix.values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::invalid_sample, "distance matrix has a non-finite entry");
  }
  if (check == MatrixCheck::shape) return;
  const MetricCheckResult result = check_metric_matrix(matrix);
  if (!result.ok) throw Error(ErrorCode::invalid_sample, result.reason);
}

}  // namespace

std::string_view to_string(MetricSource source) {
  switch (source) {
    case MetricSource::euclidean:
      return "euclidean";
    case MetricSource::l1:
      return "l1";
    case MetricSource::linf:
      return "linf";
    case MetricSource::explicit_matrix:
      return "matrix";
  }
  return "unknown";
}

DistanceMatrix DistanceMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  DistanceMatrix m;
  m.side = rows.size();
  m.values.reserve(m.side * m.side);
  for (const auto& row : rows) {
    if (row.size() != m.side) throw Error(ErrorCode::invalid_sample, "distance matrix is not square");
    m.values.insert(m.values.end(), row.begin(), row.end());
  }
  return m;
}

MetricCheckResult check_metric_matrix(const DistanceMatrix& m, double tolerance) {
  const std::size_t n = m.side;
  for (std::size_t i = 0; i < n; ++i) {
    if (m(i, i) != 0.0) {
      return {false, "nonzero diagonal entry at " + std::to_string(i), {i}};
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (m(i, j) < 0.0) {
        return {false, "negative entry at (" + std::to_string(i) + "," + std::to_string(j) + ")",
                {i, j}};
      }
      if (m(i, j) != m(j, i)) {
        return {false, "asymmetric entry at (" + std::to_string(i) + "," + std::to_string(j) + ")",
                {i, j}};
      }
      if (i != j && m(i, j) == 0.0) {
        return {false,
                "zero distance between distinct points " + std::to_string(i) + " and " +
                    std::to_string(j),
                {i, j}};
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        const double lhs = m(i, k);
        const double rhs = m(i, j) + m(j, k);
        if (lhs - rhs > tolerance * std::max({1.0, lhs, rhs})) {
          return {false, "triangle inequality violated at " + describe_triple(i, j, k), {i, j, k}};
        }
      }
    }
  }
  return {};
}

GroundSample GroundSample::from_points(std::vector<std::vector<double>> points,
                                       MetricSource metric) {
  if (metric == MetricSource::explicit_matrix) {
    throw Error(ErrorCode::invalid_sample, "explicit matrix metric needs a matrix");
  }
  if (points.empty()) throw Error(ErrorCode::invalid_sample, "sample has no points");
  const std::size_t dim = points.front().size();
  if (dim == 0) throw Error(ErrorCode::invalid_sample, "points have dimension 0");

  GroundSample s;
  s.size_ = points.size();
  s.dimension_ = dim;
  s.metric_ = metric;
  s.coords_.resize(dim * s.size_);
  for (std::size_t j = 0; j < s.size_; ++j) {
    if (points[j].size() != dim) {
      throw Error(ErrorCode::invalid_sample,
                  "point " + std::to_string(j) + " has dimension " +
                      std::to_string(points[j].size()) + ", expected " + std::to_string(dim));
    }
    for (std::size_t k = 0; k < dim; ++k) {
      const double v = points[j][k];
      if (!std::isfinite(v)) throw Error(ErrorCode::invalid_sample, "non-finite coordinate");
      s.coords_[k * s.size_ + j] = v + 0.0;  // folds -0.0 into +0.0
    }
  }
  s.distances_.side = s.size_;
  s.distances_.values = simd::distance_matrix(s.coords_, s.size_, dim, norm_for(metric));
  for (std::size_t i = 0; i < s.size_; ++i) {
    for (std::size_t j = i + 1; j < s.size_; ++j) {
      if (s.distances_(i, j) == 0.0) {
        throw Error(ErrorCode::invalid_sample, "duplicate points " + std::to_string(i) + " and " +
                                                   std::to_string(j));
      }
    }
  }
  return s;
}

GroundSample GroundSample::from_scalars(std::span<const double> values, MetricSource metric) {
  std::vector<std::vector<double>> points;
  points.reserve(values.size());
  for (double v : values) points.push_back({v});
  return from_points(std::move(points), metric);
}

GroundSample GroundSample::from_matrix(DistanceMatrix matrix, MatrixCheck check,
                                       std::vector<std::string> labels) {
  if (matrix.side == 0) throw Error(ErrorCode::invalid_sample, "sample has no points");
  require_valid_matrix(matrix, check);
  if (labels.empty()) {
    for (std::size_t i = 0; i < matrix.side; ++i) labels.push_back(std::to_string(i));
  }
  if (labels.size() != matrix.side) {
    throw Error(ErrorCode::invalid_sample, "label count does not match matrix side");
  }
  GroundSample s;
  s.size_ = matrix.side;
  s.metric_ = MetricSource::explicit_matrix;
  s.labels_ = std::move(labels);
  s.distances_ = std::move(matrix);
  return s;
}

GroundSample GroundSample::from_points_and_matrix(std::vector<std::vector<double>> points,
                                                  DistanceMatrix matrix, MatrixCheck check) {
  if (points.size() != matrix.side) {
    throw Error(ErrorCode::invalid_sample, "point count does not match matrix side");
  }
  GroundSample s = from_points(std::move(points), MetricSource::euclidean);
  require_valid_matrix(matrix, check);
  s.metric_ = MetricSource::explicit_matrix;
  s.distances_ = std::move(matrix);
  return s;
}

std::vector<double> GroundSample::point(PointIndex i) const {
  if (i >= size_) throw Error(ErrorCode::index_out_of_range, "point index out of range");
  std::vector<double> p(dimension_);
  for (std::size_t k = 0; k < dimension_; ++k) p[k] = coordinate(i, k);
  return p;
}

GroundSample load_ground_sample(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::parse, std::string("ground sample: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("points") || !doc.contains("metric")) {
    throw Error(ErrorCode::parse, "ground sample: expected object with \"points\" and \"metric\"");
  }
  const json& points = doc["points"];
  const json& metric = doc["metric"];
  if (!points.is_array() || points.empty()) {
    throw Error(ErrorCode::parse, "ground sample: \"points\" must be a nonempty array");
  }

  std::optional<DistanceMatrix> matrix;
  MetricSource source = MetricSource::euclidean;
  if (metric.is_string()) {
    const std::string name = metric.get<std::string>();
    if (name == "euclidean") {
      source = MetricSource::euclidean;
    } else if (name == "l1") {
      source = MetricSource::l1;
    } else if (name == "linf") {
      source = MetricSource::linf;
    } else {
      throw Error(ErrorCode::parse, "ground sample: unknown metric \"" + name + "\"");
    }
  } else if (metric.is_object() && metric.contains("matrix") && metric["matrix"].is_array()) {
    std::vector<std::vector<double>> rows;
    try {
      rows = metric["matrix"].get<std::vector<std::vector<double>>>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::parse, std::string("ground sample: bad matrix: ") + e.what());
    }
    matrix = DistanceMatrix::from_rows(rows);
    source = MetricSource::explicit_matrix;
  } else {
    throw Error(ErrorCode::parse, "ground sample: \"metric\" must be a name or {\"matrix\": ...}");
  }

  if (points.front().is_string()) {
    std::vector<std::string> labels;
    for (const json& p : points) {
      if (!p.is_string()) throw Error(ErrorCode::parse, "ground sample: mixed point payloads");
      labels.push_back(p.get<std::string>());
    }
    if (!matrix) {
      throw Error(ErrorCode::invalid_sample, "ground sample: labeled points need a matrix metric");
    }
    if (matrix->side != labels.size()) {
      throw Error(ErrorCode::invalid_sample, "ground sample: label count does not match matrix side");
    }
    return GroundSample::from_matrix(std::move(*matrix), MatrixCheck::metric, std::move(labels));
  }

  std::vector<std::vector<double>> coords;
  try {
    coords = points.get<std::vector<std::vector<double>>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, std::string("ground sample: bad points: ") + e.what());
  }
  if (matrix) return GroundSample::from_points_and_matrix(std::move(coords), std::move(*matrix));
  return GroundSample::from_points(std::move(coords), source);
}

GroundSample load_ground_sample_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::parse, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_ground_sample(buffer.str());
}

double base_distance(const GroundSample& sample, PointIndex i, PointIndex j) {
  if (i >= sample.size() || j >= sample.size()) {
    throw Error(ErrorCode::index_out_of_range, "point index out of range");
  }
  return sample.distance(i, j);
}

PointTuple::PointTuple(std::vector<PointIndex> indices, int order)
    : indices_(std::move(indices)), order_(order) {
  if (order_ < 1) throw Error(ErrorCode::invalid_parameter, "tuple order must be >= 1");
  if (indices_.size() != static_cast<std::size_t>(order_) + 1) {
    throw Error(ErrorCode::order_mismatch, "tuple length must be order + 1");
  }
}

PointTuple::PointTuple(std::vector<PointIndex> indices)
    : PointTuple(indices, static_cast<int>(indices.size()) - 1) {}

std::vector<PointIndex> PointTuple::canonical() const {
  std::vector<PointIndex> out = indices_;
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PointIndex> PointTuple::support() const {
  std::vector<PointIndex> out = canonical();
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string_view to_string(ConstructionKind kind) {
  switch (kind) {
    case ConstructionKind::base:
      return "base";
    case ConstructionKind::discrete:
      return "discrete";
    case ConstructionKind::diameter:
      return "diameter";
    case ConstructionKind::norm_diameter:
      return "norm_diameter";
    case ConstructionKind::average:
      return "average";
    case ConstructionKind::max:
      return "max";
    case ConstructionKind::shortest_path:
      return "shortest_path";
    case ConstructionKind::enclosing_ball:
      return "enclosing_ball";
    case ConstructionKind::non_mi:
      return "non_mi";
    case ConstructionKind::sum:
      return "sum";
    case ConstructionKind::transform:
      return "transform";
  }
  return "unknown";
}

std::optional<ConstructionKind> construction_kind_from_string(std::string_view name) {
  for (ConstructionKind k :
       {ConstructionKind::base, ConstructionKind::discrete, ConstructionKind::diameter,
        ConstructionKind::norm_diameter, ConstructionKind::average, ConstructionKind::max,
        ConstructionKind::shortest_path, ConstructionKind::enclosing_ball,
        ConstructionKind::non_mi}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

GMetric::GMetric(int order, ConstructionKind kind, Claims claims,
                 std::shared_ptr<const GMetricKernel> kernel)
    : order_(order), kind_(kind), claims_(claims), kernel_(std::move(kernel)) {
  if (order_ < 1) throw Error(ErrorCode::invalid_parameter, "g-metric order must be >= 1");
}

double GMetric::evaluate(const GroundSample& sample, const PointTuple& tuple) const {
  if (tuple.order() != order_) {
    throw Error(ErrorCode::order_mismatch, "tuple order " + std::to_string(tuple.order()) +
                                               " does not match g-metric order " +
                                               std::to_string(order_));
  }
  for (PointIndex i : tuple.indices()) {
    if (i >= sample.size()) throw Error(ErrorCode::index_out_of_range, "point index out of range");
  }
  kernel_->check_sample(sample);
  const std::vector<PointIndex> sorted = tuple.canonical();
  return kernel_->eval(sample, sorted);
}

double GMetric::evaluate_indices(const GroundSample& sample,
                                 std::span<const PointIndex> indices) const {
  std::vector<PointIndex> sorted(indices.begin(), indices.end());
  std::sort(sorted.begin(), sorted.end());
  return kernel_->eval(sample, sorted);
}

double evaluate(const GMetric& g, const GroundSample& sample, const PointTuple& tuple) {
  return g.evaluate(sample, tuple);
}

double evaluate_points(const GMetric& g, std::span<const std::vector<double>> points,
                       MetricSource metric) {
  if (points.size() != static_cast<std::size_t>(g.order()) + 1) {
    throw Error(ErrorCode::order_mismatch, "point count must be order + 1");
  }
  std::vector<std::vector<double>> sorted(points.begin(), points.end());
  for (auto& p : sorted) {
    for (double& v : p) v += 0.0;
  }
  std::sort(sorted.begin(), sorted.end());
  // Repeated points share one sample index so identity is preserved.
  std::vector<PointIndex> idx(sorted.size());
  std::vector<std::vector<double>> distinct;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (distinct.empty() || distinct.back() != sorted[i]) distinct.push_back(sorted[i]);
    idx[i] = distinct.size() - 1;
  }
  const GroundSample local = GroundSample::from_points(std::move(distinct), metric);
  g.check_sample(local);
  return g.evaluate_sorted(local, idx);
}

}  // namespace gmetric
