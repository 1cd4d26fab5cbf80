#include "gmetric/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gmetric/simd.hpp"
#include "json.hpp"

namespace gmetric {

namespace {

std::vector<double>& scratch() {
  thread_local std::vector<double> buffer;
  return buffer;
}

std::string with_order(std::string_view name, int order) {
  std::ostringstream os;
  os << name << "(n=" << order << ")";
  return os.str();
}

void require_coordinates(const GroundSample& sample, std::string_view who) {
  if (!sample.has_coordinates()) {
    throw Error(ErrorCode::incompatible_sample,
                std::string(who) + " needs vector-valued points");
  }
}

class BaseMetricKernel final : public GMetricKernel {
 public:
  double eval(const GroundSample& s, std::span<const PointIndex> x) const override {
    return s.distance(x[0], x[1]);
  }
  void check_sample(const GroundSample&) const override {}
  std::string describe() const override { return "base(n=1)"; }
};

class DiscreteKernel final : public GMetricKernel {
 public:
  explicit DiscreteKernel(int order) : order_(order) {}
  double eval(const GroundSample&, std::span<const PointIndex> x) const override {
    return x.front() == x.back() ? 0.0 : 1.0;
  }
  void check_sample(const GroundSample&) const override {}
  std::string describe() const override { return with_order("discrete", order_); }

 private:
  int order_;
};

class DiameterKernel final : public GMetricKernel {
 public:
  explicit DiameterKernel(int order) : order_(order) {}
  double eval(const GroundSample& s, std::span<const PointIndex> x) const override {
    auto& buf = scratch();
    buf.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) buf[i] = s.coordinate(x[i], 0);
    return simd::max(buf) - simd::min(buf);
  }
  void check_sample(const GroundSample& s) const override {
    if (!s.has_coordinates() || s.dimension() != 1) {
      throw Error(ErrorCode::incompatible_sample, "diameter g-metric needs scalar points");
    }
  }
  std::string describe() const override { return with_order("diameter", order_); }

 private:
  int order_;
};

double point_norm(const GroundSample& s, PointIndex i) {
  double acc = 0.0;
  switch (s.metric()) {
    case MetricSource::l1:
      for (std::size_t k = 0; k < s.dimension(); ++k) acc += std::fabs(s.coordinate(i, k));
      return acc;
    case MetricSource::linf:
      for (std::size_t k = 0; k < s.dimension(); ++k) acc = std::max(acc, std::fabs(s.coordinate(i, k)));
      return acc;
    default:
      for (std::size_t k = 0; k < s.dimension(); ++k) acc += s.coordinate(i, k) * s.coordinate(i, k);
      return std::sqrt(acc);
  }
}

class NormDiameterKernel final : public GMetricKernel {
 public:
  explicit NormDiameterKernel(int order) : order_(order) {}
  double eval(const GroundSample& s, std::span<const PointIndex> x) const override {
    auto& buf = scratch();
    buf.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) buf[i] = point_norm(s, x[i]);
    return simd::max(buf) - simd::min(buf);
  }
  void check_sample(const GroundSample& s) const override {
    require_coordinates(s, "norm diameter");
  }
  std::string describe() const override { return with_order("norm_diameter", order_); }

 private:
  int order_;
};

class AverageKernel final : public GMetricKernel {
 public:
  explicit AverageKernel(int order) : order_(order) {}
  double eval(const GroundSample& s, std::span<const PointIndex> x) const override {
    const std::size_t m = x.size();
    auto& buf = scratch();
    buf.resize(m * m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) buf[i * m + j] = s.distance(x[i], x[j]);
    }
    return simd::sum(buf) / static_cast<double>(m * m);
  }
  void check_sample(const GroundSample&) const override {}
  std::string describe() const override { return with_order("average", order_); }

 private:
  int order_;
};

class MaxKernel final : public GMetricKernel {
 public:
  explicit MaxKernel(int order) : order_(order) {}
  double eval(const GroundSample& s, std::span<const PointIndex> x) const override {
    const std::size_t m = x.size();
    auto& buf = scratch();
    buf.resize(m * m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) buf[i * m + j] = s.distance(x[i], x[j]);
    }
    return simd::max(buf);
  }
  void check_sample(const GroundSample&) const override {}
  std::string describe() const override { return with_order("max", order_); }

 private:
  int order_;
};

class ShortestPathKernel final : public GMetricKernel {
 public:
  explicit ShortestPathKernel(int order) : order_(order) {}
  double eval(const GroundSample& s, std::span<const PointIndex> x) const override {
    // next_permutation from the sorted input visits every distinct ordering once.
    std::vector<PointIndex> path(x.begin(), x.end());
    double best = INFINITY;
    do {
      double length = 0.0;
      for (std::size_t i = 0; i + 1 < path.size(); ++i) length += s.distance(path[i], path[i + 1]);
      best = std::min(best, length);
    } while (std::next_permutation(path.begin(), path.end()));
    return best;
  }
  void check_sample(const GroundSample&) const override {}
  std::string describe() const override { return with_order("shortest_path", order_); }

 private:
  int order_;
};

class EnclosingBallKernel final : public GMetricKernel {
 public:
  explicit EnclosingBallKernel(int order) : order_(order) {}
  double eval(const GroundSample& s, std::span<const PointIndex> x) const override {
    std::vector<std::vector<double>> points;
    points.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i > 0 && x[i] == x[i - 1]) continue;
      points.push_back(s.point(x[i]));
    }
    if (points.size() == 1) return 0.0;
    return 2.0 * min_enclosing_ball(points).radius;
  }
  void check_sample(const GroundSample& s) const override {
    require_coordinates(s, "enclosing ball");
    if (s.dimension() > 3) {
      throw Error(ErrorCode::incompatible_sample, "enclosing ball supports dimension <= 3");
    }
  }
  std::string describe() const override { return with_order("enclosing_ball", order_); }

 private:
  int order_;
};

class NonMiKernel final : public GMetricKernel {
 public:
  double eval(const GroundSample&, std::span<const PointIndex> x) const override {
    const auto xs = std::count(x.begin(), x.end(), PointIndex{0});
    switch (xs) {
      case 2:
        return 1.0;  // (x, x, y)
      case 1:
        return 2.0;  // (x, y, y)
      default:
        return 0.0;
    }
  }
  void check_sample(const GroundSample& s) const override {
    if (s.size() != 2) {
      throw Error(ErrorCode::incompatible_sample, "non-MI fixture needs exactly two points");
    }
  }
  std::string describe() const override { return "non_mi(n=2)"; }
};

class SumKernel final : public GMetricKernel {
 public:
  SumKernel(GMetric a, GMetric b) : a_(std::move(a)), b_(std::move(b)) {}
  double eval(const GroundSample& s, std::span<const PointIndex> x) const override {
    return a_.evaluate_sorted(s, x) + b_.evaluate_sorted(s, x);
  }
  void check_sample(const GroundSample& s) const override {
    a_.check_sample(s);
    b_.check_sample(s);
  }
  std::string describe() const override { return a_.describe() + " + " + b_.describe(); }

 private:
  GMetric a_;
  GMetric b_;
};

class TransformKernel final : public GMetricKernel {
 public:
  TransformKernel(GMetric g, TransformSpec psi) : g_(std::move(g)), psi_(psi) {}
  double eval(const GroundSample& s, std::span<const PointIndex> x) const override {
    return psi_.apply(g_.evaluate_sorted(s, x));
  }
  void check_sample(const GroundSample& s) const override { g_.check_sample(s); }
  std::string describe() const override {
    std::ostringstream os;
    os << to_string(psi_.kind) << "[" << psi_.parameter << "](" << g_.describe() << ")";
    return os.str();
  }

 private:
  GMetric g_;
  TransformSpec psi_;
};

void require_order(int order) {
  if (order < 1) throw Error(ErrorCode::invalid_parameter, "g-metric order must be >= 1");
}

}  // namespace

GMetric make_base_metric() {
  return GMetric(1, ConstructionKind::base, Claims{}, std::make_shared<BaseMetricKernel>());
}

GMetric make_discrete(int order) {
  require_order(order);
  return GMetric(order, ConstructionKind::discrete, Claims{},
                 std::make_shared<DiscreteKernel>(order));
}

GMetric make_diameter(int order) {
  require_order(order);
  return GMetric(order, ConstructionKind::diameter, Claims{},
                 std::make_shared<DiameterKernel>(order));
}

GMetric make_norm_diameter(int order) {
  require_order(order);
  return GMetric(order, ConstructionKind::norm_diameter,
                 Claims{.gmetric = false, .conjectural = false, .multiplicity_independent = true},
                 std::make_shared<NormDiameterKernel>(order));
}

GMetric make_average(int order) {
  require_order(order);
  // Repeated entries are weighted by multiplicity, so for n >= 3 the value
  // is not a function of the support alone (e.g. (x,x,x,y) vs (x,x,y,y)).
  return GMetric(order, ConstructionKind::average,
                 Claims{.gmetric = true, .conjectural = false,
                        .multiplicity_independent = order <= 2},
                 std::make_shared<AverageKernel>(order));
}

GMetric make_max(int order) {
  require_order(order);
  return GMetric(order, ConstructionKind::max, Claims{}, std::make_shared<MaxKernel>(order));
}

GMetric make_shortest_path(int order) {
  require_order(order);
  if (order + 1 > kShortestPathMaxPoints) {
    throw Error(ErrorCode::enumeration_limit,
                "shortest path enumerates (n+1)! orderings; n+1 must be <= " +
                    std::to_string(kShortestPathMaxPoints));
  }
  const bool proven = order <= 2;
  return GMetric(order, ConstructionKind::shortest_path,
                 Claims{.gmetric = proven, .conjectural = !proven, .multiplicity_independent = true},
                 std::make_shared<ShortestPathKernel>(order));
}

GMetric make_enclosing_ball(int order) {
  require_order(order);
  const bool proven = order <= 2;
  return GMetric(order, ConstructionKind::enclosing_ball,
                 Claims{.gmetric = proven, .conjectural = !proven, .multiplicity_independent = true},
                 std::make_shared<EnclosingBallKernel>(order));
}

GMetric make_non_mi() {
  return GMetric(2, ConstructionKind::non_mi,
                 Claims{.gmetric = true, .conjectural = false, .multiplicity_independent = false},
                 std::make_shared<NonMiKernel>());
}

GMetric make_construction(ConstructionKind kind, int order) {
  switch (kind) {
    case ConstructionKind::base:
      if (order != 1) throw Error(ErrorCode::invalid_parameter, "base metric has order 1");
      return make_base_metric();
    case ConstructionKind::discrete:
      return make_discrete(order);
    case ConstructionKind::diameter:
      return make_diameter(order);
    case ConstructionKind::norm_diameter:
      return make_norm_diameter(order);
    case ConstructionKind::average:
      return make_average(order);
    case ConstructionKind::max:
      return make_max(order);
    case ConstructionKind::shortest_path:
      return make_shortest_path(order);
    case ConstructionKind::enclosing_ball:
      return make_enclosing_ball(order);
    case ConstructionKind::non_mi:
      if (order != 2) throw Error(ErrorCode::invalid_parameter, "non-MI fixture has order 2");
      return make_non_mi();
    case ConstructionKind::sum:
    case ConstructionKind::transform:
      break;
  }
  throw Error(ErrorCode::invalid_parameter, "combinators are built with sum/transform");
}

GMetric sum_gmetrics(const GMetric& a, const GMetric& b) {
  if (a.order() != b.order()) {
    throw Error(ErrorCode::order_mismatch, "summands must have the same order");
  }
  const Claims claims{
      .gmetric = a.claims().gmetric && b.claims().gmetric,
      .conjectural = a.claims().conjectural || b.claims().conjectural,
      .multiplicity_independent =
          a.claims().multiplicity_independent && b.claims().multiplicity_independent,
  };
  return GMetric(a.order(), ConstructionKind::sum, claims, std::make_shared<SumKernel>(a, b));
}

std::string_view to_string(TransformSpec::Kind kind) {
  switch (kind) {
    case TransformSpec::Kind::scale:
      return "scale";
    case TransformSpec::Kind::bounded:
      return "bounded";
    case TransformSpec::Kind::root:
      return "root";
    case TransformSpec::Kind::log1p:
      return "log1p";
    case TransformSpec::Kind::clamp:
      return "clamp";
  }
  return "unknown";
}

TransformSpec::Kind transform_kind_from_string(std::string_view name) {
  for (auto k : {TransformSpec::Kind::scale, TransformSpec::Kind::bounded, TransformSpec::Kind::root,
                 TransformSpec::Kind::log1p, TransformSpec::Kind::clamp}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCode::parse, "unknown transform \"" + std::string(name) + "\"");
}

void TransformSpec::validate() const {
  switch (kind) {
    case Kind::scale:
    case Kind::clamp:
      if (!(parameter > 0.0) || !std::isfinite(parameter)) {
        throw Error(ErrorCode::invalid_parameter, "transform parameter k must be > 0");
      }
      break;
    case Kind::root:
      if (!(parameter >= 1.0) || !std::isfinite(parameter)) {
        throw Error(ErrorCode::invalid_parameter, "root parameter p must be >= 1");
      }
      break;
    case Kind::bounded:
    case Kind::log1p:
      break;
  }
}

double TransformSpec::apply(double x) const {
  switch (kind) {
    case Kind::scale:
      return parameter * x;
    case Kind::bounded:
      return x / (1.0 + x);
    case Kind::root:
      return std::pow(x, 1.0 / parameter);
    case Kind::log1p:
      return std::log1p(x);
    case Kind::clamp:
      return std::min(parameter, x);
  }
  return x;
}

GMetric transform_gmetric(const GMetric& g, TransformSpec psi) {
  psi.validate();
  return GMetric(g.order(), ConstructionKind::transform, g.claims(),
                 std::make_shared<TransformKernel>(g, psi));
}

namespace {

GMetric parse_spec_node(const nlohmann::json& node, std::optional<int> inherited_order) {
  if (!node.is_object() || !node.contains("kind") || !node["kind"].is_string()) {
    throw Error(ErrorCode::parse, "construction spec: expected object with string \"kind\"");
  }
  const std::string kind_name = node["kind"].get<std::string>();
  const auto kind = construction_kind_from_string(kind_name);
  if (!kind) throw Error(ErrorCode::parse, "construction spec: unknown kind \"" + kind_name + "\"");

  int order = 0;
  if (node.contains("order")) {
    if (!node["order"].is_number_integer()) {
      throw Error(ErrorCode::parse, "construction spec: \"order\" must be an integer");
    }
    order = node["order"].get<int>();
  } else if (inherited_order) {
    order = *inherited_order;
  } else if (*kind == ConstructionKind::non_mi) {
    order = 2;
  } else if (*kind == ConstructionKind::base) {
    order = 1;
  } else {
    throw Error(ErrorCode::parse, "construction spec: missing \"order\"");
  }

  GMetric g = make_construction(*kind, order);
  if (node.contains("transforms")) {
    if (!node["transforms"].is_array()) {
      throw Error(ErrorCode::parse, "construction spec: \"transforms\" must be an array");
    }
    for (const auto& t : node["transforms"]) {
      if (!t.is_object() || !t.contains("kind") || !t["kind"].is_string()) {
        throw Error(ErrorCode::parse, "construction spec: transform needs a string \"kind\"");
      }
      TransformSpec psi;
      psi.kind = transform_kind_from_string(t["kind"].get<std::string>());
      if (t.contains("param")) {
        if (!t["param"].is_number()) {
          throw Error(ErrorCode::parse, "construction spec: transform \"param\" must be a number");
        }
        psi.parameter = t["param"].get<double>();
      }
      g = transform_gmetric(g, psi);
    }
  }
  if (node.contains("sum_with")) g = sum_gmetrics(g, parse_spec_node(node["sum_with"], order));
  return g;
}

}  // namespace

GMetric parse_construction_spec(std::string_view document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::parse, std::string("construction spec: ") + e.what());
  }
  return parse_spec_node(doc, std::nullopt);
}

}  // namespace gmetric
