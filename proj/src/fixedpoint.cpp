#include "gmetric/fixedpoint.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "gmetric/combinatorics.hpp"

namespace gmetric {

namespace cb = combinatorics;
using Indices = std::vector<PointIndex>;

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <class T>
T parse_number(std::string_view text, const char* what) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::parse, std::string("invalid ") + what + ": '" + std::string(text) + "'");
  }
  return value;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

SelfMap SelfMap::affine(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::invalid_parameter, "affine map coefficients must be finite");
  }
  SelfMap m;
  m.kind_ = Kind::affine_scalar;
  m.a_ = {a};
  m.b_ = {b};
  return m;
}

SelfMap SelfMap::affine_vector(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || a.size() != b.size()) {
    throw Error(ErrorCode::invalid_parameter, "affine vector map needs equal nonempty a and b");
  }
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!std::isfinite(a[k]) || !std::isfinite(b[k])) {
      throw Error(ErrorCode::invalid_parameter, "affine map coefficients must be finite");
    }
  }
  SelfMap m;
  m.kind_ = Kind::affine_vector;
  m.a_ = std::move(a);
  m.b_ = std::move(b);
  return m;
}

SelfMap SelfMap::table(std::vector<PointIndex> images) {
  if (images.empty()) throw Error(ErrorCode::invalid_parameter, "map table is empty");
  for (PointIndex i : images) {
    if (i >= images.size()) {
      throw Error(ErrorCode::index_out_of_range,
                  "map table image " + std::to_string(i) + " outside the sample of size " +
                      std::to_string(images.size()));
    }
  }
  SelfMap m;
  m.kind_ = Kind::table;
  m.table_ = std::move(images);
  return m;
}

SelfMap SelfMap::parse(std::string_view text) {
  text = trim(text);
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::parse, "map must look like affine:a,b or table:i0,i1,...");
  }
  const std::string_view kind = text.substr(0, colon);
  const std::string_view body = text.substr(colon + 1);
  if (kind == "affine") {
    const auto parts = split(body, ',');
    if (parts.size() != 2) throw Error(ErrorCode::parse, "affine map needs exactly a,b");
    return affine(parse_number<double>(parts[0], "affine coefficient"),
                  parse_number<double>(parts[1], "affine coefficient"));
  }
  if (kind == "table") {
    std::vector<PointIndex> images;
    for (auto part : split(body, ',')) images.push_back(parse_number<PointIndex>(part, "table entry"));
    return table(std::move(images));
  }
  throw Error(ErrorCode::parse, "unknown map kind: " + std::string(kind));
}

Point SelfMap::apply(const Point& x) const {
  Point y = x;
  switch (kind_) {
    case Kind::affine_scalar:
      for (double& v : y) v = a_[0] * v + b_[0];
      break;
    case Kind::affine_vector:
      if (x.size() != a_.size()) {
        throw Error(ErrorCode::incompatible_sample, "point dimension does not match the affine map");
      }
      for (std::size_t k = 0; k < y.size(); ++k) y[k] = a_[k] * y[k] + b_[k];
      break;
    case Kind::table:
      throw Error(ErrorCode::incompatible_sample, "table maps act on sample indices");
  }
  // Fold -0.0 so iterates print and compare canonically.
  for (double& v : y) v += 0.0;
  return y;
}

PointIndex SelfMap::apply(PointIndex i) const {
  if (kind_ != Kind::table) {
    throw Error(ErrorCode::incompatible_sample, "affine maps act on coordinates");
  }
  if (i >= table_.size()) throw Error(ErrorCode::index_out_of_range, "index outside the map table");
  return table_[i];
}

std::string SelfMap::describe() const {
  std::string out;
  switch (kind_) {
    case Kind::affine_scalar:
      return "affine:" + format_double(a_[0]) + "," + format_double(b_[0]);
    case Kind::affine_vector:
      out = "affine_vector:";
      for (std::size_t k = 0; k < a_.size(); ++k) {
        if (k) out += ";";
        out += format_double(a_[k]) + "," + format_double(b_[k]);
      }
      return out;
    case Kind::table:
      out = "table:";
      for (std::size_t k = 0; k < table_.size(); ++k) {
        if (k) out += ",";
        out += std::to_string(table_[k]);
      }
      return out;
  }
  return out;
}

Domain Domain::finite(GroundSample sample) { return Domain(std::move(sample), true); }

Domain Domain::continuous(GroundSample sample) {
  if (!sample.has_coordinates() || sample.metric() == MetricSource::explicit_matrix) {
    throw Error(ErrorCode::incompatible_sample,
                "a continuous domain needs coordinate points with a coordinate metric");
  }
  return Domain(std::move(sample), false);
}

Domain Domain::scalar_line(double lo, double hi, std::size_t points) {
  if (!(hi > lo) || points < 2) {
    throw Error(ErrorCode::invalid_parameter, "scalar line needs hi > lo and at least 2 points");
  }
  std::vector<double> values(points);
  for (std::size_t i = 0; i < points; ++i) {
    values[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return continuous(GroundSample::from_scalars(values, MetricSource::l1));
}

void Domain::check(const GMetric& g, const SelfMap& map) const {
  if (finite_) {
    if (map.kind() != SelfMap::Kind::table) {
      throw Error(ErrorCode::incompatible_sample, "a finite domain needs a table map");
    }
    if (map.images().size() != sample_.size()) {
      throw Error(ErrorCode::incompatible_sample,
                  "map table has " + std::to_string(map.images().size()) +
                      " entries, sample has " + std::to_string(sample_.size()));
    }
  } else {
    if (map.kind() == SelfMap::Kind::table) {
      throw Error(ErrorCode::incompatible_sample, "a continuous domain needs an affine map");
    }
    if (map.kind() == SelfMap::Kind::affine_vector && map.slope().size() != sample_.dimension()) {
      throw Error(ErrorCode::incompatible_sample, "affine map dimension does not match the sample");
    }
  }
  g.check_sample(sample_);
}

double Domain::evaluate(const GMetric& g, std::span<const Point> points) const {
  if (finite_) {
    Indices idx(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      idx[i] = static_cast<PointIndex>(points[i].at(0));
    }
    return g.evaluate_indices(sample_, idx);
  }
  return evaluate_points(g, points, sample_.metric());
}

double Domain::one_vs_rest(const GMetric& g, const Point& x, const Point& y) const {
  std::vector<Point> pts(static_cast<std::size_t>(g.order()) + 1, y);
  pts[0] = x;
  return evaluate(g, pts);
}

Point Domain::apply(const SelfMap& map, const Point& x) const {
  if (finite_) return {static_cast<double>(map.apply(static_cast<PointIndex>(x.at(0))))};
  return map.apply(x);
}

Point Domain::point(PointIndex i) const {
  if (i >= sample_.size()) throw Error(ErrorCode::index_out_of_range, "domain point out of range");
  if (finite_) return {static_cast<double>(i)};
  return sample_.point(i);
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::banach:
      return "banach";
    case Regime::banach_weak_i:
      return "banach-weak-i";
    case Regime::banach_weak_ii:
      return "banach-weak-ii";
    case Regime::psi_phi:
      return "psi-phi";
    case Regime::weak_contractive:
      return "weak-contractive";
    case Regime::quasi:
      return "quasi";
  }
  return "unknown";
}

Regime regime_from_string(std::string_view name) {
  if (name == "banach") return Regime::banach;
  if (name == "banach-weak-i") return Regime::banach_weak_i;
  if (name == "banach-weak-ii") return Regime::banach_weak_ii;
  if (name == "psi-phi") return Regime::psi_phi;
  if (name == "weak-contractive" || name == "weak") return Regime::weak_contractive;
  if (name == "quasi") return Regime::quasi;
  throw Error(ErrorCode::invalid_parameter, "unknown regime: " + std::string(name));
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::converged:
      return "converged";
    case StopReason::max_iter:
      return "max_iter";
    case StopReason::bound_violated:
      return "bound_violated";
    case StopReason::non_contractive:
      return "non_contractive";
  }
  return "unknown";
}

ContractionCertificate estimate_lambda(const GMetric& g, const Domain& domain, const SelfMap& map,
                                       Regime regime, std::uint64_t budget, std::uint64_t seed) {
  if (budget < 1) throw Error(ErrorCode::invalid_parameter, "budget must be >= 1");
  domain.check(g, map);
  const std::size_t n = static_cast<std::size_t>(g.order());
  const std::size_t size = domain.size();

  std::vector<Point> pts(size), images(size);
  for (PointIndex i = 0; i < size; ++i) {
    pts[i] = domain.point(i);
    images[i] = domain.apply(map, pts[i]);
  }

  ContractionCertificate cert;
  cert.regime = regime;
  cert.lambda_hat = 0.0;

  std::vector<Point> lhs_pts(n + 1), rhs_pts(n + 1);
  auto consider = [&](const Indices& idx) {
    double lhs = 0.0, rhs = 0.0;
    switch (regime) {
      case Regime::banach:
      case Regime::weak_contractive:
      case Regime::quasi:
        for (std::size_t i = 0; i <= n; ++i) {
          lhs_pts[i] = images[idx[i]];
          rhs_pts[i] = pts[idx[i]];
        }
        lhs = domain.evaluate(g, lhs_pts);
        rhs = domain.evaluate(g, rhs_pts);
        if (regime == Regime::weak_contractive &&
            std::all_of(idx.begin(), idx.end(), [&](PointIndex p) { return p == idx[0]; })) {
          return;
        }
        if (regime == Regime::quasi) {
          double m = rhs;
          for (std::size_t i = 0; i <= n; ++i) {
            for (std::size_t j = 0; j <= n; ++j) {
              m = std::max(m, domain.one_vs_rest(g, pts[idx[i]], images[idx[j]]));
            }
          }
          rhs = m / static_cast<double>(n);
        }
        break;
      case Regime::banach_weak_i:
        for (std::size_t i = 0; i <= n; ++i) rhs_pts[i] = pts[idx[i]];
        lhs_pts = rhs_pts;
        lhs_pts[0] = images[idx[0]];
        lhs = domain.evaluate(g, lhs_pts);
        rhs = domain.evaluate(g, rhs_pts);
        break;
      case Regime::banach_weak_ii:
      case Regime::psi_phi:
        lhs = domain.one_vs_rest(g, images[idx[0]], images[idx[1]]);
        rhs = domain.one_vs_rest(g, pts[idx[0]], pts[idx[1]]);
        break;
    }
    ++cert.samples_checked;
    if (rhs == 0.0) {
      if (lhs > 0.0 && !cert.non_contractive) {
        cert.non_contractive = true;
        cert.lambda_hat = std::numeric_limits<double>::infinity();
        cert.worst_ratio_witness = idx;
        cert.worst_lhs = lhs;
        cert.worst_rhs = rhs;
      }
      return;
    }
    const double ratio = lhs / rhs;
    if (ratio > cert.lambda_hat || cert.worst_ratio_witness.empty()) {
      if (!cert.non_contractive) {
        cert.lambda_hat = ratio;
        cert.worst_ratio_witness = idx;
        cert.worst_lhs = lhs;
        cert.worst_rhs = rhs;
      }
    }
  };

  // Tuple shapes per regime: a symmetric (n+1)-multiset, a lead point plus an
  // n-multiset, or an ordered pair.
  const bool pair_shape = regime == Regime::banach_weak_ii || regime == Regime::psi_phi;
  const bool lead_shape = regime == Regime::banach_weak_i;
  std::uint64_t total = 0;
  if (pair_shape) {
    total = static_cast<std::uint64_t>(size) * size;
  } else if (lead_shape) {
    total = size * cb::multichoose(size, n);
  } else {
    total = cb::multichoose(size, n + 1);
  }

  if (total <= budget) {
    cert.exhaustive = true;
    if (pair_shape) {
      cb::for_each_tuple(size, 2, consider);
    } else if (lead_shape) {
      for (PointIndex x0 = 0; x0 < size; ++x0) {
        cb::for_each_multiset(size, n, [&](const Indices& rest) {
          Indices idx{x0};
          idx.insert(idx.end(), rest.begin(), rest.end());
          consider(idx);
        });
      }
    } else {
      cb::for_each_multiset(size, n + 1, consider);
    }
  } else {
    cert.exhaustive = false;
    std::mt19937_64 rng(seed);
    const std::size_t k = pair_shape ? 2 : n + 1;
    for (std::uint64_t i = 0; i < budget; ++i) {
      Indices idx(k);
      for (auto& e : idx) e = cb::uniform_below(rng, size);
      if (!pair_shape && !lead_shape) std::sort(idx.begin(), idx.end());
      if (lead_shape) std::sort(idx.begin() + 1, idx.end());
      consider(idx);
    }
  }
  if (cert.lambda_hat >= 1.0) cert.non_contractive = true;
  return cert;
}

namespace {

bool valid_lambda(double lambda) { return lambda >= 0.0 && lambda < 1.0; }

// Shared Picard loop. `bound` maps (k, step_g so far) to the bound for
// step k; `extra` runs per step and returns false to stop with a violation.
template <class Bound, class Extra>
void picard(const GMetric& g, const Domain& domain, const SelfMap& map, const Point& x0,
            const SolverOptions& opts, OrbitTrace& trace, Bound&& bound, Extra&& extra) {
  trace.start = x0;
  trace.iterates = {x0};
  Point y = x0;
  for (std::size_t k = 0; k < opts.max_iter; ++k) {
    Point next = domain.apply(map, y);
    const double step = domain.one_vs_rest(g, y, next);
    trace.iterates.push_back(next);
    trace.step_g.push_back(step);
    const double b = bound(k);
    trace.bound_g.push_back(b);
    if (exceeds(step, b, opts.check_tolerance)) {
      trace.bounds_hold = false;
      trace.stop = StopReason::bound_violated;
      trace.diagnostics.push_back("step " + std::to_string(k) + " value " + format_double(step) +
                                  " exceeds bound " + format_double(b));
      return;
    }
    if (!extra(k)) {
      trace.bounds_hold = false;
      trace.stop = StopReason::bound_violated;
      return;
    }
    if (step <= opts.tol) {
      trace.stop = StopReason::converged;
      return;
    }
    y = std::move(next);
  }
  trace.stop = StopReason::max_iter;
  trace.diagnostics.push_back("no convergence within " + std::to_string(opts.max_iter) +
                              " iterations");
}

void validate_options(const SolverOptions& opts) {
  if (!(opts.tol >= 0.0)) throw Error(ErrorCode::invalid_parameter, "tol must be >= 0");
  if (opts.max_iter < 1) throw Error(ErrorCode::invalid_parameter, "max_iter must be >= 1");
  if (!(opts.check_tolerance >= 0.0)) {
    throw Error(ErrorCode::invalid_parameter, "check tolerance must be >= 0");
  }
}

void check_start(const Domain& domain, const Point& x0) {
  if (domain.is_finite()) {
    if (x0.size() != 1 || x0[0] < 0.0 || x0[0] != std::floor(x0[0]) ||
        x0[0] >= static_cast<double>(domain.size())) {
      throw Error(ErrorCode::index_out_of_range, "start must be a sample index");
    }
  } else if (x0.size() != domain.sample().dimension()) {
    throw Error(ErrorCode::incompatible_sample, "start dimension does not match the domain");
  }
  for (double v : x0) {
    if (!std::isfinite(v)) throw Error(ErrorCode::invalid_parameter, "start must be finite");
  }
}

bool reject_lambda(OrbitTrace& trace, const Point& x0) {
  if (valid_lambda(trace.lambda)) return false;
  trace.start = x0;
  trace.iterates = {x0};
  trace.stop = StopReason::non_contractive;
  trace.bounds_hold = false;
  trace.diagnostics.push_back("lambda " + format_double(trace.lambda) + " is outside [0, 1)");
  return true;
}

}  // namespace

OrbitTrace solve_banach(const GMetric& g, const Domain& domain, const SelfMap& map,
                        const Point& x0, const SolverOptions& opts) {
  validate_options(opts);
  domain.check(g, map);
  check_start(domain, x0);
  OrbitTrace trace;
  trace.regime = Regime::banach;
  trace.lambda = opts.lambda;
  if (reject_lambda(trace, x0)) return trace;
  picard(
      g, domain, map, x0, opts, trace,
      [&](std::size_t k) { return std::pow(opts.lambda, static_cast<double>(k)) * trace.step_g[0]; },
      [](std::size_t) { return true; });
  return trace;
}

double ControlPair::psi_at(double x) const {
  switch (psi) {
    case Psi::identity:
      return x;
    case Psi::square:
      return x * x;
    case Psi::bounded:
      return x / (1.0 + x);
  }
  return x;
}

double ControlPair::phi_at(double x) const {
  switch (phi) {
    case Phi::linear:
      return c * x;
    case Phi::clamped_square:
      return c * std::min(x * x, cap);
  }
  return 0.0;
}

void ControlPair::validate() const {
  if (!std::isfinite(c) || !std::isfinite(cap)) {
    throw Error(ErrorCode::invalid_parameter, "control parameters must be finite");
  }
  // Log-spaced grid on (0, 1e6].
  std::vector<double> grid;
  for (int e = -120; e <= 60; ++e) grid.push_back(std::pow(10.0, e / 10.0));
  if (psi_at(0.0) != 0.0) throw Error(ErrorCode::invalid_parameter, "psi(0) must be 0");
  if (phi_at(0.0) != 0.0) throw Error(ErrorCode::invalid_parameter, "phi(0) must be 0");
  double prev = 0.0;
  for (double x : grid) {
    const double p = psi_at(x);
    if (!(p > 0.0)) throw Error(ErrorCode::invalid_parameter, "psi must vanish only at 0");
    if (p < prev) throw Error(ErrorCode::invalid_parameter, "psi must be nondecreasing");
    prev = p;
    if (!(phi_at(x) > 0.0)) {
      throw Error(ErrorCode::invalid_parameter,
                  "phi must vanish only at 0 (phi^-1({0}) = {0}); zero at x = " + format_double(x));
    }
  }
  if (phi == Phi::linear && !(c > 0.0 && c < 1.0)) {
    throw Error(ErrorCode::invalid_parameter, "linear phi needs c in (0, 1)");
  }
  if (phi == Phi::clamped_square && !(c > 0.0 && cap > 0.0)) {
    throw Error(ErrorCode::invalid_parameter, "clamped-square phi needs c > 0 and cap > 0");
  }
}

std::string_view to_string(ControlPair::Psi psi) {
  switch (psi) {
    case ControlPair::Psi::identity:
      return "identity";
    case ControlPair::Psi::square:
      return "square";
    case ControlPair::Psi::bounded:
      return "bounded";
  }
  return "unknown";
}

std::string_view to_string(ControlPair::Phi phi) {
  switch (phi) {
    case ControlPair::Phi::linear:
      return "linear";
    case ControlPair::Phi::clamped_square:
      return "clamped_square";
  }
  return "unknown";
}

ControlPair::Psi psi_from_string(std::string_view name) {
  if (name == "identity") return ControlPair::Psi::identity;
  if (name == "square") return ControlPair::Psi::square;
  if (name == "bounded") return ControlPair::Psi::bounded;
  throw Error(ErrorCode::invalid_parameter, "unknown psi: " + std::string(name));
}

ControlPair::Phi phi_from_string(std::string_view name) {
  if (name == "linear") return ControlPair::Phi::linear;
  if (name == "clamped_square") return ControlPair::Phi::clamped_square;
  throw Error(ErrorCode::invalid_parameter, "unknown phi: " + std::string(name));
}

OrbitTrace solve_psi_phi(const GMetric& g, const Domain& domain, const SelfMap& map,
                         const ControlPair& control, const Point& x0, const SolverOptions& opts) {
  control.validate();
  validate_options(opts);
  domain.check(g, map);
  check_start(domain, x0);
  OrbitTrace trace;
  trace.regime = Regime::psi_phi;
  trace.lambda = opts.lambda;
  picard(
      g, domain, map, x0, opts, trace,
      [&](std::size_t k) { return k == 0 ? trace.step_g[0] : trace.step_g[k - 1]; },
      [&](std::size_t k) {
        if (k == 0) return true;
        const double prev = trace.step_g[k - 1];
        const double lhs = control.psi_at(trace.step_g[k]);
        const double rhs = control.psi_at(prev) - control.phi_at(prev);
        trace.psi_lhs.push_back(lhs);
        trace.psi_rhs.push_back(rhs);
        if (exceeds(lhs, rhs, opts.check_tolerance)) {
          trace.diagnostics.push_back("psi-phi inequality fails at step " + std::to_string(k) +
                                      ": " + format_double(lhs) + " > " + format_double(rhs));
          return false;
        }
        return true;
      });
  return trace;
}

OrbitTrace solve_quasi(const GMetric& g, const Domain& domain, const SelfMap& map,
                       const Point& x0, const SolverOptions& opts) {
  validate_options(opts);
  domain.check(g, map);
  check_start(domain, x0);
  OrbitTrace trace;
  trace.regime = Regime::quasi;
  trace.lambda = opts.lambda;
  if (reject_lambda(trace, x0)) return trace;
  const std::size_t n = static_cast<std::size_t>(g.order());
  const double lambda = opts.lambda;
  // lambda^N / (n^(N-1) (1 - lambda)) = (lambda / n)^N * n / (1 - lambda)
  auto rate = [&](std::size_t N) {
    return std::pow(lambda / static_cast<double>(n), static_cast<double>(N)) *
           static_cast<double>(n) / (1.0 - lambda) * trace.step_g[0];
  };
  picard(g, domain, map, x0, opts, trace, rate, [](std::size_t) { return true; });

  auto fail = [&](std::string message) {
    trace.bounds_hold = false;
    if (trace.stop != StopReason::non_contractive) trace.stop = StopReason::bound_violated;
    trace.diagnostics.push_back(std::move(message));
  };

  // Rate bound against the final iterate as the fixed-point proxy.
  const Point& y_star = trace.iterates.back();
  trace.terminal_slack = trace.step_g.back();
  const std::size_t last = trace.iterates.size() - 1;
  for (std::size_t N = 0; N <= last; ++N) {
    const double actual = domain.one_vs_rest(g, trace.iterates[N], y_star);
    const double bound = rate(N);
    trace.rate_actual.push_back(actual);
    trace.rate_bound.push_back(bound);
    if (exceeds(actual, bound + trace.terminal_slack, opts.check_tolerance)) {
      fail("rate bound fails at N = " + std::to_string(N) + ": " + format_double(actual) + " > " +
           format_double(bound) + " + " + format_double(trace.terminal_slack));
    }
  }

  // Finite orbit diameters, grown one iterate at a time.
  trace.orbit_bound = static_cast<double>(n) / (1.0 - lambda) * trace.step_g[0];
  const std::size_t horizon = std::min(last, opts.orbit_horizon);
  double diameter = 0.0, tail = 0.0;
  std::vector<Point> tuple(n + 1);
  for (std::size_t N = 0; N <= horizon; ++N) {
    cb::for_each_multiset(N + 1, n, [&](const Indices& rest) {
      for (std::size_t i = 0; i < n; ++i) tuple[i] = trace.iterates[rest[i]];
      tuple[n] = trace.iterates[N];
      const double v = domain.evaluate(g, tuple);
      diameter = std::max(diameter, v);
      if (N >= 1 && (n == 0 || rest.front() >= 1)) tail = std::max(tail, v);
    });
    trace.orbit_diameter.push_back(diameter);
    trace.orbit_tail_max.push_back(tail);
    if (exceeds(diameter, trace.orbit_bound, opts.check_tolerance)) {
      fail("orbit diameter " + format_double(diameter) + " at N = " + std::to_string(N) +
           " exceeds " + format_double(trace.orbit_bound));
    }
    const double lemma = lambda / static_cast<double>(n) * diameter;
    if (exceeds(tail, lemma, opts.check_tolerance)) {
      fail("orbit tuple bound fails at N = " + std::to_string(N) + ": " + format_double(tail) +
           " > " + format_double(lemma));
    }
  }
  return trace;
}

WeakContractiveResult solve_weak_contractive(const GMetric& g, const GroundSample& sample,
                                             const SelfMap& map) {
  const Domain domain = Domain::finite(sample);
  domain.check(g, map);
  const std::size_t n = static_cast<std::size_t>(g.order());
  const std::size_t size = sample.size();
  WeakContractiveResult r;

  for (PointIndex x = 0; x < size; ++x) {
    Indices t(n + 1, map.apply(x));
    t[0] = x;
    r.f.push_back(g.evaluate_indices(sample, t));
  }
  r.argmin = static_cast<PointIndex>(std::min_element(r.f.begin(), r.f.end()) - r.f.begin());
  r.fixed_point = r.f[r.argmin] == 0.0;

  Indices images(n + 1);
  cb::for_each_multiset(size, n + 1, [&](const Indices& t) {
    if (t.front() == t.back()) return;  // needs two distinct entries
    for (std::size_t i = 0; i <= n; ++i) images[i] = map.apply(t[i]);
    const double lhs = g.evaluate_indices(sample, images);
    const double rhs = g.evaluate_sorted(sample, t);
    ++r.checked;
    if (lhs < rhs) return;
    if (r.weak_contractive) {
      r.weak_contractive = false;
      r.counterexample = ViolationReport{AxiomId::contraction, {images, t}, std::nullopt, lhs,
                                         rhs, lhs - rhs, "g(T X) < g(X) fails"};
    }
  });
  return r;
}

UniquenessReport uniqueness_probe(const GMetric& g, const Domain& domain, const SelfMap& map,
                                  Regime regime, std::span<const Point> starts,
                                  const SolverOptions& opts, double tol) {
  if (starts.empty()) throw Error(ErrorCode::invalid_parameter, "uniqueness probe needs starts");
  UniquenessReport r;
  double scale = 0.0;
  for (const Point& s : starts) {
    const OrbitTrace trace = regime == Regime::quasi ? solve_quasi(g, domain, map, s, opts)
                                                     : solve_banach(g, domain, map, s, opts);
    r.starts.push_back(s);
    r.terminals.push_back(trace.terminal());
    if (!domain.is_finite()) {
      for (double v : trace.terminal()) scale = std::max(scale, std::fabs(v));
    }
  }
  for (std::size_t i = 0; i < r.terminals.size(); ++i) {
    for (std::size_t j = i + 1; j < r.terminals.size(); ++j) {
      r.max_pairwise_g =
          std::max({r.max_pairwise_g, domain.one_vs_rest(g, r.terminals[i], r.terminals[j]),
                    domain.one_vs_rest(g, r.terminals[j], r.terminals[i])});
    }
  }
  r.agree = r.max_pairwise_g <= tol * (1.0 + scale);
  return r;
}

UniquenessReport uniqueness_probe(const GMetric& g, const Domain& domain, const SelfMap& map,
                                  Regime regime, std::size_t trials, std::uint64_t seed,
                                  const SolverOptions& opts, double tol) {
  if (trials < 1) throw Error(ErrorCode::invalid_parameter, "trials must be >= 1");
  std::vector<PointIndex> order(domain.size());
  std::iota(order.begin(), order.end(), PointIndex{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[cb::uniform_below(rng, i)]);
  }
  std::vector<Point> starts;
  for (std::size_t t = 0; t < trials; ++t) starts.push_back(domain.point(order[t % order.size()]));
  return uniqueness_probe(g, domain, map, regime, starts, opts, tol);
}

}  // namespace gmetric
