#pragma once
// Picard iteration under the contraction regimes, contraction-constant
// estimation, orbit diameters and tracking of the theoretical bounds.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gmetric/axioms.hpp"
#include "gmetric/core.hpp"

namespace gmetric {

using Point = std::vector<double>;

/// A self-map: affine on scalars, coordinate-wise affine on vectors, or an
/// explicit table on a finite sample.
class SelfMap {
 public:
  enum class Kind { affine_scalar, affine_vector, table };

  static SelfMap affine(double a, double b);
  static SelfMap affine_vector(std::vector<double> a, std::vector<double> b);
  static SelfMap table(std::vector<PointIndex> images);
  // "affine:a,b" or "table:i0,i1,..."
  static SelfMap parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  const std::vector<double>& slope() const noexcept { return a_; }
  const std::vector<double>& offset() const noexcept { return b_; }
  const std::vector<PointIndex>& images() const noexcept { return table_; }

  Point apply(const Point& x) const;
  PointIndex apply(PointIndex i) const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::affine_scalar;
  std::vector<double> a_, b_;
  std::vector<PointIndex> table_;
};

/// Where iteration happens. A finite domain iterates sample indices (stored
/// as one-element points) through a table map; a continuous domain iterates
/// free coordinates through an affine map, using the sample only for test
/// points and its coordinate metric.
class Domain {
 public:
  static Domain finite(GroundSample sample);
  static Domain continuous(GroundSample sample);
  // Scalars with the l1 metric; test points spread over [lo, hi].
  static Domain scalar_line(double lo = -4.0, double hi = 4.0, std::size_t points = 9);

  bool is_finite() const noexcept { return finite_; }
  const GroundSample& sample() const noexcept { return sample_; }

  // Validates map/domain compatibility and the sample against g.
  void check(const GMetric& g, const SelfMap& map) const;

  double evaluate(const GMetric& g, std::span<const Point> points) const;
  // g(x, y, ..., y)
  double one_vs_rest(const GMetric& g, const Point& x, const Point& y) const;
  Point apply(const SelfMap& map, const Point& x) const;
  // Test point for index i of the sample.
  Point point(PointIndex i) const;
  std::size_t size() const noexcept { return sample_.size(); }

 private:
  Domain(GroundSample sample, bool finite) : sample_(std::move(sample)), finite_(finite) {}
  GroundSample sample_;
  bool finite_ = false;
};

enum class Regime { banach, banach_weak_i, banach_weak_ii, psi_phi, weak_contractive, quasi };
std::string_view to_string(Regime regime);
Regime regime_from_string(std::string_view name);

struct ContractionCertificate {
  Regime regime = Regime::banach;
  double lambda_hat = 0.0;
  std::uint64_t samples_checked = 0;
  std::vector<PointIndex> worst_ratio_witness;
  double worst_lhs = 0.0;
  double worst_rhs = 0.0;
  // lambda_hat >= 1, or a positive left side over a zero right side.
  bool non_contractive = false;
  bool exhaustive = true;
};

// Max of lhs / rhs over tuples of domain test points for the regime's
// inequality. Enumerates every tuple when they fit in `budget`, otherwise
// draws `budget` seeded random tuples.
ContractionCertificate estimate_lambda(const GMetric& g, const Domain& domain, const SelfMap& map,
                                       Regime regime, std::uint64_t budget = 100'000,
                                       std::uint64_t seed = 0);

enum class StopReason { converged, max_iter, bound_violated, non_contractive };
std::string_view to_string(StopReason reason);

struct SolverOptions {
  double lambda = 0.5;
  double tol = 1e-12;  // stop when g(y_k, y_(k+1), ..., y_(k+1)) <= tol
  std::size_t max_iter = 10'000;
  double check_tolerance = 1e-9;  // relative slack for bound checks
  std::size_t orbit_horizon = 30;  // orbit diameters computed for N <= horizon
};

struct OrbitTrace {
  Regime regime = Regime::banach;
  double lambda = 0.0;
  Point start;
  std::vector<Point> iterates;  // y_0 = start, y_1 = T(y_0), ...
  std::vector<double> step_g;   // g(y_k, y_(k+1), ..., y_(k+1))
  std::vector<double> bound_g;  // theoretical bound for step_g[k]
  StopReason stop = StopReason::converged;
  bool bounds_hold = true;
  std::vector<std::string> diagnostics;

  // psi-phi: psi(step_g[k+1]) against psi(step_g[k]) - phi(step_g[k]).
  std::vector<double> psi_lhs, psi_rhs;

  // quasi: g(T^N x, y*, ..., y*) with y* the final iterate, its rate bound,
  // finite orbit diameters s(O(x, N)) and the orbit-lemma quantities.
  std::vector<double> rate_actual, rate_bound;
  double terminal_slack = 0.0;
  std::vector<double> orbit_diameter;
  double orbit_bound = 0.0;
  std::vector<double> orbit_tail_max;  // max g over tuples with powers in 1..N

  const Point& terminal() const { return iterates.back(); }
};

OrbitTrace solve_banach(const GMetric& g, const Domain& domain, const SelfMap& map,
                        const Point& x0, const SolverOptions& opts = {});

/// Control functions psi and phi for the psi-phi solver, drawn from a small
/// catalog and validated numerically on a log-spaced grid.
struct ControlPair {
  enum class Psi { identity, square, bounded };  // x, x^2, x / (1 + x)
  enum class Phi { linear, clamped_square };     // c x, c min(x^2, cap)
  Psi psi = Psi::identity;
  Phi phi = Phi::linear;
  double c = 0.5;
  double cap = 1.0;

  double psi_at(double x) const;
  double phi_at(double x) const;
  // Throws Error(invalid_parameter) when psi is not nondecreasing and zero
  // only at zero, or phi vanishes anywhere except zero.
  void validate() const;
};

std::string_view to_string(ControlPair::Psi psi);
std::string_view to_string(ControlPair::Phi phi);
ControlPair::Psi psi_from_string(std::string_view name);
ControlPair::Phi phi_from_string(std::string_view name);

OrbitTrace solve_psi_phi(const GMetric& g, const Domain& domain, const SelfMap& map,
                         const ControlPair& control, const Point& x0,
                         const SolverOptions& opts = {});

OrbitTrace solve_quasi(const GMetric& g, const Domain& domain, const SelfMap& map,
                       const Point& x0, const SolverOptions& opts = {});

struct WeakContractiveResult {
  std::vector<double> f;  // f(x) = g(x, T(x), ..., T(x))
  PointIndex argmin = 0;
  bool fixed_point = false;  // f(argmin) == 0
  bool weak_contractive = true;
  std::optional<ViolationReport> counterexample;
  std::uint64_t checked = 0;
};

// Finite samples are trivially compact, so a map passing the validation
// (g(T X) < g(X) on every tuple with at least two distinct entries) must have
// f(argmin) == 0.
WeakContractiveResult solve_weak_contractive(const GMetric& g, const GroundSample& sample,
                                             const SelfMap& map);

struct UniquenessReport {
  std::vector<Point> starts;
  std::vector<Point> terminals;
  double max_pairwise_g = 0.0;
  bool agree = false;
};

// Reruns the regime's solver from each start and compares terminals:
// agreement means max pairwise g(t_i, t_j, ..., t_j) <= tol * (1 + scale).
UniquenessReport uniqueness_probe(const GMetric& g, const Domain& domain, const SelfMap& map,
                                  Regime regime, std::span<const Point> starts,
                                  const SolverOptions& opts = {}, double tol = 1e-10);
// Starts drawn from the domain's test points under a seed.
UniquenessReport uniqueness_probe(const GMetric& g, const Domain& domain, const SelfMap& map,
                                  Regime regime, std::size_t trials, std::uint64_t seed,
                                  const SolverOptions& opts = {}, double tol = 1e-10);

}  // namespace gmetric
