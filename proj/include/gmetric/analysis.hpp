#pragma once
// g-balls, metrics derived from a g-metric, ball theorems, finite-prefix
// sequence diagnostics, epsilon-nets and numeric joint-continuity checks.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gmetric/axioms.hpp"
#include "gmetric/core.hpp"

namespace gmetric {

struct GBall {
  PointIndex center = 0;
  double radius = 0.0;
  std::vector<PointIndex> members;  // ascending
};

// B_g(center, r) = {y : g(center, y, ..., y) < r}. Requires r > 0.
GBall g_ball(const GMetric& g, const GroundSample& sample, PointIndex center, double radius);

enum class DerivedVariant {
  two_sided_block,   // g(x^s, y^(n+1-s)) + g(y^s, x^(n+1-s))
  multiplicity_sum,  // sum over s = 1..n of g(x^s, y^(n+1-s))
  tuple_max,         // max of g over tuples with entries in {x, y}
};

std::string_view to_string(DerivedVariant variant);
DerivedVariant derived_variant_from_string(std::string_view name);

// Pairwise matrix of the derived distance on the sample. `s` is used by the
// two-sided-block variant only (1 <= s <= n).
DistanceMatrix derived_metric(const GMetric& g, const GroundSample& sample,
                              DerivedVariant variant, int s = 1);

struct BallQuery {
  PointIndex center = 0;
  double radius = 1.0;
};

// Seeded centers and radii spread over the observed g(c, y, ..., y) values.
std::vector<BallQuery> random_ball_queries(const GMetric& g, const GroundSample& sample,
                                           std::size_t count, std::uint64_t seed);

// B_g(c, r/(n+1)) inside B_d(c, r) inside B_g(c, r) with
// d(x, y) = g(x, y..y) + g(y, x..x), as literal membership inclusions.
CheckOutcome check_ball_inclusion(const GMetric& g, const GroundSample& sample,
                                  std::span<const BallQuery> queries, const CheckConfig& cfg);

// Items (1)-(3) of the ball proposition. Item (2) runs only for constructions
// claiming multiplicity independence. Item (3) uses the explicit radius
// delta = min_i (r_i - g(x_i, y, ..., y)) on pairs of `queries`.
CheckOutcome check_ball_proposition(const GMetric& g, const GroundSample& sample,
                                    std::span<const BallQuery> queries, const CheckConfig& cfg);

struct SequenceDiagnostics {
  std::vector<PointIndex> prefix;  // finite stand-in for {x_k}
  std::optional<PointIndex> candidate_limit;
};

// The least N of a criterion on a finite prefix, if any. A criterion counts as
// satisfied when N leaves a tail of at least half the prefix; the verdict is
// "consistent with convergence up to the prefix length", never a proof.
struct CriterionResult {
  std::optional<std::size_t> least_n;
  bool satisfied = false;
};

struct ConvergenceAtEps {
  double eps = 0.0;
  CriterionResult tuple;                // g(x, x_i1, ..., x_in) < eps for i_j >= N
  CriterionResult ball;                 // x_k in B_g(x, eps) for k >= N
  std::vector<CriterionResult> blocks;  // s = 1..n: g(x_k1..x_ks, x..x) < eps
  bool agree = false;
};

struct ConvergenceReport {
  PointIndex limit = 0;
  std::size_t prefix_length = 0;
  std::vector<ConvergenceAtEps> per_eps;
  bool all_agree = true;
  std::uint64_t evaluations = 0;
  // Tail positions whose multisets were not all enumerated within the budget.
  bool budget_exhausted = false;
};

ConvergenceReport diagnose_convergence(const GMetric& g, const GroundSample& sample,
                                       const SequenceDiagnostics& diag,
                                       std::span<const double> epsilons,
                                       std::uint64_t budget = 2'000'000);

struct CauchyReport {
  std::size_t prefix_length = 0;
  std::vector<double> consecutive;  // g(x_k, x_(k+1), ..., x_(k+1))
  // Suprema over the tail starting at half the prefix, and over the whole
  // prefix, for each criterion.
  double tuple_tail_sup = 0.0, tuple_head_sup = 0.0;
  double consecutive_tail_sup = 0.0, consecutive_head_sup = 0.0;
  std::vector<double> block_tail_sup, block_head_sup;  // s = 1..n
  bool tuple_decaying = false;
  bool consecutive_decaying = false;
  std::vector<bool> block_decaying;
  bool criteria_agree = false;
  // Consecutive values shrink much faster than pairwise tail values: the
  // criteria agree only in the limit, not on this prefix.
  bool finite_prefix_caveat = false;
  std::uint64_t evaluations = 0;
  bool budget_exhausted = false;
};

CauchyReport diagnose_cauchy(const GMetric& g, const GroundSample& sample,
                             const SequenceDiagnostics& diag, std::uint64_t budget = 2'000'000);

struct EpsilonNet {
  std::vector<PointIndex> centers;
  bool cover_verified = false;
};

// Greedy cover: scans points in index order and adds each uncovered point as
// a center. Requires eps > 0.
EpsilonNet epsilon_net(const GMetric& g, const GroundSample& sample, double eps);

struct ContinuityReport {
  CheckOutcome outcome;
  std::uint64_t pairs = 0;
  double max_difference = 0.0;
  // Largest lhs - rhs seen; negative when every pair held with margin.
  double worst_slack = 0.0;
};

// Perturbs each coordinate of random sample tuples by at most h and checks
// |g(X) - g(X')| against the sums of g(x_i', x_i, ..., x_i) (and the reverse
// direction). Needs coordinate points with a coordinate metric.
ContinuityReport check_joint_continuity(const GMetric& g, const GroundSample& sample,
                                        const CheckConfig& cfg, double h = 1e-3,
                                        std::size_t pairs = 100);

}  // namespace gmetric
