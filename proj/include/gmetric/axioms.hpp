#pragma once
// Brute-force verification of the g-metric axioms and their consequences over
// a finite sample.
//
// Every checker enumerates tuples (exhaustively, or a seeded random subset
// plus a fixed stress kit of low-support tuples) and reports each inequality
// instance whose left side exceeds the right side by more than
//   tolerance * max(1, |lhs|, |rhs|).

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gmetric/core.hpp"

namespace gmetric {

enum class AxiomId {
  g1,
  g2,
  g3,
  g4,
  mi,
  bp1,
  bp2,
  bp3,
  bp4,
  bp5,
  bp6,
  bp7,
  order3_eq,
  metric_eq,
  ball1,
  ball2,
  ball3,
  ball_inclusion,
  continuity,
  contraction,
};

std::string_view to_string(AxiomId id);

struct ViolationReport {
  AxiomId axiom = AxiomId::g1;
  std::vector<std::vector<PointIndex>> witness;
  std::optional<SplitSpec> split;
  double lhs = 0.0;
  double rhs = 0.0;
  // lhs - rhs for inequalities; |lhs - rhs| for equalities (g2, MI).
  double slack = 0.0;
  std::string detail;

  // Canonical ordering used before any report is emitted.
  friend bool operator<(const ViolationReport& a, const ViolationReport& b);
};

struct CheckConfig {
  double tolerance = 1e-9;
  bool exhaustive = true;
  std::uint64_t sample_budget = 20000;
  std::uint64_t rng_seed = 0;
  // (g4) enumerates blocks as multisets; set to enumerate ordered blocks
  // instead (size^(s+1) * size^(t+1) * size per split). Verdicts agree.
  bool ordered_blocks = false;
  // Stored reports per checker; the total is always counted.
  std::size_t max_reports = 256;

  void validate() const;
};

// lhs <= rhs fails under the scale-free tolerance rule.
bool exceeds(double lhs, double rhs, double tolerance);

struct CheckOutcome {
  std::vector<ViolationReport> violations;  // sorted, at most max_reports
  std::uint64_t violation_count = 0;
  std::uint64_t checked = 0;  // tuples or inequality instances enumerated
  std::vector<std::string> notes;

  bool passed() const noexcept { return violation_count == 0; }
};

// Zero value on a non-constant tuple, positive value on a constant tuple, or
// a negative value.
CheckOutcome check_g1(const GMetric& g, const GroundSample& sample, const CheckConfig& cfg);
// Value unchanged under reversal and rotation of the tuple.
CheckOutcome check_g2(const GMetric& g, const GroundSample& sample, const CheckConfig& cfg);
// supp(X) strictly inside supp(Y) implies g(X) <= g(Y).
CheckOutcome check_g3_monotonicity(const GMetric& g, const GroundSample& sample,
                                   const CheckConfig& cfg);
// Split triangle inequality over every split s + t + 1 = n.
CheckOutcome check_g4_triangle(const GMetric& g, const GroundSample& sample,
                               const CheckConfig& cfg);
// Equal supports imply equal values.
CheckOutcome check_multiplicity_independence(const GMetric& g, const GroundSample& sample,
                                             const CheckConfig& cfg);

struct BasicPropertiesOutcome {
  CheckOutcome outcome;
  // s = 1 instances of items (3) and (7), which must hold with equality.
  std::uint64_t identity_cases = 0;
  std::uint64_t identity_mismatches = 0;
};

// Items (1)-(7) of the basic-properties theorem. The multiplicity-independent
// variant of item (2) runs only when g claims MI.
BasicPropertiesOutcome check_basic_properties(const GMetric& g, const GroundSample& sample,
                                              const CheckConfig& cfg);

struct Order3Agreement {
  bool generic_pass = false;   // (g1)-(g4) checkers
  bool explicit_pass = false;  // the explicit order-3 condition list
  bool agree = false;
  CheckOutcome generic;
  CheckOutcome explicit_conditions;
};

// Runs the generic checkers and the explicit order-3 condition list and
// compares their verdicts. Requires g.order() == 3.
Order3Agreement check_order3_explicit(const GMetric& g, const GroundSample& sample,
                                      const CheckConfig& cfg);

struct Order1Agreement {
  bool gmetric_pass = false;  // order-1 audit of the base metric
  bool metric_pass = false;   // direct four-axiom check of the matrix
  bool agree = false;
};

Order1Agreement check_order1_equivalence(const GroundSample& sample, const CheckConfig& cfg);

enum class Verdict { pass, fail, evidence };
std::string_view to_string(Verdict verdict);

struct AuditSummary {
  std::string construction;
  int order = 0;
  std::size_t sample_size = 0;
  bool exhaustive = true;
  Claims claims;
  // Violations of properties the construction claims.
  std::vector<ViolationReport> violations;
  std::uint64_t violation_count = 0;
  // Observed multiplicity independence, and its counterexamples when the
  // construction does not claim it.
  bool multiplicity_independent = true;
  std::vector<ViolationReport> mi_witnesses;
  std::uint64_t checked = 0;
  std::uint64_t identity_cases = 0;
  std::uint64_t identity_mismatches = 0;
  std::vector<std::string> notes;
  Verdict verdict = Verdict::pass;
  // For conjectural constructions: true when no counterexample was found.
  std::optional<bool> evidence_supports;
};

AuditSummary full_audit(const GMetric& g, const GroundSample& sample, const CheckConfig& cfg);

}  // namespace gmetric
