#include "gmetric/report.hpp"

#include <fstream>
#include <system_error>

namespace gmetric {

namespace {

Json point_json(const Point& p, bool finite_domain) {
  if (finite_domain) return static_cast<PointIndex>(p.at(0));
  if (p.size() == 1) return p[0];
  return p;
}

Json criterion_json(const CriterionResult& c) {
  Json j;
  j["least_n"] = c.least_n ? Json(*c.least_n) : Json(nullptr);
  j["satisfied"] = c.satisfied;
  return j;
}

Json violations_json(const std::vector<ViolationReport>& reports) {
  Json out = Json::array();
  for (const auto& r : reports) out.push_back(to_json(r));
  return out;
}

}  // namespace

Json report_envelope(std::string_view verb) {
  Json j;
  j["version"] = kReportVersion;
  j["verb"] = verb;
  return j;
}

Json to_json(const ViolationReport& r) {
  Json j;
  j["axiom"] = to_string(r.axiom);
  j["witness"] = r.witness;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["slack"] = r.slack;
  if (!r.detail.empty()) j["detail"] = r.detail;
  if (r.split) {
    j["split"] = {{"s", r.split->s}, {"t", r.split->t}, {"w", r.split->w_index}};
  }
  return j;
}

Json to_json(const CheckOutcome& o) {
  Json j;
  j["violations"] = violations_json(o.violations);
  j["violation_count"] = o.violation_count;
  j["checked"] = o.checked;
  j["notes"] = o.notes;
  j["passed"] = o.passed();
  return j;
}

Json to_json(const AuditSummary& a) {
  Json j;
  j["construction"] = a.construction;
  j["order"] = a.order;
  j["sample_size"] = a.sample_size;
  j["mode"] = a.exhaustive ? "exhaustive" : "sampled";
  j["violations"] = violations_json(a.violations);
  j["violation_count"] = a.violation_count;
  j["conjectural"] = a.claims.conjectural;
  j["multiplicity_independent_claimed"] = a.claims.multiplicity_independent;
  j["multiplicity_independent"] = a.multiplicity_independent;
  j["mi_witnesses"] = violations_json(a.mi_witnesses);
  j["checked"] = a.checked;
  j["identity_cases"] = a.identity_cases;
  j["identity_mismatches"] = a.identity_mismatches;
  j["notes"] = a.notes;
  j["verdict"] = to_string(a.verdict);
  if (a.evidence_supports) {
    j["evidence"] = *a.evidence_supports ? "conjecture supported" : "conjecture violated";
  }
  return j;
}

Json to_json(const GBall& b) {
  return {{"center", b.center}, {"radius", b.radius}, {"members", b.members}};
}

Json to_json(const ConvergenceReport& r) {
  Json j;
  j["limit"] = r.limit;
  j["prefix_length"] = r.prefix_length;
  j["all_agree"] = r.all_agree;
  j["evaluations"] = r.evaluations;
  j["budget_exhausted"] = r.budget_exhausted;
  Json per = Json::array();
  for (const auto& e : r.per_eps) {
    Json blocks = Json::array();
    for (const auto& b : e.blocks) blocks.push_back(criterion_json(b));
    per.push_back({{"eps", e.eps},
                   {"tuple", criterion_json(e.tuple)},
                   {"ball", criterion_json(e.ball)},
                   {"blocks", blocks},
                   {"agree", e.agree}});
  }
  j["per_eps"] = per;
  return j;
}

Json to_json(const CauchyReport& r) {
  Json j;
  j["prefix_length"] = r.prefix_length;
  j["consecutive"] = r.consecutive;
  j["tuple_tail_sup"] = r.tuple_tail_sup;
  j["tuple_head_sup"] = r.tuple_head_sup;
  j["consecutive_tail_sup"] = r.consecutive_tail_sup;
  j["consecutive_head_sup"] = r.consecutive_head_sup;
  j["block_tail_sup"] = r.block_tail_sup;
  j["block_head_sup"] = r.block_head_sup;
  j["tuple_decaying"] = r.tuple_decaying;
  j["consecutive_decaying"] = r.consecutive_decaying;
  j["block_decaying"] = r.block_decaying;
  j["criteria_agree"] = r.criteria_agree;
  j["finite_prefix_caveat"] = r.finite_prefix_caveat;
  j["evaluations"] = r.evaluations;
  j["budget_exhausted"] = r.budget_exhausted;
  return j;
}

Json to_json(const EpsilonNet& n) {
  return {{"centers", n.centers}, {"cover_verified", n.cover_verified}};
}

Json to_json(const ContractionCertificate& c) {
  Json j;
  j["regime"] = to_string(c.regime);
  j["lambda_hat"] = c.lambda_hat;
  j["samples_checked"] = c.samples_checked;
  j["worst_ratio_witness"] = c.worst_ratio_witness;
  j["worst_lhs"] = c.worst_lhs;
  j["worst_rhs"] = c.worst_rhs;
  j["non_contractive"] = c.non_contractive;
  j["exhaustive"] = c.exhaustive;
  return j;
}

Json to_json(const OrbitTrace& t, bool finite_domain) {
  Json j;
  j["regime"] = to_string(t.regime);
  j["lambda"] = t.lambda;
  j["start"] = point_json(t.start, finite_domain);
  j["terminal"] = point_json(t.terminal(), finite_domain);
  j["iterations"] = t.step_g.size();
  j["stop"] = to_string(t.stop);
  j["bounds_hold"] = t.bounds_hold;
  j["diagnostics"] = t.diagnostics;
  Json steps = Json::array();
  for (std::size_t k = 0; k < t.step_g.size(); ++k) {
    steps.push_back({{"k", k},
                     {"step_g", t.step_g[k]},
                     {"bound_g", t.bound_g[k]},
                     {"iterate", point_json(t.iterates[k + 1], finite_domain)}});
  }
  j["steps"] = steps;
  if (t.regime == Regime::psi_phi) {
    j["psi_lhs"] = t.psi_lhs;
    j["psi_rhs"] = t.psi_rhs;
  }
  if (t.regime == Regime::quasi) {
    j["rate_actual"] = t.rate_actual;
    j["rate_bound"] = t.rate_bound;
    j["terminal_slack"] = t.terminal_slack;
    j["orbit_diameter"] = t.orbit_diameter;
    j["orbit_bound"] = t.orbit_bound;
    j["orbit_tail_max"] = t.orbit_tail_max;
  }
  return j;
}

Json to_json(const WeakContractiveResult& r) {
  Json j;
  j["f"] = r.f;
  j["argmin"] = r.argmin;
  j["fixed_point"] = r.fixed_point;
  j["weak_contractive"] = r.weak_contractive;
  j["counterexample"] = r.counterexample ? to_json(*r.counterexample) : Json(nullptr);
  j["checked"] = r.checked;
  return j;
}

Json to_json(const UniquenessReport& r, bool finite_domain) {
  Json starts = Json::array(), terminals = Json::array();
  for (const auto& s : r.starts) starts.push_back(point_json(s, finite_domain));
  for (const auto& t : r.terminals) terminals.push_back(point_json(t, finite_domain));
  return {{"starts", starts},
          {"terminals", terminals},
          {"max_pairwise_g", r.max_pairwise_g},
          {"agree", r.agree}};
}

std::string render(const Json& report) { return report.dump(2) + "\n"; }

void write_report_atomic(const std::filesystem::path& path, const Json& report) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::invalid_parameter, "cannot write " + tmp.string());
    out << render(report);
    out.flush();
    if (!out) throw Error(ErrorCode::invalid_parameter, "write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::invalid_parameter, "cannot rename report into " + path.string());
  }
}

}  // namespace gmetric
