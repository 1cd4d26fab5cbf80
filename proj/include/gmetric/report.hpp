#pragma once
// JSON serialization of verifier, analysis and solver results, and the
// atomic report writer used by the CLI.
//
// Objects use sorted keys and doubles print in shortest round-trip form, so
// equal results always serialize to equal bytes.

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "gmetric/analysis.hpp"
#include "gmetric/axioms.hpp"
#include "gmetric/fixedpoint.hpp"

namespace gmetric {

using Json = nlohmann::json;

inline constexpr std::string_view kReportVersion = "gmetric-report/1";

// {"version": "gmetric-report/1", "verb": verb}
Json report_envelope(std::string_view verb);

Json to_json(const ViolationReport& report);
Json to_json(const CheckOutcome& outcome);
Json to_json(const AuditSummary& audit);
Json to_json(const GBall& ball);
Json to_json(const ConvergenceReport& report);
Json to_json(const CauchyReport& report);
Json to_json(const EpsilonNet& net);
Json to_json(const ContractionCertificate& cert);
// Points of a finite domain serialize as their sample index.
Json to_json(const OrbitTrace& trace, bool finite_domain);
Json to_json(const WeakContractiveResult& result);
Json to_json(const UniquenessReport& report, bool finite_domain);

// Two-space indented text with a trailing newline.
std::string render(const Json& report);

// Writes to a sibling temporary file, then renames it over `path`.
void write_report_atomic(const std::filesystem::path& path, const Json& report);

}  // namespace gmetric
