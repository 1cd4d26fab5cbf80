#include "gmetric/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "gmetric/analysis.hpp"
#include "gmetric/axioms.hpp"
#include "gmetric/constructions.hpp"
#include "gmetric/fixedpoint.hpp"
#include "gmetric/report.hpp"

namespace gmetric::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string construction;
  std::string spec;
  int order = 2;
  std::string sample;
  std::string mode = "exhaustive";
  std::optional<std::uint64_t> budget;
  std::uint64_t seed = 0;
  std::optional<double> tol;
  std::string out;

  std::string tuple;
  PointIndex center = 0;
  double radius = 0.0;
  std::string eps;
  std::string prefix_file;
  std::optional<PointIndex> limit;

  std::string map;
  std::string regime = "banach";
  std::string x0;
  std::size_t max_iter = 10'000;
  std::size_t trials = 0;
  std::optional<double> lambda;
  std::string psi = "identity";
  std::string phi = "linear";
  double c = 0.5;
  double cap = 1.0;
};

// A report plus its exit code.
struct Outcome {
  Json report;
  int exit_code = kExitOk;
};

Error usage(const std::string& message) { return Error(ErrorCode::parse, message); }

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw usage(std::string("cannot read ") + what + " file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class T>
T parse_scalar(std::string_view text, const char* what) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw usage(std::string("invalid ") + what + ": '" + std::string(text) + "'");
  }
  return value;
}

template <class T>
std::vector<T> parse_list(std::string_view text, const char* what) {
  std::vector<T> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(',', start);
    out.push_back(parse_scalar<T>(text.substr(start, pos == std::string_view::npos
                                                         ? std::string_view::npos
                                                         : pos - start),
                                  what));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

GroundSample require_sample(const Options& o) {
  if (o.sample.empty()) throw usage("--sample is required");
  return load_ground_sample(read_file(o.sample, "sample"));
}

GMetric resolve_construction(const Options& o, const char* fallback) {
  if (!o.construction.empty() && !o.spec.empty()) {
    throw usage("--construction and --spec are mutually exclusive");
  }
  if (!o.spec.empty()) {
    // A path to a spec document, or the document itself.
    std::error_code ec;
    if (fs::is_regular_file(o.spec, ec)) return parse_construction_spec(read_file(o.spec, "spec"));
    return parse_construction_spec(o.spec);
  }
  const std::string name = o.construction.empty() ? std::string(fallback) : o.construction;
  if (name.empty()) throw usage("--construction or --spec is required");
  const auto kind = construction_kind_from_string(name);
  if (!kind) throw usage("unknown construction: " + name);
  return make_construction(*kind, o.order);
}

CheckConfig check_config(const Options& o) {
  CheckConfig cfg;
  if (o.mode == "exhaustive") {
    cfg.exhaustive = true;
  } else if (o.mode == "sampled") {
    cfg.exhaustive = false;
  } else {
    throw usage("--mode must be exhaustive or sampled");
  }
  if (o.tol) cfg.tolerance = *o.tol;
  if (o.budget) cfg.sample_budget = *o.budget;
  cfg.rng_seed = o.seed;
  cfg.validate();
  return cfg;
}

Json header(std::string_view verb, const GMetric& g, const GroundSample* sample) {
  Json j = report_envelope(verb);
  j["construction"] = g.describe();
  j["order"] = g.order();
  if (sample) j["sample_size"] = sample->size();
  return j;
}

Outcome verb_check(const Options& o) {
  const GroundSample sample = require_sample(o);
  const GMetric g = resolve_construction(o, "");
  const CheckConfig cfg = check_config(o);
  const AuditSummary audit = full_audit(g, sample, cfg);
  Outcome r{report_envelope("check")};
  r.report.update(to_json(audit));
  const bool violated =
      audit.verdict == Verdict::fail || (audit.evidence_supports && !*audit.evidence_supports);
  r.exit_code = violated ? kExitViolations : kExitOk;
  return r;
}

Outcome verb_eval(const Options& o) {
  const GroundSample sample = require_sample(o);
  const GMetric g = resolve_construction(o, "");
  if (o.tuple.empty()) throw usage("--tuple is required");
  const auto tuple = parse_list<PointIndex>(o.tuple, "tuple index");
  Outcome r{header("eval", g, &sample)};
  r.report["tuple"] = tuple;
  r.report["value"] = g.evaluate(sample, PointTuple(tuple, g.order()));
  return r;
}

Outcome verb_ball(const Options& o) {
  const GroundSample sample = require_sample(o);
  const GMetric g = resolve_construction(o, "");
  const CheckConfig cfg = check_config(o);
  const GBall ball = g_ball(g, sample, o.center, o.radius);
  const double n1 = static_cast<double>(g.order() + 1);
  const BallQuery query{o.center, o.radius};
  const CheckOutcome inclusion = check_ball_inclusion(g, sample, {&query, 1}, cfg);

  const DistanceMatrix d = derived_metric(g, sample, DerivedVariant::two_sided_block, 1);
  std::vector<PointIndex> d_members;
  for (PointIndex y = 0; y < sample.size(); ++y) {
    if (d(o.center, y) < o.radius) d_members.push_back(y);
  }
  Outcome r{header("ball", g, &sample)};
  r.report["ball"] = to_json(ball);
  r.report["inner_ball"] = to_json(g_ball(g, sample, o.center, o.radius / n1));
  r.report["derived_ball_members"] = d_members;
  r.report["inclusion"] = to_json(inclusion);
  r.exit_code = inclusion.passed() ? kExitOk : kExitViolations;
  return r;
}

Outcome verb_net(const Options& o) {
  const GroundSample sample = require_sample(o);
  const GMetric g = resolve_construction(o, "");
  if (o.eps.empty()) throw usage("--eps is required");
  const double eps = parse_scalar<double>(o.eps, "eps");
  const EpsilonNet net = epsilon_net(g, sample, eps);
  Outcome r{header("net", g, &sample)};
  r.report["eps"] = eps;
  r.report["net"] = to_json(net);
  r.exit_code = net.cover_verified ? kExitOk : kExitViolations;
  return r;
}

Outcome verb_seq(const Options& o) {
  const GroundSample sample = require_sample(o);
  const GMetric g = resolve_construction(o, "");
  if (o.prefix_file.empty()) throw usage("--prefix-file is required");
  const Json prefix_doc = Json::parse(read_file(o.prefix_file, "prefix"));
  if (!prefix_doc.is_array()) throw usage("prefix file must hold a JSON list of indices");
  SequenceDiagnostics diag;
  for (const auto& v : prefix_doc) {
    if (!v.is_number_unsigned()) throw usage("prefix entries must be nonnegative integers");
    diag.prefix.push_back(v.get<PointIndex>());
  }
  diag.candidate_limit = o.limit;
  const std::uint64_t budget = o.budget.value_or(2'000'000);

  Outcome r{header("seq", g, &sample)};
  r.report["prefix"] = diag.prefix;
  const CauchyReport cauchy = diagnose_cauchy(g, sample, diag, budget);
  r.report["cauchy"] = to_json(cauchy);
  if (diag.candidate_limit) {
    const auto eps = parse_list<double>(o.eps.empty() ? "1,0.1,0.01" : o.eps, "eps");
    const ConvergenceReport conv = diagnose_convergence(g, sample, diag, eps, budget);
    r.report["convergence"] = to_json(conv);
    if (!conv.all_agree) r.exit_code = kExitViolations;
  } else {
    r.report["convergence"] = nullptr;
  }
  return r;
}

// "table:<inline indices>" or "table:<path to a JSON list>".
SelfMap resolve_map(const std::string& text) {
  if (text.empty()) throw usage("--map is required");
  const std::string prefix = "table:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string body = text.substr(prefix.size());
    const bool inline_list = !body.empty() && body.find_first_not_of("0123456789, ") == std::string::npos;
    if (!inline_list) {
      const Json doc = Json::parse(read_file(body, "map table"));
      if (!doc.is_array()) throw usage("map table file must hold a JSON list of indices");
      std::vector<PointIndex> images;
      for (const auto& v : doc) {
        if (!v.is_number_unsigned()) throw usage("map table entries must be nonnegative integers");
        images.push_back(v.get<PointIndex>());
      }
      return SelfMap::table(std::move(images));
    }
  }
  return SelfMap::parse(text);
}

Domain resolve_domain(const Options& o, const SelfMap& map) {
  if (map.kind() == SelfMap::Kind::table) return Domain::finite(require_sample(o));
  if (o.sample.empty()) return Domain::scalar_line();
  return Domain::continuous(require_sample(o));
}

Point resolve_start(const Options& o, const Domain& domain) {
  if (o.x0.empty()) return domain.point(0);
  return parse_list<double>(o.x0, "x0");
}

Regime resolve_regime(const Options& o) {
  try {
    return regime_from_string(o.regime);
  } catch (const Error&) {
    throw usage("unknown regime: " + o.regime);
  }
}

// Regime whose ratio certifies the lambda a solver tracks.
Regime certificate_regime(Regime regime) {
  return regime == Regime::weak_contractive ? Regime::banach : regime;
}

Outcome verb_lambda(const Options& o) {
  const SelfMap map = resolve_map(o.map);
  const Domain domain = resolve_domain(o, map);
  const GMetric g = resolve_construction(o, "diameter");
  const Regime regime = resolve_regime(o);
  const ContractionCertificate cert =
      estimate_lambda(g, domain, map, regime, o.budget.value_or(100'000), o.seed);
  Outcome r{header("lambda", g, &domain.sample())};
  r.report["map"] = map.describe();
  r.report["certificate"] = to_json(cert);
  r.exit_code = cert.non_contractive ? kExitViolations : kExitOk;
  return r;
}

Outcome verb_fixpoint(const Options& o) {
  const SelfMap map = resolve_map(o.map);
  const Domain domain = resolve_domain(o, map);
  const GMetric g = resolve_construction(o, "diameter");
  const Regime regime = resolve_regime(o);

  Outcome r{header("fixpoint", g, &domain.sample())};
  r.report["map"] = map.describe();
  r.report["regime"] = to_string(regime);

  if (regime == Regime::weak_contractive) {
    if (!domain.is_finite()) throw usage("regime weak needs a table map over a sample");
    const WeakContractiveResult w = solve_weak_contractive(g, domain.sample(), map);
    r.report["weak"] = to_json(w);
    r.exit_code = w.fixed_point && w.weak_contractive ? kExitOk : kExitViolations;
    return r;
  }

  SolverOptions opts;
  if (o.tol) opts.tol = *o.tol;
  opts.max_iter = o.max_iter;
  if (o.lambda) {
    opts.lambda = *o.lambda;
    r.report["certificate"] = nullptr;
  } else {
    const ContractionCertificate cert = estimate_lambda(
        g, domain, map, certificate_regime(regime), o.budget.value_or(100'000), o.seed);
    r.report["certificate"] = to_json(cert);
    opts.lambda = cert.non_contractive ? std::max(1.0, cert.lambda_hat) : cert.lambda_hat;
    if (!std::isfinite(opts.lambda)) opts.lambda = 1.0;
  }

  const Point x0 = resolve_start(o, domain);
  OrbitTrace trace;
  if (regime == Regime::quasi) {
    trace = solve_quasi(g, domain, map, x0, opts);
  } else if (regime == Regime::psi_phi) {
    ControlPair control;
    control.psi = psi_from_string(o.psi);
    control.phi = phi_from_string(o.phi);
    control.c = o.c;
    control.cap = o.cap;
    trace = solve_psi_phi(g, domain, map, control, x0, opts);
    r.report["control"] = {{"psi", to_string(control.psi)},
                           {"phi", to_string(control.phi)},
                           {"c", control.c},
                           {"cap", control.cap}};
  } else {
    trace = solve_banach(g, domain, map, x0, opts);
  }
  r.report["trace"] = to_json(trace, domain.is_finite());
  bool ok = trace.stop == StopReason::converged && trace.bounds_hold;

  if (o.trials > 0) {
    const UniquenessReport u = uniqueness_probe(g, domain, map, regime, o.trials, o.seed, opts);
    r.report["uniqueness"] = to_json(u, domain.is_finite());
    ok = ok && u.agree;
  } else {
    r.report["uniqueness"] = nullptr;
  }
  r.exit_code = ok ? kExitOk : kExitViolations;
  return r;
}

void add_model_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--construction", o.construction, "Catalog construction name");
  cmd->add_option("--spec", o.spec, "Construction spec JSON (file path or inline document)");
  cmd->add_option("--order", o.order, "Order n of the g-metric")->capture_default_str();
  cmd->add_option("--sample", o.sample, "Ground-sample JSON file");
  cmd->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--out", o.out, "Report path (written atomically); stdout when omitted");
}

void add_check_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--mode", o.mode, "exhaustive or sampled")->capture_default_str();
  cmd->add_option("--budget", o.budget, "Tuple budget for sampled mode");
  cmd->add_option("--tol", o.tol, "Relative tolerance (default 1e-9)");
}

std::string one_line(std::string text) {
  std::replace(text.begin(), text.end(), '\n', ' ');
  while (!text.empty() && text.back() == ' ') text.pop_back();
  return text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"g-metric verifier, analysis and fixed-point solvers", "gmetric"};
  app.require_subcommand(1, 1);

  auto* check = app.add_subcommand("check", "Audit a construction against the axioms");
  add_model_options(check, o);
  add_check_options(check, o);

  auto* eval = app.add_subcommand("eval", "Evaluate g on one tuple");
  add_model_options(eval, o);
  eval->add_option("--tuple", o.tuple, "Comma-separated sample indices");

  auto* ball = app.add_subcommand("ball", "g-ball membership and the ball sandwich");
  add_model_options(ball, o);
  add_check_options(ball, o);
  ball->add_option("--center", o.center, "Center index")->required();
  ball->add_option("--radius", o.radius, "Radius (> 0)")->required();

  auto* net = app.add_subcommand("net", "Greedy eps,g-net");
  add_model_options(net, o);
  net->add_option("--eps", o.eps, "Net radius");

  auto* seq = app.add_subcommand("seq", "Convergence and Cauchy diagnostics on a finite prefix");
  add_model_options(seq, o);
  seq->add_option("--prefix-file", o.prefix_file, "JSON list of sample indices");
  seq->add_option("--limit", o.limit, "Candidate limit index");
  seq->add_option("--eps", o.eps, "Comma-separated epsilons");
  seq->add_option("--budget", o.budget, "Evaluation budget");

  auto* fix = app.add_subcommand("fixpoint", "Picard iteration with bound tracking");
  add_model_options(fix, o);
  fix->add_option("--map", o.map, "affine:a,b | table:i0,i1,... | table:<file>");
  fix->add_option("--regime", o.regime, "banach | psi-phi | quasi | weak")->capture_default_str();
  fix->add_option("--x0", o.x0, "Start point (coordinates, or an index for table maps)");
  fix->add_option("--tol", o.tol, "Stopping tolerance (default 1e-12)");
  fix->add_option("--max-iter", o.max_iter, "Iteration cap")->capture_default_str();
  fix->add_option("--trials", o.trials, "Uniqueness-probe starts (0 = skip)")->capture_default_str();
  fix->add_option("--lambda", o.lambda, "Contraction constant (default: certified estimate)");
  fix->add_option("--budget", o.budget, "Certificate tuple budget");
  fix->add_option("--psi", o.psi, "identity | square | bounded")->capture_default_str();
  fix->add_option("--phi", o.phi, "linear | clamped_square")->capture_default_str();
  fix->add_option("--c", o.c, "phi coefficient")->capture_default_str();
  fix->add_option("--cap", o.cap, "phi clamp")->capture_default_str();

  auto* lambda = app.add_subcommand("lambda", "Estimate the contraction constant of a map");
  add_model_options(lambda, o);
  lambda->add_option("--map", o.map, "affine:a,b | table:i0,i1,... | table:<file>");
  lambda->add_option("--regime", o.regime, "Regime whose ratio is estimated")->capture_default_str();
  lambda->add_option("--budget", o.budget, "Tuple budget");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "gmetric: " << one_line(e.what()) << "\n";
    return kExitUsage;
  }

  try {
    Outcome result;
    if (check->parsed()) {
      result = verb_check(o);
    } else if (eval->parsed()) {
      result = verb_eval(o);
    } else if (ball->parsed()) {
      result = verb_ball(o);
    } else if (net->parsed()) {
      result = verb_net(o);
    } else if (seq->parsed()) {
      result = verb_seq(o);
    } else if (fix->parsed()) {
      result = verb_fixpoint(o);
    } else {
      result = verb_lambda(o);
    }
    if (o.out.empty()) {
      out << render(result.report);
    } else {
      write_report_atomic(o.out, result.report);
    }
    return result.exit_code;
  } catch (const std::exception& e) {
    err << "gmetric: " << one_line(e.what()) << "\n";
    return kExitUsage;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace gmetric::cli
