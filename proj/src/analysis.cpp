#include "gmetric/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <tuple>

#include "gmetric/combinatorics.hpp"

namespace gmetric {

namespace cb = combinatorics;
using Indices = std::vector<PointIndex>;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Indices block(PointIndex x, std::size_t a, PointIndex y, std::size_t b) {
  Indices t(a, x);
  t.insert(t.end(), b, y);
  return t;
}

std::size_t order_of(const GMetric& g) { return static_cast<std::size_t>(g.order()); }

// g(x, y, ..., y)
double one_vs_rest(const GMetric& g, const GroundSample& sample, PointIndex x, PointIndex y) {
  const Indices t = block(x, 1, y, order_of(g));
  return g.evaluate_indices(sample, t);
}

void check_index(const GroundSample& sample, PointIndex i, const char* what) {
  if (i >= sample.size()) {
    throw Error(ErrorCode::index_out_of_range,
                std::string(what) + " index " + std::to_string(i) + " out of range for sample of size " +
                    std::to_string(sample.size()));
  }
}

void record(CheckOutcome& out, const CheckConfig& cfg, ViolationReport r) {
  ++out.violation_count;
  if (out.violations.size() < cfg.max_reports) out.violations.push_back(std::move(r));
}

}  // namespace

GBall g_ball(const GMetric& g, const GroundSample& sample, PointIndex center, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::invalid_parameter, "ball radius must be > 0");
  check_index(sample, center, "center");
  g.check_sample(sample);
  GBall ball{center, radius, {}};
  for (PointIndex y = 0; y < sample.size(); ++y) {
    if (one_vs_rest(g, sample, center, y) < radius) ball.members.push_back(y);
  }
  return ball;
}

std::string_view to_string(DerivedVariant variant) {
  switch (variant) {
    case DerivedVariant::two_sided_block:
      return "two_sided_block";
    case DerivedVariant::multiplicity_sum:
      return "multiplicity_sum";
    case DerivedVariant::tuple_max:
      return "tuple_max";
  }
  return "unknown";
}

DerivedVariant derived_variant_from_string(std::string_view name) {
  if (name == "two_sided_block") return DerivedVariant::two_sided_block;
  if (name == "multiplicity_sum") return DerivedVariant::multiplicity_sum;
  if (name == "tuple_max") return DerivedVariant::tuple_max;
  throw Error(ErrorCode::invalid_parameter, "unknown derived metric variant: " + std::string(name));
}

DistanceMatrix derived_metric(const GMetric& g, const GroundSample& sample,
                              DerivedVariant variant, int s) {
  const std::size_t n = order_of(g);
  if (variant == DerivedVariant::two_sided_block && (s < 1 || static_cast<std::size_t>(s) > n)) {
    throw Error(ErrorCode::invalid_parameter,
                "block size s must lie in 1.." + std::to_string(n) + ", got " + std::to_string(s));
  }
  g.check_sample(sample);
  const std::size_t size = sample.size();
  DistanceMatrix d;
  d.side = size;
  d.values.assign(size * size, 0.0);
  auto G = [&](PointIndex x, std::size_t a, PointIndex y) {
    const Indices t = block(x, a, y, n + 1 - a);
    return g.evaluate_indices(sample, t);
  };
  const auto su = static_cast<std::size_t>(s);
  for (PointIndex x = 0; x < size; ++x) {
    for (PointIndex y = 0; y < size; ++y) {
      if (x == y) continue;
      double v = 0.0;
      switch (variant) {
        case DerivedVariant::two_sided_block:
          v = G(x, su, y) + G(y, su, x);
          break;
        case DerivedVariant::multiplicity_sum:
          for (std::size_t k = 1; k <= n; ++k) v += G(x, k, y);
          break;
        case DerivedVariant::tuple_max:
          for (std::size_t k = 0; k <= n + 1; ++k) v = std::max(v, G(x, k, y));
          break;
      }
      d(x, y) = v;
    }
  }
  return d;
}

std::vector<BallQuery> random_ball_queries(const GMetric& g, const GroundSample& sample,
                                           std::size_t count, std::uint64_t seed) {
  g.check_sample(sample);
  std::mt19937_64 rng(seed);
  std::vector<BallQuery> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const PointIndex c = cb::uniform_below(rng, sample.size());
    const PointIndex y = cb::uniform_below(rng, sample.size());
    double r = one_vs_rest(g, sample, c, y) * (0.5 + cb::uniform_unit(rng));
    // Land some radii exactly on observed values to exercise the strict
    // inequality.
    if (i % 5 == 4) r = one_vs_rest(g, sample, c, y);
    if (!(r > 0.0)) r = 0.5 + cb::uniform_unit(rng);
    out.push_back({c, r});
  }
  return out;
}

CheckOutcome check_ball_inclusion(const GMetric& g, const GroundSample& sample,
                                  std::span<const BallQuery> queries, const CheckConfig& cfg) {
  cfg.validate();
  g.check_sample(sample);
  CheckOutcome out;
  const double n1 = static_cast<double>(g.order() + 1);
  for (const BallQuery& q : queries) {
    check_index(sample, q.center, "center");
    if (!(q.radius > 0.0)) throw Error(ErrorCode::invalid_parameter, "ball radius must be > 0");
    for (PointIndex y = 0; y < sample.size(); ++y) {
      const double gy = one_vs_rest(g, sample, q.center, y);
      const double d = gy + one_vs_rest(g, sample, y, q.center);
      const bool in_inner = gy < q.radius / n1;
      const bool in_d = d < q.radius;
      const bool in_outer = gy < q.radius;
      out.checked += 2;
      const Indices witness = block(q.center, 1, y, order_of(g));
      if (in_inner && !in_d) {
        record(out, cfg,
               {AxiomId::ball_inclusion, {witness}, std::nullopt, d, q.radius, d - q.radius,
                "inner ball not inside d-ball"});
      }
      if (in_d && !in_outer) {
        record(out, cfg,
               {AxiomId::ball_inclusion, {witness}, std::nullopt, gy, q.radius, gy - q.radius,
                "d-ball not inside outer ball"});
      }
    }
  }
  std::sort(out.violations.begin(), out.violations.end());
  return out;
}

CheckOutcome check_ball_proposition(const GMetric& g, const GroundSample& sample,
                                    std::span<const BallQuery> queries, const CheckConfig& cfg) {
  cfg.validate();
  g.check_sample(sample);
  CheckOutcome out;
  const std::size_t n = order_of(g);
  const std::size_t size = sample.size();
  const bool mi = g.claims().multiplicity_independent;

  // Items (1) and (2): for every r > g(T), each entry lies in the ball about
  // any other entry, i.e. g(a, b, ..., b) <= g(T).
  auto scan = [&](const Indices& t) {
    Indices support = t;
    support.erase(std::unique(support.begin(), support.end()), support.end());
    if (support.size() < 2) return;
    const bool item1 = support.size() >= 3;
    if (!item1 && !mi) return;
    const double v = g.evaluate_sorted(sample, t);
    for (PointIndex a : support) {
      for (PointIndex b : support) {
        if (a == b) continue;
        const Indices ab = block(a, 1, b, n);
        const double lhs = g.evaluate_indices(sample, ab);
        ++out.checked;
        if (exceeds(lhs, v, cfg.tolerance)) {
          record(out, cfg,
                 {item1 ? AxiomId::ball1 : AxiomId::ball2, {t, ab}, std::nullopt, lhs, v, lhs - v,
                  {}});
        }
      }
    }
  };
  if (cfg.exhaustive) {
    cb::for_each_multiset(size, n + 1, scan);
  } else {
    std::mt19937_64 rng(cfg.rng_seed ^ 0xd6e8feb86659fd93ULL);
    for (std::uint64_t i = 0; i < cfg.sample_budget; ++i) {
      Indices t(n + 1);
      for (auto& e : t) e = cb::uniform_below(rng, size);
      std::sort(t.begin(), t.end());
      scan(t);
    }
  }
  if (!mi) out.notes.push_back("ball2 skipped: construction not multiplicity-independent");

  // Item (3): consecutive query pairs as (x1, r1), (x2, r2).
  for (std::size_t qi = 0; qi + 1 < queries.size(); qi += 2) {
    const BallQuery& b1 = queries[qi];
    const BallQuery& b2 = queries[qi + 1];
    check_index(sample, b1.center, "center");
    check_index(sample, b2.center, "center");
    for (PointIndex y = 0; y < size; ++y) {
      const double g1 = one_vs_rest(g, sample, b1.center, y);
      const double g2 = one_vs_rest(g, sample, b2.center, y);
      if (!(g1 < b1.radius && g2 < b2.radius)) continue;
      const double delta = std::min(b1.radius - g1, b2.radius - g2);
      for (PointIndex z = 0; z < size; ++z) {
        if (!(one_vs_rest(g, sample, y, z) < delta)) continue;
        for (const BallQuery* b : {&b1, &b2}) {
          const double gz = one_vs_rest(g, sample, b->center, z);
          ++out.checked;
          if (!(gz < b->radius)) {
            record(out, cfg,
                   {AxiomId::ball3,
                    {block(b->center, 1, z, n), block(y, 1, z, n)},
                    std::nullopt,
                    gz,
                    b->radius,
                    gz - b->radius,
                    "delta=" + std::to_string(delta)});
          }
        }
      }
    }
  }
  std::sort(out.violations.begin(), out.violations.end());
  return out;
}

namespace {

// Suffix maxima over multisets of prefix positions: result[p] is the max of
// value(positions) over all size-k multisets of positions in [p, L). Positions
// are processed from the end of the prefix so a budget covers the tail first;
// `stop` is the first position whose maximum is complete.
struct SuffixMax {
  std::vector<double> max;  // size L + 1, max[L] = -inf
  std::size_t stop = 0;
  std::uint64_t evaluations = 0;
  bool exhausted = false;
};

template <class Value>
SuffixMax suffix_max(std::size_t length, std::size_t k, std::uint64_t budget, Value&& value) {
  SuffixMax r;
  r.max.assign(length + 1, kNegInf);
  r.stop = length;
  std::vector<std::size_t> positions(k);
  for (std::size_t p = length; p-- > 0;) {
    const std::uint64_t cost = k == 0 ? 1 : cb::multichoose(length - p, k - 1);
    if (r.evaluations + cost > budget) {
      r.exhausted = true;
      break;
    }
    double m = r.max[p + 1];
    if (k == 0) {
      m = std::max(m, value(positions));
    } else {
      cb::for_each_multiset(length - p, k - 1, [&](const Indices& rest) {
        positions[0] = p;
        for (std::size_t i = 0; i < rest.size(); ++i) positions[i + 1] = p + rest[i];
        m = std::max(m, value(positions));
      });
    }
    r.evaluations += cost;
    r.max[p] = m;
    r.stop = p;
  }
  return r;
}

CriterionResult least_n(const SuffixMax& sm, double eps, std::size_t length) {
  CriterionResult c;
  for (std::size_t p = sm.stop; p < length; ++p) {
    if (sm.max[p] < eps) {
      c.least_n = p;
      break;
    }
  }
  c.satisfied = c.least_n && 2 * *c.least_n <= length;
  return c;
}

void validate_prefix(const GroundSample& sample, const SequenceDiagnostics& diag) {
  if (diag.prefix.empty()) throw Error(ErrorCode::invalid_parameter, "sequence prefix is empty");
  for (PointIndex p : diag.prefix) check_index(sample, p, "prefix");
}

}  // namespace

ConvergenceReport diagnose_convergence(const GMetric& g, const GroundSample& sample,
                                       const SequenceDiagnostics& diag,
                                       std::span<const double> epsilons, std::uint64_t budget) {
  validate_prefix(sample, diag);
  if (!diag.candidate_limit) {
    throw Error(ErrorCode::invalid_parameter, "convergence diagnostics need a candidate limit");
  }
  const PointIndex x = *diag.candidate_limit;
  check_index(sample, x, "limit");
  for (double eps : epsilons) {
    if (!(eps > 0.0)) throw Error(ErrorCode::invalid_parameter, "eps must be > 0");
  }
  if (budget < 1) throw Error(ErrorCode::invalid_parameter, "budget must be >= 1");
  g.check_sample(sample);

  const std::size_t n = order_of(g);
  const std::size_t length = diag.prefix.size();
  ConvergenceReport report;
  report.limit = x;
  report.prefix_length = length;

  Indices t(n + 1);
  auto eval_block = [&](const std::vector<std::size_t>& pos, std::size_t s) {
    for (std::size_t i = 0; i < s; ++i) t[i] = diag.prefix[pos[i]];
    for (std::size_t i = s; i <= n; ++i) t[i] = x;
    return g.evaluate_indices(sample, t);
  };

  // Criterion (1): the limit plus n prefix entries.
  const SuffixMax tuple = suffix_max(length, n, budget, [&](const std::vector<std::size_t>& pos) {
    t[0] = x;
    for (std::size_t i = 0; i < n; ++i) t[i + 1] = diag.prefix[pos[i]];
    return g.evaluate_indices(sample, t);
  });
  // Criterion (2): single entries, ball membership.
  SuffixMax ball;
  ball.max.assign(length + 1, kNegInf);
  for (std::size_t p = length; p-- > 0;) {
    ball.max[p] = std::max(ball.max[p + 1], one_vs_rest(g, sample, x, diag.prefix[p]));
  }
  ball.evaluations = length;
  // Criterion (3): s entries followed by the limit, for every s.
  std::vector<SuffixMax> blocks;
  for (std::size_t s = 1; s <= n; ++s) {
    blocks.push_back(suffix_max(length, s, budget,
                                [&](const std::vector<std::size_t>& pos) { return eval_block(pos, s); }));
  }

  report.evaluations = tuple.evaluations + ball.evaluations;
  report.budget_exhausted = tuple.exhausted;
  for (const auto& b : blocks) {
    report.evaluations += b.evaluations;
    report.budget_exhausted = report.budget_exhausted || b.exhausted;
  }

  for (double eps : epsilons) {
    ConvergenceAtEps e;
    e.eps = eps;
    e.tuple = least_n(tuple, eps, length);
    e.ball = least_n(ball, eps, length);
    e.agree = e.tuple.satisfied == e.ball.satisfied;
    for (const auto& b : blocks) {
      e.blocks.push_back(least_n(b, eps, length));
      e.agree = e.agree && e.blocks.back().satisfied == e.tuple.satisfied;
    }
    report.all_agree = report.all_agree && e.agree;
    report.per_eps.push_back(std::move(e));
  }
  return report;
}

CauchyReport diagnose_cauchy(const GMetric& g, const GroundSample& sample,
                             const SequenceDiagnostics& diag, std::uint64_t budget) {
  validate_prefix(sample, diag);
  if (budget < 1) throw Error(ErrorCode::invalid_parameter, "budget must be >= 1");
  g.check_sample(sample);
  const std::size_t n = order_of(g);
  const std::size_t length = diag.prefix.size();
  const std::size_t half = length / 2;
  CauchyReport r;
  r.prefix_length = length;

  auto decaying = [](double tail, double head) { return head == 0.0 || tail < head; };
  auto sup_from = [](const std::vector<double>& v, std::size_t from) {
    double m = 0.0;
    for (std::size_t i = from; i < v.size(); ++i) m = std::max(m, v[i]);
    return m;
  };

  // Criterion (2): consecutive terms.
  for (std::size_t k = 0; k + 1 < length; ++k) {
    r.consecutive.push_back(one_vs_rest(g, sample, diag.prefix[k], diag.prefix[k + 1]));
  }
  r.evaluations += r.consecutive.size();
  r.consecutive_head_sup = sup_from(r.consecutive, 0);
  r.consecutive_tail_sup = sup_from(r.consecutive, half);
  r.consecutive_decaying = decaying(r.consecutive_tail_sup, r.consecutive_head_sup);

  // Criterion (1): all (n+1)-multisets of prefix entries.
  Indices t(n + 1);
  const SuffixMax tuple =
      suffix_max(length, n + 1, budget, [&](const std::vector<std::size_t>& pos) {
        for (std::size_t i = 0; i <= n; ++i) t[i] = diag.prefix[pos[i]];
        return g.evaluate_indices(sample, t);
      });
  r.evaluations += tuple.evaluations;
  r.budget_exhausted = tuple.exhausted;
  r.tuple_head_sup = std::max(0.0, tuple.max[tuple.stop]);
  r.tuple_tail_sup = std::max(0.0, tuple.max[std::max(half, tuple.stop)]);
  r.tuple_decaying = decaying(r.tuple_tail_sup, r.tuple_head_sup);

  // Criterion (3): g(x_k^s, x_l^(n+1-s)) over position pairs.
  bool agree = r.tuple_decaying == r.consecutive_decaying;
  for (std::size_t s = 1; s <= n; ++s) {
    double head = 0.0, tail = 0.0;
    for (std::size_t k = 0; k < length; ++k) {
      for (std::size_t l = 0; l < length; ++l) {
        const Indices b = block(diag.prefix[k], s, diag.prefix[l], n + 1 - s);
        const double v = g.evaluate_indices(sample, b);
        head = std::max(head, v);
        if (k >= half && l >= half) tail = std::max(tail, v);
      }
    }
    r.evaluations += static_cast<std::uint64_t>(length) * length;
    r.block_head_sup.push_back(head);
    r.block_tail_sup.push_back(tail);
    r.block_decaying.push_back(decaying(tail, head));
    agree = agree && r.block_decaying.back() == r.tuple_decaying;
  }
  r.criteria_agree = agree;

  if (r.consecutive_decaying && r.consecutive_head_sup > 0.0 && r.tuple_head_sup > 0.0) {
    const double consecutive_ratio = r.consecutive_tail_sup / r.consecutive_head_sup;
    const double tuple_ratio = r.tuple_tail_sup / r.tuple_head_sup;
    r.finite_prefix_caveat = tuple_ratio > 2.0 * consecutive_ratio;
  }
  return r;
}

EpsilonNet epsilon_net(const GMetric& g, const GroundSample& sample, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::invalid_parameter, "eps must be > 0");
  g.check_sample(sample);
  const std::size_t size = sample.size();
  EpsilonNet net;
  std::vector<char> covered(size, 0);
  for (PointIndex a = 0; a < size; ++a) {
    if (covered[a]) continue;
    net.centers.push_back(a);
    for (PointIndex y = 0; y < size; ++y) {
      if (!covered[y] && one_vs_rest(g, sample, a, y) < eps) covered[y] = 1;
    }
  }
  // Post hoc verification, independent of the bookkeeping above.
  net.cover_verified = true;
  for (PointIndex y = 0; y < size && net.cover_verified; ++y) {
    net.cover_verified = std::any_of(net.centers.begin(), net.centers.end(), [&](PointIndex a) {
      return one_vs_rest(g, sample, a, y) < eps;
    });
  }
  return net;
}

ContinuityReport check_joint_continuity(const GMetric& g, const GroundSample& sample,
                                        const CheckConfig& cfg, double h, std::size_t pairs) {
  cfg.validate();
  if (!(h >= 0.0) || !std::isfinite(h)) {
    throw Error(ErrorCode::invalid_parameter, "perturbation bound must be finite and >= 0");
  }
  if (!sample.has_coordinates() || sample.metric() == MetricSource::explicit_matrix) {
    throw Error(ErrorCode::incompatible_sample,
                "joint continuity check needs coordinate points with a coordinate metric");
  }
  g.check_sample(sample);
  const std::size_t n = order_of(g);
  const std::size_t dim = sample.dimension();
  const MetricSource metric = sample.metric();
  ContinuityReport r;
  r.worst_slack = kNegInf;
  std::mt19937_64 rng(cfg.rng_seed ^ 0x632be59bd9b4e019ULL);

  using Point = std::vector<double>;
  auto G = [&](const std::vector<Point>& pts) { return evaluate_points(g, pts, metric); };
  auto lead_then_rest = [&](const Point& a, const Point& b) {
    std::vector<Point> pts(n + 1, b);
    pts[0] = a;
    return G(pts);
  };

  for (std::size_t p = 0; p < pairs; ++p) {
    Indices idx(n + 1);
    for (auto& e : idx) e = cb::uniform_below(rng, sample.size());
    std::vector<Point> X, Xp;
    for (PointIndex i : idx) {
      Point x = sample.point(i);
      Point xp = x;
      for (std::size_t k = 0; k < dim; ++k) xp[k] += h * (2.0 * cb::uniform_unit(rng) - 1.0);
      X.push_back(std::move(x));
      Xp.push_back(std::move(xp));
    }
    const double gx = G(X);
    const double gxp = G(Xp);
    double forward = 0.0, backward = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      forward += lead_then_rest(Xp[i], X[i]);
      backward += lead_then_rest(X[i], Xp[i]);
    }
    r.max_difference = std::max(r.max_difference, std::fabs(gx - gxp));
    for (auto [lhs, rhs, what] : {std::tuple{gxp - gx, forward, "perturbed above original"},
                                  std::tuple{gx - gxp, backward, "original above perturbed"}}) {
      ++r.outcome.checked;
      r.worst_slack = std::max(r.worst_slack, lhs - rhs);
      if (exceeds(lhs, rhs, cfg.tolerance)) {
        record(r.outcome, cfg, {AxiomId::continuity, {idx}, std::nullopt, lhs, rhs, lhs - rhs, what});
      }
    }
    ++r.pairs;
  }
  if (r.pairs == 0) r.worst_slack = 0.0;
  std::sort(r.outcome.violations.begin(), r.outcome.violations.end());
  return r;
}

}  // namespace gmetric
