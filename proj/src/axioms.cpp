#include "gmetric/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <tuple>

#include "gmetric/combinatorics.hpp"
#include "gmetric/constructions.hpp"

namespace gmetric {

namespace cb = combinatorics;
using Indices = std::vector<PointIndex>;

std::string_view to_string(AxiomId id) {
  switch (id) {
    case AxiomId::g1:
      return "g1";
    case AxiomId::g2:
      return "g2";
    case AxiomId::g3:
      return "g3";
    case AxiomId::g4:
      return "g4";
    case AxiomId::mi:
      return "mi";
    case AxiomId::bp1:
      return "bp1";
    case AxiomId::bp2:
      return "bp2";
    case AxiomId::bp3:
      return "bp3";
    case AxiomId::bp4:
      return "bp4";
    case AxiomId::bp5:
      return "bp5";
    case AxiomId::bp6:
      return "bp6";
    case AxiomId::bp7:
      return "bp7";
    case AxiomId::order3_eq:
      return "order3";
    case AxiomId::metric_eq:
      return "metric";
    case AxiomId::ball1:
      return "ball1";
    case AxiomId::ball2:
      return "ball2";
    case AxiomId::ball3:
      return "ball3";
    case AxiomId::ball_inclusion:
      return "ball_inclusion";
    case AxiomId::continuity:
      return "continuity";
    case AxiomId::contraction:
      return "contraction";
  }
  return "unknown";
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::evidence:
      return "evidence";
  }
  return "unknown";
}

bool operator<(const ViolationReport& a, const ViolationReport& b) {
  const auto split_key = [](const ViolationReport& r) {
    return r.split ? std::make_tuple(r.split->s, r.split->t, r.split->w_index)
                   : std::make_tuple(-1, -1, PointIndex{0});
  };
  return std::tie(a.axiom, a.witness, a.detail) < std::tie(b.axiom, b.witness, b.detail) ||
         (std::tie(a.axiom, a.witness, a.detail) == std::tie(b.axiom, b.witness, b.detail) &&
          split_key(a) < split_key(b));
}

void CheckConfig::validate() const {
  if (!(tolerance >= 0.0) || !std::isfinite(tolerance)) {
    throw Error(ErrorCode::invalid_parameter, "tolerance must be a finite nonnegative number");
  }
  if (sample_budget < 1) throw Error(ErrorCode::invalid_parameter, "sample budget must be >= 1");
}

bool exceeds(double lhs, double rhs, double tolerance) {
  if (std::isnan(lhs) || std::isnan(rhs)) return true;
  return lhs - rhs > tolerance * std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
}

namespace {

class Recorder {
 public:
  Recorder(const CheckConfig& cfg, CheckOutcome& out) : cfg_(cfg), out_(out) {}

  void add(ViolationReport r) {
    ++out_.violation_count;
    if (out_.violations.size() < cfg_.max_reports) out_.violations.push_back(std::move(r));
  }

  // Checks lhs <= rhs; returns true when it holds.
  bool inequality(AxiomId id, double lhs, double rhs, std::vector<Indices> witness,
                  std::string detail = {}, std::optional<SplitSpec> split = std::nullopt) {
    ++out_.checked;
    if (!exceeds(lhs, rhs, cfg_.tolerance)) return true;
    add(ViolationReport{id, std::move(witness), split, lhs, rhs, lhs - rhs, std::move(detail)});
    return false;
  }

  // Checks lhs == rhs within tolerance.
  bool equality(AxiomId id, double lhs, double rhs, std::vector<Indices> witness,
                std::string detail = {}) {
    ++out_.checked;
    if (!exceeds(lhs, rhs, cfg_.tolerance) && !exceeds(rhs, lhs, cfg_.tolerance)) return true;
    add(ViolationReport{id, std::move(witness), std::nullopt, lhs, rhs, std::fabs(lhs - rhs),
                        std::move(detail)});
    return false;
  }

  const CheckConfig& config() const { return cfg_; }
  CheckOutcome& outcome() { return out_; }

 private:
  const CheckConfig& cfg_;
  CheckOutcome& out_;
};

void finish(CheckOutcome& out) { std::sort(out.violations.begin(), out.violations.end()); }

void merge_into(CheckOutcome& into, CheckOutcome&& from, std::size_t max_reports) {
  into.violation_count += from.violation_count;
  into.checked += from.checked;
  for (auto& v : from.violations) {
    if (into.violations.size() < max_reports) into.violations.push_back(std::move(v));
  }
  for (auto& n : from.notes) into.notes.push_back(std::move(n));
}

bool all_equal(const Indices& t) {
  return std::adjacent_find(t.begin(), t.end(), std::not_equal_to<>()) == t.end();
}

Indices sorted_copy(Indices t) {
  std::sort(t.begin(), t.end());
  return t;
}

Indices support_of(const Indices& sorted) {
  Indices s = sorted;
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

// x repeated a times followed by w repeated b times.
Indices block(PointIndex x, std::size_t a, PointIndex w, std::size_t b) {
  Indices t(a, x);
  t.insert(t.end(), b, w);
  return t;
}

double value(const GMetric& g, const GroundSample& sample, const Indices& t) {
  return g.evaluate_indices(sample, t);
}

void require_order_and_sample(const GMetric& g, const GroundSample& sample,
                              const CheckConfig& cfg) {
  cfg.validate();
  if (g.order() < 1) throw Error(ErrorCode::invalid_parameter, "order must be >= 1");
  g.check_sample(sample);
}

// Tuples (sorted) examined in sampled mode: the stress kit first, then
// uniform random tuples drawn with replacement.
std::vector<Indices> sampled_multisets(std::size_t size, std::size_t k, const CheckConfig& cfg,
                                       std::uint64_t salt) {
  std::vector<Indices> out;
  for (PointIndex a = 0; a < size; ++a) out.push_back(Indices(k, a));
  const std::size_t m = std::min<std::size_t>(size, 8);
  for (PointIndex a = 0; a < m; ++a) {
    for (PointIndex b = a + 1; b < m; ++b) {
      for (std::size_t j = 1; j < k; ++j) out.push_back(block(a, j, b, k - j));
    }
  }
  std::mt19937_64 rng(cfg.rng_seed ^ (0x5851f42d4c957f2dULL * (salt + 1)));
  for (std::uint64_t i = 0; i < cfg.sample_budget; ++i) {
    Indices t(k);
    for (auto& e : t) e = cb::uniform_below(rng, size);
    out.push_back(sorted_copy(std::move(t)));
  }
  return out;
}

// Calls fn(sorted tuple) for every tuple the mode examines: every multiset
// when exhaustive, the sampled list otherwise.
template <class Fn>
void for_each_examined(std::size_t size, std::size_t k, const CheckConfig& cfg,
                       std::uint64_t salt, Fn&& fn) {
  if (cfg.exhaustive) {
    cb::for_each_multiset(size, k, fn);
  } else {
    for (const auto& t : sampled_multisets(size, k, cfg, salt)) fn(t);
  }
}

struct SupportGroup {
  Indices support;
  std::uint64_t mask = 0;
  double min = 0.0, max = 0.0;
  Indices argmin, argmax;
};

std::vector<SupportGroup> group_by_support(const GMetric& g, const GroundSample& sample,
                                           const CheckConfig& cfg, std::uint64_t salt) {
  std::map<Indices, SupportGroup> groups;
  const std::size_t k = static_cast<std::size_t>(g.order()) + 1;
  for_each_examined(sample.size(), k, cfg, salt, [&](const Indices& t) {
    const double v = g.evaluate_sorted(sample, t);
    Indices s = support_of(t);
    auto [it, inserted] = groups.try_emplace(s);
    SupportGroup& grp = it->second;
    if (inserted) {
      grp.support = std::move(s);
      for (PointIndex p : grp.support) {
        if (p < 64) grp.mask |= std::uint64_t{1} << p;
      }
      grp.min = grp.max = v;
      grp.argmin = grp.argmax = t;
      return;
    }
    if (v < grp.min || (v == grp.min && t < grp.argmin)) {
      grp.min = v;
      grp.argmin = t;
    }
    if (v > grp.max || (v == grp.max && t < grp.argmax)) {
      grp.max = v;
      grp.argmax = t;
    }
  });
  std::vector<SupportGroup> out;
  out.reserve(groups.size());
  for (auto& [key, grp] : groups) out.push_back(std::move(grp));
  return out;
}

bool strict_subset(const SupportGroup& a, const SupportGroup& b, bool use_mask) {
  if (a.support.size() >= b.support.size()) return false;
  if (use_mask) return (a.mask & ~b.mask) == 0;
  return std::includes(b.support.begin(), b.support.end(), a.support.begin(), a.support.end());
}

}  // namespace

CheckOutcome check_g1(const GMetric& g, const GroundSample& sample, const CheckConfig& cfg) {
  require_order_and_sample(g, sample, cfg);
  CheckOutcome out;
  Recorder rec(cfg, out);
  const std::size_t k = static_cast<std::size_t>(g.order()) + 1;
  std::set<Indices> reported;

  auto examine = [&](const Indices& tuple) {
    ++out.checked;
    const double v = value(g, sample, tuple);
    Indices canon = sorted_copy(tuple);
    const bool constant = all_equal(canon);
    std::string detail;
    if (v < 0.0 || std::isnan(v)) {
      detail = "negative value";
    } else if (constant && v > cfg.tolerance) {
      detail = "constant tuple with positive value";
    } else if (!constant && v == 0.0) {
      detail = "zero value on distinct entries";
    } else {
      return;
    }
    if (!reported.insert(canon).second) return;
    rec.add(ViolationReport{AxiomId::g1, {std::move(canon)}, std::nullopt, v, 0.0, std::fabs(v),
                            std::move(detail)});
  };

  if (cfg.exhaustive) {
    cb::for_each_tuple(sample.size(), k, examine);
  } else {
    std::mt19937_64 rng(cfg.rng_seed ^ 0x9e3779b97f4a7c15ULL);
    for (const auto& t : sampled_multisets(sample.size(), k, cfg, 1)) {
      Indices shuffled = t;
      for (std::size_t i = shuffled.size(); i > 1; --i) {
        std::swap(shuffled[i - 1], shuffled[cb::uniform_below(rng, i)]);
      }
      examine(shuffled);
    }
  }
  finish(out);
  return out;
}

CheckOutcome check_g2(const GMetric& g, const GroundSample& sample, const CheckConfig& cfg) {
  require_order_and_sample(g, sample, cfg);
  CheckOutcome out;
  Recorder rec(cfg, out);
  const std::size_t k = static_cast<std::size_t>(g.order()) + 1;

  auto examine = [&](const Indices& tuple) {
    const double v = value(g, sample, tuple);
    Indices reversed(tuple.rbegin(), tuple.rend());
    rec.equality(AxiomId::g2, v, value(g, sample, reversed), {tuple, reversed}, "reversal");
    Indices rotated = tuple;
    std::rotate(rotated.begin(), rotated.begin() + 1, rotated.end());
    rec.equality(AxiomId::g2, v, value(g, sample, rotated), {tuple, rotated}, "rotation");
  };

  if (cfg.exhaustive) {
    cb::for_each_tuple(sample.size(), k, examine);
  } else {
    std::mt19937_64 rng(cfg.rng_seed ^ 0x2545f4914f6cdd1dULL);
    for (std::uint64_t i = 0; i < cfg.sample_budget; ++i) {
      Indices t(k);
      for (auto& e : t) e = cb::uniform_below(rng, sample.size());
      examine(t);
    }
  }
  finish(out);
  return out;
}

CheckOutcome check_g3_monotonicity(const GMetric& g, const GroundSample& sample,
                                   const CheckConfig& cfg) {
  require_order_and_sample(g, sample, cfg);
  CheckOutcome out;
  Recorder rec(cfg, out);
  std::vector<SupportGroup> groups = group_by_support(g, sample, cfg, 3);
  std::stable_sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
    return a.support.size() < b.support.size();
  });
  const bool use_mask = sample.size() <= 64;
  for (const auto& small : groups) {
    for (const auto& big : groups) {
      if (!strict_subset(small, big, use_mask)) continue;
      rec.inequality(AxiomId::g3, small.max, big.min, {small.argmax, big.argmin});
    }
  }
  finish(out);
  return out;
}

CheckOutcome check_multiplicity_independence(const GMetric& g, const GroundSample& sample,
                                             const CheckConfig& cfg) {
  require_order_and_sample(g, sample, cfg);
  CheckOutcome out;
  Recorder rec(cfg, out);
  for (const auto& grp : group_by_support(g, sample, cfg, 4)) {
    rec.equality(AxiomId::mi, grp.min, grp.max, {grp.argmin, grp.argmax});
  }
  finish(out);
  return out;
}

CheckOutcome check_g4_triangle(const GMetric& g, const GroundSample& sample,
                               const CheckConfig& cfg) {
  require_order_and_sample(g, sample, cfg);
  CheckOutcome out;
  Recorder rec(cfg, out);
  const int n = g.order();
  const std::size_t size = sample.size();
  const std::size_t k = static_cast<std::size_t>(n) + 1;

  auto check = [&](int s, int t, const Indices& xs, const Indices& ys, PointIndex w, double lhs,
                   double a, double b) {
    Indices whole = xs;
    whole.insert(whole.end(), ys.begin(), ys.end());
    Indices left = xs;
    left.insert(left.end(), static_cast<std::size_t>(t) + 1, w);
    Indices right = ys;
    right.insert(right.end(), static_cast<std::size_t>(s) + 1, w);
    ++out.checked;
    if (!exceeds(lhs, a + b, cfg.tolerance)) return;
    rec.add(ViolationReport{AxiomId::g4,
                            {std::move(whole), std::move(left), std::move(right)},
                            SplitSpec{s, t, w},
                            lhs,
                            a + b,
                            lhs - (a + b),
                            {}});
  };

  for (int s = 0; s < n; ++s) {
    const int t = n - 1 - s;
    const std::size_t xk = static_cast<std::size_t>(s) + 1;
    const std::size_t yk = static_cast<std::size_t>(t) + 1;

    if (cfg.ordered_blocks) {
      cb::for_each_tuple(size, xk, [&](const Indices& xs) {
        cb::for_each_tuple(size, yk, [&](const Indices& ys) {
          Indices whole = xs;
          whole.insert(whole.end(), ys.begin(), ys.end());
          const double lhs = value(g, sample, whole);
          for (PointIndex w = 0; w < size; ++w) {
            Indices left = xs;
            left.insert(left.end(), yk, w);
            Indices right = ys;
            right.insert(right.end(), xk, w);
            check(s, t, xs, ys, w, lhs, value(g, sample, left), value(g, sample, right));
          }
        });
      });
      continue;
    }

    if (s > t) continue;  // mirror of the (t, s) split, identical under (g2)

    if (cfg.exhaustive) {
      // Padded block values P[block][w] = g(block, w, ..., w), computed once.
      auto padded_table = [&](std::size_t bk, std::size_t pad, std::vector<Indices>& blocks) {
        std::vector<double> table;
        cb::for_each_multiset(size, bk, [&](const Indices& b) {
          blocks.push_back(b);
          for (PointIndex w = 0; w < size; ++w) {
            Indices padded = b;
            padded.insert(padded.end(), pad, w);
            table.push_back(value(g, sample, padded));
          }
        });
        return table;
      };
      std::vector<Indices> xblocks, yblocks;
      const std::vector<double> px = padded_table(xk, yk, xblocks);
      const std::vector<double> py = padded_table(yk, xk, yblocks);
      Indices whole(k);
      for (std::size_t i = 0; i < xblocks.size(); ++i) {
        // Equal-size blocks are interchangeable under a shared mediator.
        for (std::size_t j = s == t ? i : 0; j < yblocks.size(); ++j) {
          std::merge(xblocks[i].begin(), xblocks[i].end(), yblocks[j].begin(), yblocks[j].end(),
                     whole.begin());
          const double lhs = g.evaluate_sorted(sample, whole);
          for (PointIndex w = 0; w < size; ++w) {
            const double a = px[i * size + w];
            const double b = py[j * size + w];
            // Witness tuples are only built for failures.
            if (exceeds(lhs, a + b, cfg.tolerance)) {
              check(s, t, xblocks[i], yblocks[j], w, lhs, a, b);
            } else {
              ++out.checked;
            }
          }
        }
      }
      continue;
    }

    // Sampled: stress kit (constant blocks over the first points, every
    // mediator), then random block pairs and mediators.
    const std::size_t m = std::min<std::size_t>(size, 6);
    auto run = [&](const Indices& xs, const Indices& ys, PointIndex w) {
      Indices whole = xs;
      whole.insert(whole.end(), ys.begin(), ys.end());
      const double lhs = value(g, sample, whole);
      Indices left = xs;
      left.insert(left.end(), yk, w);
      Indices right = ys;
      right.insert(right.end(), xk, w);
      check(s, t, xs, ys, w, lhs, value(g, sample, left), value(g, sample, right));
    };
    for (PointIndex a = 0; a < m; ++a) {
      for (PointIndex b = 0; b < m; ++b) {
        for (PointIndex w = 0; w < m; ++w) run(Indices(xk, a), Indices(yk, b), w);
      }
    }
    std::mt19937_64 rng(cfg.rng_seed ^ (0xbf58476d1ce4e5b9ULL + static_cast<std::uint64_t>(s)));
    const std::uint64_t per_split = std::max<std::uint64_t>(1, cfg.sample_budget / n);
    for (std::uint64_t i = 0; i < per_split; ++i) {
      Indices xs(xk), ys(yk);
      for (auto& e : xs) e = cb::uniform_below(rng, size);
      for (auto& e : ys) e = cb::uniform_below(rng, size);
      std::sort(xs.begin(), xs.end());
      std::sort(ys.begin(), ys.end());
      run(xs, ys, cb::uniform_below(rng, size));
    }
  }
  finish(out);
  return out;
}

BasicPropertiesOutcome check_basic_properties(const GMetric& g, const GroundSample& sample,
                                              const CheckConfig& cfg) {
  require_order_and_sample(g, sample, cfg);
  BasicPropertiesOutcome result;
  CheckOutcome& out = result.outcome;
  Recorder rec(cfg, out);
  const std::size_t n = static_cast<std::size_t>(g.order());
  const std::size_t size = sample.size();
  const bool mi = g.claims().multiplicity_independent;
  auto G = [&](const Indices& t) { return value(g, sample, t); };

  // Points visited by the pointwise items: all of them when exhaustive, the
  // first few plus random draws otherwise.
  std::vector<PointIndex> pts;
  if (cfg.exhaustive) {
    for (PointIndex p = 0; p < size; ++p) pts.push_back(p);
  } else {
    std::set<PointIndex> chosen;
    for (PointIndex p = 0; p < std::min<std::size_t>(size, 6); ++p) chosen.insert(p);
    std::mt19937_64 rng(cfg.rng_seed ^ 0x94d049bb133111ebULL);
    while (chosen.size() < std::min<std::size_t>(size, 12)) {
      chosen.insert(cb::uniform_below(rng, size));
    }
    pts.assign(chosen.begin(), chosen.end());
  }

  for (PointIndex x : pts) {
    for (PointIndex w : pts) {
      const Indices xw = block(x, 1, w, n);
      const Indices wx = block(w, 1, x, n);
      const double g_xw = G(xw);
      const double g_wx = G(wx);
      for (std::size_t s = 1; s <= n; ++s) {
        const std::string ds = "s=" + std::to_string(s);
        const Indices xs_w = block(x, s, w, n + 1 - s);
        const double v = G(xs_w);
        // (3)
        const double r3a = static_cast<double>(s) * g_xw;
        rec.inequality(AxiomId::bp3, v, r3a, {xs_w, xw}, ds + " first");
        rec.inequality(AxiomId::bp3, v, static_cast<double>(n + 1 - s) * g_wx, {xs_w, wx},
                       ds + " second");
        // (7)
        const double factor = 1.0 + static_cast<double>((s - 1) * (n + 1 - s));
        rec.inequality(AxiomId::bp7, g_xw, factor * v, {xw, xs_w}, ds);
        if (s == 1) {
          result.identity_cases += 2;
          if (v != r3a) ++result.identity_mismatches;
          if (g_xw != factor * v) ++result.identity_mismatches;
        }
        // (6)
        for (std::size_t s2 = s + 1; s2 <= n; ++s2) {
          const Indices xs2_w = block(x, s2, w, n + 1 - s2);
          rec.inequality(AxiomId::bp6, std::fabs(v - G(xs2_w)),
                         static_cast<double>(s2 - s) * g_xw, {xs_w, xs2_w, xw},
                         ds + ",s'=" + std::to_string(s2));
        }
      }
      for (PointIndex y : pts) {
        const Indices xy = block(x, 1, y, n);
        const Indices wy = block(w, 1, y, n);
        const Indices yw = block(y, 1, w, n);
        const double g_xy = G(xy);
        // (2)
        rec.inequality(AxiomId::bp2, g_xy, g_xw + G(wy), {xy, xw, wy}, "one-vs-rest");
        if (mi) {
          rec.inequality(AxiomId::bp2, g_xy, g_xw + G(yw), {xy, xw, yw}, "mi variant");
        }
        // (1)
        for (std::size_t s = 1; s <= n; ++s) {
          const Indices lhs_t = block(x, s, y, n + 1 - s);
          const Indices a_t = block(x, s, w, n + 1 - s);
          const Indices b_t = block(w, s, y, n + 1 - s);
          rec.inequality(AxiomId::bp1, G(lhs_t), G(a_t) + G(b_t), {lhs_t, a_t, b_t},
                         "s=" + std::to_string(s));
        }
      }
    }
  }
  if (!mi) out.notes.push_back("bp2 mi variant skipped: construction not multiplicity-independent");

  // (4) g(X) <= sum_i g(x_i, w, ..., w)
  for_each_examined(size, n + 1, cfg, 5, [&](const Indices& X) {
    for (PointIndex w : pts) {
      double rhs = 0.0;
      std::vector<Indices> witness{X};
      for (PointIndex xi : X) {
        Indices t = block(xi, 1, w, n);
        rhs += G(t);
        witness.push_back(std::move(t));
      }
      rec.inequality(AxiomId::bp4, g.evaluate_sorted(sample, X), rhs, std::move(witness));
    }
  });

  // (5) |g(y, X') - g(w, X')| <= max{g(y, w..w), g(w, y..y)}
  for_each_examined(size, n, cfg, 6, [&](const Indices& rest) {
    for (PointIndex y : pts) {
      for (PointIndex w : pts) {
        if (w <= y) continue;  // symmetric in (y, w)
        Indices yr = rest;
        yr.insert(yr.begin(), y);
        Indices wr = rest;
        wr.insert(wr.begin(), w);
        const Indices yw = block(y, 1, w, n);
        const Indices wy = block(w, 1, y, n);
        rec.inequality(AxiomId::bp5, std::fabs(G(yr) - G(wr)), std::max(G(yw), G(wy)),
                       {yr, wr, yw, wy});
      }
    }
  });

  finish(out);
  return result;
}

namespace {

CheckOutcome generic_g1_to_g4(const GMetric& g, const GroundSample& sample,
                              const CheckConfig& cfg) {
  CheckOutcome all;
  merge_into(all, check_g1(g, sample, cfg), cfg.max_reports);
  merge_into(all, check_g2(g, sample, cfg), cfg.max_reports);
  merge_into(all, check_g3_monotonicity(g, sample, cfg), cfg.max_reports);
  merge_into(all, check_g4_triangle(g, sample, cfg), cfg.max_reports);
  finish(all);
  return all;
}

CheckOutcome explicit_order3(const GMetric& g, const GroundSample& sample,
                             const CheckConfig& cfg) {
  CheckOutcome out;
  Recorder rec(cfg, out);
  const std::size_t size = sample.size();
  auto G = [&](PointIndex a, PointIndex b, PointIndex c, PointIndex d) {
    const Indices t{a, b, c, d};
    return value(g, sample, t);
  };
  auto detail = [](int cond, int item) {
    return "condition " + std::to_string(cond) + "." + std::to_string(item);
  };

  // (1) zero iff all equal, and (2) the permutation equalities.
  cb::for_each_tuple(size, 4, [&](const Indices& t) {
    const PointIndex x = t[0], y = t[1], p = t[2], q = t[3];
    const double v = G(x, y, p, q);
    ++out.checked;
    const bool constant = x == y && y == p && p == q;
    if ((constant && v > cfg.tolerance) || (!constant && v <= 0.0) || v < 0.0) {
      rec.add(ViolationReport{AxiomId::order3_eq, {sorted_copy(t)}, std::nullopt, v, 0.0,
                              std::fabs(v), detail(1, 0)});
    }
    const Indices perms[] = {{y, x, p, q}, {p, y, x, q}, {q, y, p, x}, {x, p, y, q}, {x, y, q, p}};
    int item = 1;
    for (const auto& perm : perms) {
      rec.equality(AxiomId::order3_eq, v, value(g, sample, perm), {t, perm}, detail(2, item++));
    }
  });

  // (3) the seven monotonicity inequalities on distinct points.
  for (PointIndex x = 0; x < size; ++x) {
    for (PointIndex y = 0; y < size; ++y) {
      if (y == x) continue;
      for (PointIndex p = 0; p < size; ++p) {
        if (p == x || p == y) continue;
        const double xyyy = G(x, y, y, y);
        const double xxyy = G(x, x, y, y);
        const double xxyp = G(x, x, y, p);
        const double xyyp = G(x, y, y, p);
        const double xypp = G(x, y, p, p);
        const Indices w_xyyy{x, y, y, y}, w_xxyy{x, x, y, y}, w_xxyp{x, x, y, p},
            w_xyyp{x, y, y, p}, w_xypp{x, y, p, p};
        rec.inequality(AxiomId::order3_eq, xyyy, xxyp, {w_xyyy, w_xxyp}, detail(3, 1));
        rec.inequality(AxiomId::order3_eq, xyyy, xyyp, {w_xyyy, w_xyyp}, detail(3, 2));
        rec.inequality(AxiomId::order3_eq, xyyy, xypp, {w_xyyy, w_xypp}, detail(3, 3));
        rec.inequality(AxiomId::order3_eq, xxyy, xxyp, {w_xxyy, w_xxyp}, detail(3, 4));
        rec.inequality(AxiomId::order3_eq, xxyy, xyyp, {w_xxyy, w_xyyp}, detail(3, 5));
        rec.inequality(AxiomId::order3_eq, xxyy, xypp, {w_xxyy, w_xypp}, detail(3, 6));
        for (PointIndex q = 0; q < size; ++q) {
          if (q == x || q == y || q == p) continue;
          rec.inequality(AxiomId::order3_eq, xypp, G(x, y, p, q), {w_xypp, Indices{x, y, p, q}},
                         detail(3, 7));
        }
      }
    }
  }

  // (4) the two triangle forms, for every mediator.
  cb::for_each_tuple(size, 4, [&](const Indices& t) {
    const PointIndex x = t[0], y = t[1], p = t[2], q = t[3];
    const double v = G(x, y, p, q);
    for (PointIndex w = 0; w < size; ++w) {
      rec.inequality(AxiomId::order3_eq, v, G(x, w, w, w) + G(y, p, q, w),
                     {t, Indices{x, w, w, w}, Indices{y, p, q, w}}, detail(4, 1));
      rec.inequality(AxiomId::order3_eq, v, G(x, y, w, w) + G(p, q, w, w),
                     {t, Indices{x, y, w, w}, Indices{p, q, w, w}}, detail(4, 2));
    }
  });
  finish(out);
  return out;
}

}  // namespace

Order3Agreement check_order3_explicit(const GMetric& g, const GroundSample& sample,
                                      const CheckConfig& cfg) {
  if (g.order() != 3) {
    throw Error(ErrorCode::order_mismatch, "explicit order-3 conditions need an order-3 g-metric");
  }
  require_order_and_sample(g, sample, cfg);
  Order3Agreement r;
  CheckConfig exhaustive = cfg;
  exhaustive.exhaustive = true;
  r.generic = generic_g1_to_g4(g, sample, exhaustive);
  r.explicit_conditions = explicit_order3(g, sample, exhaustive);
  r.generic_pass = r.generic.passed();
  r.explicit_pass = r.explicit_conditions.passed();
  r.agree = r.generic_pass == r.explicit_pass;
  return r;
}

Order1Agreement check_order1_equivalence(const GroundSample& sample, const CheckConfig& cfg) {
  const GMetric base = make_base_metric();
  CheckConfig exhaustive = cfg;
  exhaustive.exhaustive = true;
  Order1Agreement r;
  r.gmetric_pass = generic_g1_to_g4(base, sample, exhaustive).passed();
  r.metric_pass = check_metric_matrix(sample.distances(), cfg.tolerance).ok;
  r.agree = r.gmetric_pass == r.metric_pass;
  return r;
}

AuditSummary full_audit(const GMetric& g, const GroundSample& sample, const CheckConfig& cfg) {
  require_order_and_sample(g, sample, cfg);
  AuditSummary a;
  a.construction = g.describe();
  a.order = g.order();
  a.sample_size = sample.size();
  a.exhaustive = cfg.exhaustive;
  a.claims = g.claims();

  CheckOutcome all;
  merge_into(all, check_g1(g, sample, cfg), cfg.max_reports);
  merge_into(all, check_g2(g, sample, cfg), cfg.max_reports);
  merge_into(all, check_g3_monotonicity(g, sample, cfg), cfg.max_reports);
  merge_into(all, check_g4_triangle(g, sample, cfg), cfg.max_reports);

  CheckOutcome mi = check_multiplicity_independence(g, sample, cfg);
  a.multiplicity_independent = mi.passed();
  all.checked += mi.checked;
  if (a.claims.multiplicity_independent) {
    merge_into(all, std::move(mi), cfg.max_reports);
  } else {
    a.mi_witnesses = std::move(mi.violations);
    a.notes.push_back("multiplicity independence not claimed; observed result reported only");
  }

  BasicPropertiesOutcome bp = check_basic_properties(g, sample, cfg);
  a.identity_cases = bp.identity_cases;
  a.identity_mismatches = bp.identity_mismatches;
  merge_into(all, std::move(bp.outcome), cfg.max_reports);

  finish(all);
  a.violations = std::move(all.violations);
  a.violation_count = all.violation_count;
  a.checked = all.checked;
  for (auto& note : all.notes) a.notes.push_back(std::move(note));

  const bool clean = a.violation_count == 0 && a.identity_mismatches == 0;
  if (a.claims.conjectural) {
    a.verdict = Verdict::evidence;
    a.evidence_supports = clean;
  } else {
    a.verdict = clean ? Verdict::pass : Verdict::fail;
  }
  return a;
}

}  // namespace gmetric
