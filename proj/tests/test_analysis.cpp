#include <doctest.h>

#include <cmath>
#include <random>

#include "gmetric/analysis.hpp"
#include "gmetric/combinatorics.hpp"
#include "gmetric/constructions.hpp"

using namespace gmetric;

namespace {

GroundSample scalars(std::vector<double> v) { return GroundSample::from_scalars(v); }

GroundSample random_planar(std::size_t size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> pts;
  for (std::size_t i = 0; i < size; ++i) {
    pts.push_back({combinatorics::uniform_unit(rng) * 4, combinatorics::uniform_unit(rng) * 4});
  }
  return GroundSample::from_points(pts, MetricSource::euclidean);
}

// Points 2^-k for k = 0..count-1, followed by 0 at index count.
GroundSample geometric(std::size_t count) {
  std::vector<double> v;
  for (std::size_t k = 0; k < count; ++k) v.push_back(std::ldexp(1.0, -static_cast<int>(k)));
  v.push_back(0.0);
  return scalars(v);
}

std::vector<PointIndex> iota(std::size_t n) {
  std::vector<PointIndex> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("g-balls") {
    const auto s = scalars({0, 0.5, 2});
    const auto b = g_ball(make_diameter(2), s, 0, 1.0);
    CHECK(b.members == std::vector<PointIndex>{0, 1});
    const auto d = g_ball(make_discrete(3), scalars({0, 1, 2, 3}), 2, 0.5);
    CHECK(d.members == std::vector<PointIndex>{2});
    CHECK_THROWS_AS(g_ball(make_diameter(2), s, 0, 0.0), Error);
    CHECK_THROWS_AS(g_ball(make_diameter(2), s, 5, 1.0), Error);
  }

  TEST_CASE("derived metrics") {
    const auto s = scalars({0, 1, 3.5});
    const auto d = derived_metric(make_diameter(2), s, DerivedVariant::two_sided_block, 1);
    for (PointIndex i = 0; i < 3; ++i) {
      for (PointIndex j = 0; j < 3; ++j) {
        CHECK(d(i, j) == 2.0 * std::fabs(s.coordinate(i, 0) - s.coordinate(j, 0)));
      }
    }
    const auto t = derived_metric(make_discrete(3), s, DerivedVariant::tuple_max);
    for (PointIndex i = 0; i < 3; ++i) {
      for (PointIndex j = 0; j < 3; ++j) CHECK(t(i, j) == (i == j ? 0.0 : 1.0));
    }
    for (auto v : {DerivedVariant::two_sided_block, DerivedVariant::multiplicity_sum,
                   DerivedVariant::tuple_max}) {
      const auto m = derived_metric(make_average(3), random_planar(5, 1), v);
      CHECK(check_metric_matrix(m, 1e-9).ok);
      CHECK(derived_variant_from_string(to_string(v)) == v);
    }
  }

  TEST_CASE("ball sandwich") {
    const auto s = scalars({0, 0.5, 1.2, 2, 2.9, 4});
    const auto g = make_diameter(2);
    const std::vector<BallQuery> q{{0, 3.0}};
    CHECK(g_ball(g, s, 0, 1.0).members == std::vector<PointIndex>{0, 1});
    CHECK(check_ball_inclusion(g, s, q, {}).passed());
    for (auto kind : {ConstructionKind::discrete, ConstructionKind::average, ConstructionKind::max,
                      ConstructionKind::shortest_path}) {
      const auto gk = make_construction(kind, 2);
      const auto sample = random_planar(7, 2);
      const auto queries = random_ball_queries(gk, sample, 20, 3);
      CHECK(queries.size() == 20);
      CHECK(check_ball_inclusion(gk, sample, queries, {}).passed());
    }
  }

  TEST_CASE("ball proposition") {
    for (auto kind : {ConstructionKind::max, ConstructionKind::discrete,
                      ConstructionKind::average}) {
      const auto g = make_construction(kind, 2);
      const auto sample = random_planar(6, 4);
      const auto queries = random_ball_queries(g, sample, 20, 5);
      CHECK(check_ball_proposition(g, sample, queries, {}).passed());
    }
    const auto s = scalars({0, 1, 2, 3});
    const std::vector<BallQuery> overlap{{1, 1.5}, {2, 1.5}};
    CHECK(check_ball_proposition(make_diameter(2), s, overlap, {}).passed());
    const std::vector<BallQuery> disjoint{{0, 0.5}, {3, 0.5}};
    CHECK(check_ball_proposition(make_diameter(2), s, disjoint, {}).passed());
  }

  TEST_CASE("convergence of a geometric prefix") {
    const std::size_t L = 40;
    const auto s = geometric(L);
    SequenceDiagnostics diag{iota(L), PointIndex{L}};
    const std::vector<double> eps{0.1, 0.01, 1e-3};
    const auto r = diagnose_convergence(make_diameter(2), s, diag, eps);
    CHECK(r.all_agree);
    CHECK(r.prefix_length == L);
    REQUIRE(r.per_eps.size() == 3);
    // Least N with 2^-N < eps.
    CHECK(r.per_eps[0].tuple.least_n == 4u);
    CHECK(r.per_eps[1].tuple.least_n == 7u);
    CHECK(r.per_eps[2].tuple.least_n == 10u);
    for (const auto& e : r.per_eps) {
      CHECK(e.tuple.satisfied);
      CHECK(e.ball.satisfied);
      for (const auto& b : e.blocks) CHECK(b.satisfied);
      CHECK(e.agree);
    }
  }

  TEST_CASE("constant prefix at the limit") {
    const auto s = scalars({0, 1});
    SequenceDiagnostics diag{std::vector<PointIndex>(10, 1), PointIndex{1}};
    const std::vector<double> eps{1.0, 1e-6};
    const auto r = diagnose_convergence(make_max(3), s, diag, eps);
    for (const auto& e : r.per_eps) {
      CHECK(e.tuple.least_n == 0u);
      CHECK(e.ball.least_n == 0u);
    }
    const auto c = diagnose_cauchy(make_max(3), s, diag);
    for (double v : c.consecutive) CHECK(v == 0.0);
    CHECK(c.tuple_head_sup == 0.0);
  }

  TEST_CASE("alternating prefix does not converge") {
    const auto s = scalars({0, 1});
    std::vector<PointIndex> prefix;
    for (int k = 0; k < 20; ++k) prefix.push_back(k % 2);
    const std::vector<double> eps{0.5};
    for (PointIndex limit : {0u, 1u}) {
      const auto r = diagnose_convergence(make_diameter(2), s, {prefix, limit}, eps);
      CHECK_FALSE(r.per_eps[0].tuple.satisfied);
      CHECK_FALSE(r.per_eps[0].ball.satisfied);
      CHECK(r.all_agree);
    }
  }

  TEST_CASE("Cauchy diagnostics") {
    const std::size_t L = 30;
    const auto s = geometric(L);
    const auto c = diagnose_cauchy(make_diameter(2), s, {iota(L), std::nullopt});
    REQUIRE(c.consecutive.size() == L - 1);
    for (std::size_t k = 0; k + 1 < L; ++k) {
      CHECK(c.consecutive[k] == std::ldexp(1.0, -static_cast<int>(k) - 1));
    }
    CHECK(c.consecutive_decaying);
    CHECK(c.tuple_decaying);
    CHECK(c.criteria_agree);
    CHECK_FALSE(c.finite_prefix_caveat);
  }

  TEST_CASE("harmonic partial sums raise the finite-prefix caveat") {
    const std::size_t L = 40;
    std::vector<double> v;
    double h = 0.0;
    for (std::size_t k = 1; k <= L; ++k) {
      h += 1.0 / static_cast<double>(k);
      v.push_back(h);
    }
    const auto c = diagnose_cauchy(make_diameter(2), scalars(v), {iota(L), std::nullopt});
    CHECK(c.consecutive_decaying);
    CHECK(c.finite_prefix_caveat);
  }

  TEST_CASE("epsilon nets") {
    const auto s = scalars({0, 1, 2, 3});
    const auto g = make_diameter(2);
    auto net = epsilon_net(g, s, 1.5);
    CHECK(net.centers == std::vector<PointIndex>{0, 2});
    CHECK(net.cover_verified);
    net = epsilon_net(g, s, 100.0);
    CHECK(net.centers == std::vector<PointIndex>{0});
    net = epsilon_net(make_discrete(2), s, 0.5);
    CHECK(net.centers == iota(4));
    CHECK_THROWS_AS(epsilon_net(g, s, 0.0), Error);
  }

  TEST_CASE("joint continuity") {
    CheckConfig cfg;
    cfg.rng_seed = 7;
    for (auto kind : {ConstructionKind::average, ConstructionKind::max}) {
      const auto r = check_joint_continuity(make_construction(kind, 2), random_planar(6, 8), cfg);
      CHECK(r.outcome.passed());
      CHECK(r.pairs == 100);
    }
    // Shortest-path fails (g4) on planar samples, so its continuity bound can break.
    const auto sp =
        check_joint_continuity(make_shortest_path(2), scalars({0, 1.5, 2, 4.25, 7}), cfg);
    CHECK(sp.outcome.passed());
    const auto d = check_joint_continuity(make_diameter(2), scalars({0, 1, 2, 3}), cfg, 1e-3);
    CHECK(d.outcome.passed());
    CHECK(d.max_difference <= 2e-3 + 1e-12);
    const auto labels = GroundSample::from_matrix(DistanceMatrix::from_rows({{0, 1}, {1, 0}}));
    CHECK_THROWS_AS(check_joint_continuity(make_max(2), labels, cfg), Error);
  }
}
