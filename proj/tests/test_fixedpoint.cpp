#include <doctest.h>

#include <cmath>

#include "gmetric/constructions.hpp"
#include "gmetric/fixedpoint.hpp"

using namespace gmetric;

namespace {

GroundSample scalars(std::vector<double> v) { return GroundSample::from_scalars(v); }

}  // namespace

TEST_SUITE("fixedpoint") {
  TEST_CASE("maps") {
    const auto a = SelfMap::parse("affine:0.5,1");
    CHECK(a.apply(Point{2.0}) == Point{2.0});
    CHECK(a.describe() == "affine:0.5,1");
    const auto t = SelfMap::parse("table:0,0,1");
    CHECK(t.apply(PointIndex{2}) == 1u);
    CHECK(t.describe() == "table:0,0,1");
    CHECK_THROWS_AS(SelfMap::parse("table:0,3"), Error);
    CHECK_THROWS_AS(SelfMap::parse("affine:1"), Error);
    CHECK_THROWS_AS(SelfMap::parse("rotate:1"), Error);
    const auto v = SelfMap::affine_vector({0.5, 0.25}, {1, 0});
    CHECK(v.apply(Point{2, 4}) == Point{2, 1});
  }

  TEST_CASE("domains") {
    const auto line = Domain::scalar_line();
    CHECK_FALSE(line.is_finite());
    CHECK(line.size() == 9);
    CHECK_THROWS_AS(Domain::finite(scalars({0, 1})).check(make_max(1), SelfMap::affine(0.5, 0)),
                    Error);
    CHECK_THROWS_AS(Domain::finite(scalars({0, 1})).check(make_max(1), SelfMap::table({0, 0, 0})),
                    Error);
    CHECK_THROWS_AS(line.check(make_max(1), SelfMap::table({0})), Error);
    const auto labels = GroundSample::from_matrix(DistanceMatrix::from_rows({{0, 1}, {1, 0}}));
    CHECK_THROWS_AS(Domain::continuous(labels), Error);
  }

  TEST_CASE("lambda estimates") {
    const auto line = Domain::scalar_line();
    const auto half = SelfMap::affine(0.5, 0);
    for (int n : {1, 2, 3}) {
      const auto c = estimate_lambda(make_diameter(n), line, half, Regime::banach);
      CHECK(c.lambda_hat == 0.5);
      CHECK(c.exhaustive);
      CHECK_FALSE(c.non_contractive);
    }
    const auto id = estimate_lambda(make_diameter(2), line, SelfMap::affine(1, 0), Regime::banach);
    CHECK(id.lambda_hat == 1.0);
    CHECK(id.non_contractive);
    const auto q =
        estimate_lambda(make_diameter(2), line, SelfMap::affine(0.25, 0), Regime::quasi);
    CHECK(q.lambda_hat <= 0.5);
    // Constant tuples force T x = x in weak condition (i).
    const auto w = estimate_lambda(make_diameter(2), line, half, Regime::banach_weak_i);
    CHECK(w.non_contractive);
    const auto sampled =
        estimate_lambda(make_diameter(2), line, half, Regime::banach, 50, 3);
    CHECK_FALSE(sampled.exhaustive);
    CHECK(sampled.samples_checked == 50);
    CHECK(sampled.lambda_hat <= 0.5);
  }

  TEST_CASE("Banach closed-form orbit") {
    SolverOptions opts;
    opts.tol = 1e-15;
    const auto t = solve_banach(make_diameter(1), Domain::scalar_line(), SelfMap::affine(0.5, 0),
                                Point{1.0}, opts);
    CHECK(t.stop == StopReason::converged);
    CHECK(t.bounds_hold);
    for (std::size_t k = 0; k < t.step_g.size(); ++k) {
      CHECK(t.step_g[k] == std::ldexp(1.0, -static_cast<int>(k) - 1));
      CHECK(t.bound_g[k] == t.step_g[k]);
    }
    CHECK(std::fabs(t.terminal()[0]) <= 1e-15);
  }

  TEST_CASE("Banach affine fixed point") {
    const auto t = solve_banach(make_diameter(2), Domain::scalar_line(), SelfMap::affine(0.5, 1),
                                Point{0.0});
    CHECK(t.stop == StopReason::converged);
    for (std::size_t k = 0; k < 20; ++k) {
      CHECK(std::fabs(t.iterates[k][0] - 2.0) == std::ldexp(1.0, 1 - static_cast<int>(k)));
    }
    CHECK(t.terminal()[0] == doctest::Approx(2.0).epsilon(1e-11));
  }

  TEST_CASE("start at a fixed point") {
    const auto t = solve_banach(make_max(2), Domain::scalar_line(), SelfMap::affine(0.5, 1),
                                Point{2.0});
    REQUIRE(t.step_g.size() == 1);
    CHECK(t.step_g[0] == 0.0);
    CHECK(t.stop == StopReason::converged);
    const auto q = solve_quasi(make_diameter(2), Domain::scalar_line(), SelfMap::affine(0.5, 1),
                               Point{2.0});
    CHECK(q.bounds_hold);
    for (double b : q.rate_bound) CHECK(b == 0.0);
  }

  TEST_CASE("underestimated lambda is flagged, not thrown") {
    SolverOptions opts;
    opts.lambda = 0.25;
    const auto t = solve_banach(make_diameter(1), Domain::scalar_line(), SelfMap::affine(0.5, 0),
                                Point{1.0}, opts);
    CHECK(t.stop == StopReason::bound_violated);
    CHECK_FALSE(t.bounds_hold);
    CHECK(!t.diagnostics.empty());
    opts.lambda = 1.0;
    const auto nc = solve_banach(make_diameter(1), Domain::scalar_line(), SelfMap::affine(0.5, 0),
                                 Point{1.0}, opts);
    CHECK(nc.stop == StopReason::non_contractive);
  }

  TEST_CASE("finite-domain iteration") {
    // 7 -> 3 -> 1 -> 0 halves each step.
    const auto s = scalars({0, 1, 3, 7});
    const auto t = solve_banach(make_diameter(1), Domain::finite(s), SelfMap::table({0, 0, 1, 2}),
                                Point{3.0}, {.lambda = 0.5});
    CHECK(t.stop == StopReason::converged);
    CHECK(t.terminal() == Point{0.0});
    CHECK(t.step_g == std::vector<double>{4, 2, 1, 0});
    CHECK_THROWS_AS(solve_banach(make_diameter(1), Domain::finite(s), SelfMap::table({0, 0, 1, 2}),
                                 Point{7.0}),
                    Error);
  }

  TEST_CASE("psi-phi with equality along the orbit") {
    ControlPair c;
    c.psi = ControlPair::Psi::identity;
    c.phi = ControlPair::Phi::linear;
    c.c = 0.5;
    SolverOptions opts;
    opts.tol = 1e-30;
    const auto t = solve_psi_phi(make_diameter(1), Domain::scalar_line(), SelfMap::affine(0.5, 0),
                                 c, Point{1.0}, opts);
    CHECK(t.stop == StopReason::converged);
    CHECK(t.bounds_hold);
    REQUIRE(!t.psi_lhs.empty());
    for (std::size_t k = 0; k < t.psi_lhs.size(); ++k) {
      CHECK(std::fabs(t.psi_lhs[k] - t.psi_rhs[k]) <= 1e-12);
    }
  }

  TEST_CASE("control validation") {
    ControlPair c;
    c.c = 0.0;
    CHECK_THROWS_AS(c.validate(), Error);
    c.c = 0.5;
    CHECK_NOTHROW(c.validate());
    c.psi = ControlPair::Psi::bounded;
    c.phi = ControlPair::Phi::clamped_square;
    CHECK_NOTHROW(c.validate());
    CHECK(psi_from_string("square") == ControlPair::Psi::square);
    CHECK(phi_from_string("clamped_square") == ControlPair::Phi::clamped_square);
    CHECK_THROWS_AS(psi_from_string("cube"), Error);
  }

  TEST_CASE("quasi rate and orbit bounds") {
    SolverOptions opts;
    opts.lambda = 0.5;
    opts.tol = 1e-40;
    const auto t = solve_quasi(make_diameter(2), Domain::scalar_line(), SelfMap::affine(0.25, 0),
                               Point{1.0}, opts);
    CHECK(t.stop == StopReason::converged);
    CHECK(t.bounds_hold);
    for (std::size_t N = 0; N <= 20; ++N) {
      CHECK(t.rate_bound[N] == doctest::Approx(3.0 * std::pow(4.0, -static_cast<double>(N))));
      CHECK(t.rate_actual[N] / t.rate_bound[N] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    }
    CHECK(t.orbit_bound == 3.0);
    for (std::size_t N = 0; N < t.orbit_diameter.size(); ++N) {
      CHECK(t.orbit_diameter[N] == doctest::Approx(1.0 - std::pow(4.0, -static_cast<double>(N))));
      CHECK(t.orbit_diameter[N] <= 3.0);
      CHECK(t.orbit_tail_max[N] <= 0.25 * t.orbit_diameter[N] + 1e-15);
    }
  }

  TEST_CASE("weak-contractive solver") {
    const auto s = scalars({0, 1, 2});
    const auto r = solve_weak_contractive(make_diameter(1), s, SelfMap::table({0, 0, 1}));
    CHECK(r.f == std::vector<double>{0, 1, 1});
    CHECK(r.argmin == 0);
    CHECK(r.fixed_point);
    const auto id = solve_weak_contractive(make_diameter(2), s, SelfMap::table({0, 1, 2}));
    CHECK(id.argmin == 0);
    CHECK(id.fixed_point);
    for (double f : id.f) CHECK(f == 0.0);
    const auto swap =
        solve_weak_contractive(make_diameter(1), scalars({0, 1}), SelfMap::table({1, 0}));
    CHECK_FALSE(swap.fixed_point);
    CHECK_FALSE(swap.weak_contractive);
    REQUIRE(swap.counterexample.has_value());
    CHECK(swap.counterexample->lhs == swap.counterexample->rhs);
    CHECK(swap.counterexample->axiom == AxiomId::contraction);
  }

  TEST_CASE("uniqueness probe") {
    const auto line = Domain::scalar_line();
    const std::vector<Point> starts{{-1.0}, {0.3}, {7.0}};
    SolverOptions opts;
    opts.tol = 1e-15;
    auto u = uniqueness_probe(make_diameter(1), line, SelfMap::affine(0.5, 0), Regime::banach,
                              starts, opts);
    CHECK(u.agree);
    u = uniqueness_probe(make_diameter(1), line, SelfMap::affine(0.5, 1), Regime::banach, 5, 1, opts);
    CHECK(u.agree);
    CHECK(u.terminals.size() == 5);
    for (const auto& t : u.terminals) CHECK(t[0] == doctest::Approx(2.0));
    opts.lambda = 0.99;
    u = uniqueness_probe(make_diameter(1), line, SelfMap::affine(1, 0), Regime::banach, starts, opts);
    CHECK_FALSE(u.agree);
    for (std::size_t i = 0; i < starts.size(); ++i) CHECK(u.terminals[i] == starts[i]);
  }

  TEST_CASE("regime names round-trip") {
    for (auto r : {Regime::banach, Regime::banach_weak_i, Regime::banach_weak_ii, Regime::psi_phi,
                   Regime::weak_contractive, Regime::quasi}) {
      CHECK(regime_from_string(to_string(r)) == r);
    }
    CHECK(regime_from_string("weak") == Regime::weak_contractive);
    CHECK_THROWS_AS(regime_from_string("newton"), Error);
  }
}
