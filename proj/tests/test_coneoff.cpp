#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hypcone/coneoff.hpp"
#include "oracles.hpp"

using namespace hypcone;

namespace {

WeightedGraph cycle(std::size_t n) {
  WeightedGraph g(n);
  for (std::size_t i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

ActionTable z8() {
  return ActionTable::from_generators(8, {{1, 2, 3, 4, 5, 6, 7, 0}});
}

ConeFamily desk_family() {
  return ConeFamily{1.0, {ConeEntry{{0, 1, 2, 3, 4, 5, 6, 7}, {4}}}};
}

}  // namespace

TEST_SUITE("coneoff") {

TEST_CASE("cone distance reference values") {
  CHECK(cone_distance(1, 1, 1, 1) == doctest::Approx(0.93560302028299981).epsilon(1e-13));
  CHECK(cone_distance(0.5, 2, 3, 2) == doctest::Approx(1.7495459438904153).epsilon(1e-13));
  CHECK(cone_distance(1, 0.25, 0.1, 1) == doctest::Approx(0.75130486357098402).epsilon(1e-13));
  CHECK(cone_distance(2, 2, 100, 2) == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(cone_distance(2, 2, kInfinity, 2) == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(cone_angle(kInfinity, 1.0) == std::numbers::pi);
  CHECK(cone_angle(1.0, 1.0) == doctest::Approx(1.0 / std::sinh(1.0)));
}

TEST_CASE("cone distance rejects bad arguments") {
  CHECK_THROWS_AS(cone_distance(-1, 1, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(cone_distance(1, 1, -1, 1), std::invalid_argument);
  CHECK_THROWS_AS(cone_distance(1, 1, 1, 0), std::invalid_argument);
}

TEST_CASE("property: cone distance is a symmetric law of cosines") {
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double rho = 0.1 + 3 * u(rng);
    const double r = rho * u(rng), r2 = rho * u(rng), dY = 10 * u(rng);
    const double d = cone_distance(r, r2, dY, rho);
    CHECK(d == doctest::Approx(cone_distance(r2, r, dY, rho)));
    CHECK(d <= r + r2 + 1e-12);
    CHECK(d >= std::abs(r - r2) - 1e-12);
    const double th = std::min(std::numbers::pi, dY / std::sinh(rho));
    const double c = std::cosh(r) * std::cosh(r2) - std::sinh(r) * std::sinh(r2) * std::cos(th);
    CHECK(std::cosh(d) == doctest::Approx(c).epsilon(1e-9));
  }
}

TEST_CASE("desk cone-off of C8") {
  const auto g = cycle(8);
  const auto a = z8();
  const auto q = normalize_family(desk_family(), &a, 8);
  const auto co = build_coneoff(g, q);
  CHECK(co.base_count == 8);
  CHECK(co.apices == std::vector<Vertex>{8});
  CHECK(co.rim_edges == 8);
  CHECK(co.chord_edges == 24);
  CHECK(co.metric(0, 1) == doctest::Approx(0.93560302028299981));
  CHECK(co.metric(0, 4) == doctest::Approx(2.0));
  CHECK(co.metric(0, 8) == 1.0);
  // 1-Lipschitz inclusion
  const auto X = path_metric(g);
  for (Vertex u = 0; u < 8; ++u)
    for (Vertex v = 0; v < 8; ++v) CHECK(co.metric(u, v) <= X(u, v) + 1e-12);
}

TEST_CASE("family validation") {
  const auto a = z8();
  ConeFamily bad{1.0, {ConeEntry{{0, 1}, {4}}}};
  CHECK_THROWS_AS(normalize_family(bad, &a, 8), std::invalid_argument);
  ConeFamily out_of_range{1.0, {ConeEntry{{0, 9}, {}}}};
  CHECK_THROWS(normalize_family(out_of_range, &a, 8));
  const auto q = normalize_family(desk_family(), &a, 8);
  CHECK(q.cones[0].H == std::vector<Element>{0, 4});
  const auto e = expand_family(q, a);
  CHECK(e.cones.size() == 1);
  ConeFamily arc{1.0, {ConeEntry{{0, 1, 2}, {}}}};
  CHECK(expand_family(normalize_family(arc, &a, 8), a).cones.size() == 8);
  CHECK_THROWS_AS(extend_action_to_coneoff(a, normalize_family(arc, &a, 8), 8),
                  std::invalid_argument);
  const auto ext = extend_action_to_coneoff(a, q, 8);
  CHECK(ext.point_count() == 9);
  CHECK(ext.apply(1, 8) == 8);
}

TEST_CASE("small cancellation parameters of the desk example") {
  const auto g = cycle(8);
  const auto a = z8();
  const auto q = normalize_family(desk_family(), &a, 8);
  auto p = compute_sc_parameters(g, a, q);
  const auto d = oracle::floyd_warshall(8, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1},
                                            {4, 5, 1}, {5, 6, 1}, {6, 7, 1}, {7, 0, 1}});
  CHECK(p.delta_X == oracle::gromov_delta(d));
  CHECK(p.Delta_Q == 0.0);
  CHECK(p.inj_Q == 4.0);
  CHECK(p.rho == 1.0);
  CHECK_THROWS_AS(check_sc_hypotheses(p), std::invalid_argument);
  p.constants = ScConstants{2.0, 1.0, 1.0, 1.0};
  const auto rep = check_sc_hypotheses(p);
  REQUIRE(rep.clauses.size() == 4);
  CHECK(rep.clauses[0].holds);
  CHECK(rep.clauses[1].holds);
  CHECK_FALSE(rep.clauses[2].holds);  // 4 < 2 pi sinh 1
  CHECK(rep.clauses[3].holds);
  CHECK_FALSE(rep.holds);
}

TEST_CASE("overlap parameter of two arcs") {
  const auto g = cycle(12);
  const auto m = path_metric(g);
  ConeFamily q{1.0, {ConeEntry{{0, 1, 2, 3}, {0}}, ConeEntry{{2, 3, 4, 5}, {0}}}};
  CHECK(delta_param(q, m, 0.0) == 1.0);
  ConeFamily far{1.0, {ConeEntry{{0}, {0}}, ConeEntry{{6}, {0}}}};
  CHECK(delta_param(far, m, 0.0) == 0.0);
}

TEST_CASE("lambda formula") {
  CHECK(quotient_lambda(1.0, 2.0) == doctest::Approx(1.8460017182206613).epsilon(1e-14));
  CHECK(quotient_lambda(2.0, 1.0) == doctest::Approx(std::numbers::pi * std::sinh(2.0) / 4));
  CHECK(quotient_lambda(0.01, 0.0) > 1.0);
  CHECK(quotient_lambda(1.0, 10.0) == 5.0);
}

TEST_CASE("desk quotient comparison") {
  const auto pipe = run_quotient_comparison(cycle(8), z8(), desk_family(), std::vector<Element>{4});
  const auto& c = pipe.comparison;
  CHECK(pipe.base_quotient.orbits.size() == 4);
  CHECK(pipe.coneoff_quotient.orbits.size() == 5);
  CHECK(c.D == 2.0);
  CHECK(c.lambda == doctest::Approx(1.8460017182206613));
  CHECK(c.lower_holds);
  CHECK(c.upper_holds);
  CHECK(c.cobounded);
  CHECK(c.holds());
  CHECK(c.pairs_checked == 6);
}

TEST_CASE("quotient comparison needs matching orbits") {
  const auto a = FiniteMetricSpace::from_rows({{0, 1}, {1, 0}});
  const auto b = FiniteMetricSpace::from_rows({{0}});
  CHECK_THROWS_AS(quotient_comparison(a, b, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("presentation ball injectivity") {
  const auto p = parse_presentation("generators: a b c\nC A c a b a a");
  const auto rep = ball_injectivity_check(p, 300.0);
  CHECK(rep.status == InjectivityReport::Status::injective);
  CHECK(rep.ball_size == 1 + 6 + 30 + 150);
}

}
