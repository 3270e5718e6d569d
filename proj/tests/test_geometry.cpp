#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "proper_lift/errors.hpp"
#include "proper_lift/expression.hpp"
#include "proper_lift/geometry.hpp"
#include "proper_lift/manifold_io.hpp"
#include "support.hpp"

using namespace proper_lift;

namespace {

ManifoldData unit_right_triangle() {
  ManifoldData d;
  d.dimension = 2;
  d.charts = {0, 0, 1, 0, 0, 1};
  d.cell_vertices = {0, 1, 2};
  d.metric = {Sym2{}};
  return d;
}

}  // namespace

TEST_CASE("manifold validation rejects broken input") {
  SUBCASE("dangling vertex") {
    auto d = unit_right_triangle();
    d.cell_vertices = {0, 1, 7};
    CHECK_THROWS_AS(SampledManifold::create(d), ValidationError);
  }
  SUBCASE("repeated vertex in a cell") {
    auto d = unit_right_triangle();
    d.cell_vertices = {0, 1, 1};
    CHECK_THROWS_AS(SampledManifold::create(d), ValidationError);
  }
  SUBCASE("metric with a non-positive eigenvalue") {
    auto d = unit_right_triangle();
    d.metric = {Sym2{1.0, 1.0, 1.0}};
    CHECK_THROWS_AS(SampledManifold::create(d), ValidationError);
    d.metric = {Sym2{-1.0, 0.0, 1.0}};
    CHECK_THROWS_AS(SampledManifold::create(d), ValidationError);
    d.metric = {Sym2{1.0, 0.0, 0.0}};
    CHECK_THROWS_AS(SampledManifold::create(d), ValidationError);
  }
  SUBCASE("non-positive curve length") {
    CHECK_THROWS_AS(test::curve_from_samples({0, 1}, {0.0}), ValidationError);
  }
  SUBCASE("missing base vertex") {
    auto d = unit_right_triangle();
    d.base_vertex = 3;
    CHECK_THROWS_AS(SampledManifold::create(d), ValidationError);
  }
  SUBCASE("disconnected") {
    ManifoldData d;
    d.dimension = 1;
    d.charts = {0, 1, 2, 3};
    d.cell_vertices = {0, 1, 2, 3};
    d.metric = {Sym2{}, Sym2{}};
    CHECK_THROWS_AS(SampledManifold::create(d), ValidationError);
  }
  SUBCASE("unsupported dimension") {
    auto d = unit_right_triangle();
    d.dimension = 3;
    CHECK_THROWS_AS(SampledManifold::create(d), ValidationError);
  }
}

TEST_CASE("edge graph, lengths and mesh scale") {
  const auto m = SampledManifold::create(unit_right_triangle());
  CHECK(m->vertex_count() == 3);
  CHECK(m->cell_count() == 1);
  const auto& g = m->graph();
  REQUIRE(g.edge_count() == 3);
  CHECK(g.lengths[m->edge_index(1, 2)] == doctest::Approx(std::sqrt(2.0)));
  CHECK(g.lengths[m->edge_index(0, 1)] == 1.0);
  CHECK(m->mesh_scale() == doctest::Approx(std::sqrt(2.0)));
  for (std::size_t v = 0; v < 3; ++v) {
    const auto begin = g.offsets[v], end = g.offsets[v + 1];
    for (auto k = begin + 1; k < end; ++k) CHECK(g.neighbors[k - 1] < g.neighbors[k]);
  }
}

TEST_CASE("shared edges average the lengths of their cells") {
  ManifoldData d;
  d.dimension = 2;
  d.charts = {0, 0, 1, 0, 0, 1, 1, 1};
  d.cell_vertices = {0, 1, 2, 1, 3, 2};
  d.metric = {Sym2{1, 0, 1}, Sym2{4, 0, 4}};
  const auto m = SampledManifold::create(d);
  // edge 1-2 has chart length sqrt 2 under both cells: sqrt2 and 2 sqrt2
  CHECK(m->graph().lengths[m->edge_index(1, 2)] == doctest::Approx(1.5 * std::sqrt(2.0)));
  CHECK(m->edge_cells(m->edge_index(1, 2)).size() == 2);
}

TEST_CASE("fields check their sizes and finiteness") {
  const auto m = test::curve_from_lengths({1.0, 1.0});
  CHECK_THROWS_AS(ScalarField(m, {1.0, 2.0}), ValidationError);
  CHECK_THROWS_AS(ScalarField(m, {1.0, NAN, 2.0}), ValidationError);
  CHECK_THROWS_AS(CovectorField(m, {{1.0, 0.0}}), ValidationError);
  CHECK_THROWS_AS(MetricField(m, {Sym2{}, Sym2{}, Sym2{}}), ValidationError);
  CHECK_THROWS_AS(EmbeddingMap(m, 2, {0, 0, 1, 1}), ValidationError);
  CHECK_THROWS_AS(EmbeddingMap(m, 1, {0, INFINITY, 1}), ValidationError);
  const auto other = test::curve_from_lengths({1.0, 1.0});
  CHECK_THROWS_AS(require_same_manifold(m, other, "test"), ValidationError);
  const auto g = MetricField::of(m);
  CHECK(g.size() == 2);
  CHECK(g[1].xx == 1.0);
}

TEST_CASE("curve walks") {
  SUBCASE("open curve starts at the smaller chart end") {
    ManifoldData d;
    d.dimension = 1;
    d.charts = {2, 0, 1};
    d.cell_vertices = {0, 2, 2, 1};
    d.metric = {Sym2{}, Sym2{}};
    const auto m = SampledManifold::create(d);
    const auto w = walk_curve(*m);
    CHECK_FALSE(w.closed);
    CHECK(w.order == std::vector<VertexId>{1, 2, 0});
    CHECK(w.edges.size() == 2);
  }
  SUBCASE("loop starts at the base and closes") {
    const auto m = make_circle(1.0, 5, nullptr, 2);
    const auto w = walk_curve(*m);
    CHECK(w.closed);
    CHECK(w.order.size() == 5);
    CHECK(w.order.front() == 2);
    CHECK(w.edges.size() == 5);
    CHECK(w.order[1] == 3);
  }
}

TEST_CASE("triangle metric fit reproduces prescribed edge lengths") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    // a random SPD metric and triangle; its own edge lengths must give it back
    const Sym2 g{1.5 + u(rng), 0.3 * u(rng), 1.5 + u(rng)};
    const std::array<double, 6> c{u(rng), u(rng), 2 + u(rng), u(rng), u(rng), 2 + u(rng)};
    std::array<double, 3> len{};
    const int ends[3][2] = {{0, 1}, {1, 2}, {2, 0}};
    Eigen::Matrix2d G;
    G << g.xx, g.xy, g.xy, g.yy;
    for (int k = 0; k < 3; ++k) {
      Eigen::Vector2d d(c[2 * ends[k][1]] - c[2 * ends[k][0]], c[2 * ends[k][1] + 1] - c[2 * ends[k][0] + 1]);
      len[k] = std::sqrt(d.dot(G * d));
    }
    const auto fit = fit_triangle_metric(c, std::span<const double, 3>(len));
    CHECK(fit.xx == doctest::Approx(g.xx).epsilon(1e-9));
    CHECK(fit.xy == doctest::Approx(g.xy).epsilon(1e-9));
    CHECK(fit.yy == doctest::Approx(g.yy).epsilon(1e-9));
  }
}

TEST_CASE("reference lengths follow the analytic metric") {
  SUBCASE("curve arc length against adaptive quadrature") {
    const auto metric = metric_from_expression("(1 + 0.1*(t/100)^2)^2", 1);
    const auto m = make_interval(0.0, 100.0, 11, metric);
    const auto ref = reference_edge_lengths(*m);
    const auto walk = walk_curve(*m);
    for (std::size_t i = 0; i < walk.edges.size(); ++i) {
      const double a = m->chart(walk.order[i])[0], b = m->chart(walk.order[i + 1])[0];
      const double oracle = test::integrate([](double t) { return 1.0 + 0.1 * (t / 100) * (t / 100); }, a, b);
      CHECK(test::rel_diff(ref[walk.edges[i]], oracle) < 1e-13);
    }
  }
  SUBCASE("surface of revolution: cell metrics reproduce every analytic edge length") {
    const auto m = make_revolution([](double r) { return r; }, 1.0, 2.0, 1.0, 5, 5);
    const auto ref = reference_edge_lengths(*m);
    const auto& lengths = m->graph().lengths;
    for (std::size_t e = 0; e < ref.size(); ++e) CHECK(test::rel_diff(lengths[e], ref[e]) < 1e-12);
    // theta edge at radius r has length r * dtheta
    const VertexId a = 1, b = 1 + 5;  // r = 1.25, theta 0 -> 0.25
    CHECK(ref[m->edge_index(a, b)] == doctest::Approx(1.25 * 0.25).epsilon(1e-14));
  }
  SUBCASE("no analytic metric: cell metric lengths") {
    const auto m = test::curve_from_lengths({0.5, 2.0});
    CHECK(reference_edge_lengths(*m) == m->graph().lengths);
  }
}

TEST_CASE("expressions") {
  auto eval = [](const char* text, double t = 0.0) {
    return Expression::parse(text, {"t"})(std::span<const double>(&t, 1));
  };
  CHECK(eval("1 + 2 * 3") == 7.0);
  CHECK(eval("2 ^ 3 ^ 2") == 512.0);
  CHECK(eval("-2 ^ 2") == -4.0);
  CHECK(eval("(1 + t) / 2", 3.0) == 2.0);
  CHECK(eval("sqrt(4) + abs(-1) + exp(0) + log(e)") == doctest::Approx(5.0));
  CHECK(eval("sin(pi / 2) + cos(0) + tan(0)") == doctest::Approx(2.0));
  CHECK(eval("(1 + 0.1*(t/100)^2)^2", 100.0) == doctest::Approx(1.21));
  CHECK_THROWS_AS(Expression::parse("1 +", {"t"}), ParseError);
  CHECK_THROWS_AS(Expression::parse("x", {"t"}), ParseError);
  CHECK_THROWS_AS(Expression::parse("sin 1", {"t"}), ParseError);
  CHECK_THROWS_AS(Expression::parse("(1", {"t"}), ParseError);
  CHECK_THROWS_AS(Expression::parse("1 2", {"t"}), ParseError);
}
