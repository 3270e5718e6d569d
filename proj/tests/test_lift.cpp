#include <cmath>

#include "doctest.h"
#include "proper_lift/distance.hpp"
#include "proper_lift/embedding.hpp"
#include "proper_lift/errors.hpp"
#include "proper_lift/lift.hpp"
#include "proper_lift/manifold_io.hpp"
#include "proper_lift/smoothing.hpp"
#include "proper_lift/surgery.hpp"
#include "support.hpp"

using namespace proper_lift;

namespace {

struct CurveRun {
  ManifoldPtr m;
  ScalarField d;
  ScalarField phi;
  MetricField gt;
  EmbeddingMap raw;
  EmbeddingMap lifted;
};

CurveRun run_curve(const ManifoldPtr& m, Provider provider, int dim, const SmoothingParams& params = {}) {
  auto d = distance_field(m);
  auto sm = smooth_approx(truncate_distance(d, params), params);
  REQUIRE(sm.certificate.valid());
  auto gt = modify_metric(MetricField::of(m), differential(sm.phi));
  EmbedRequest req{gt};
  req.provider = provider;
  req.ambient_dim = dim;
  auto raw = embed_curve(req);
  auto lifted = lift(raw, sm.phi);
  return {m, std::move(d), std::move(sm.phi), std::move(gt), std::move(raw), std::move(lifted)};
}

double dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

const char* kMetric = "(1 + 0.1*(t/100)^2)^2";

}  // namespace

TEST_CASE("lift examples") {
  const auto m = test::curve_from_lengths({1.0});
  const auto e = lift(EmbeddingMap(m, 2, {1, 0, 3, 4}), ScalarField(m, {2.0, 0.1}));
  REQUIRE(e.ambient_dim() == 3);
  CHECK(std::vector<double>(e.point(0).begin(), e.point(0).end()) == std::vector<double>{1, 0, 1});
  CHECK(e.point(1)[2] == 0.05);
  const auto other = test::curve_from_lengths({1.0});
  CHECK_THROWS_AS(lift(EmbeddingMap(m, 1, {0, 1}), ScalarField(other, {1, 1})), ValidationError);
}

TEST_CASE("Pythagorean identity of the lift") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const auto m = make_grid(6, 6, 1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x(36 * 4), phi(36);
    for (auto& c : x) c = u(rng);
    for (auto& p : phi) p = u(rng);
    const EmbeddingMap et(m, 4, x);
    const auto e = lift(et, ScalarField(m, phi));
    for (const auto& ed : m->graph().edges) {
      const double lhs = std::pow(dist(e.point(ed.u), e.point(ed.v)), 2);
      const double rhs = std::pow(dist(et.point(ed.u), et.point(ed.v)), 2) + 0.25 * std::pow(phi[ed.u] - phi[ed.v], 2);
      CHECK(test::rel_diff(lhs, rhs) <= 1e-15);
    }
  }
}

TEST_CASE("lifted line is isometric to quadrature accuracy") {
  const auto metric = metric_from_expression(kMetric, 1);
  const auto run = run_curve(make_interval(0.0, 10.0, 10001, metric), Provider::Line, 1);
  const auto report = pullback_check(run.lifted);
  CHECK(report.max_rel_edge_error <= 1e-6);
  // spot check against an independent arc length
  const auto walk = walk_curve(*run.m);
  for (std::size_t i = 0; i < walk.edges.size(); i += 997) {
    const double a = run.m->chart(walk.order[i])[0], b = run.m->chart(walk.order[i + 1])[0];
    const double arc = test::integrate([](double t) { return 1.0 + 0.1 * (t / 100) * (t / 100); }, a, b);
    CHECK(test::rel_diff(dist(run.lifted.point(walk.order[i]), run.lifted.point(walk.order[i + 1])), arc) <= 1e-6);
  }
  // the minimum height is r_ball / 4 or more
  double lowest = 1e9;
  for (VertexId v = 0; v < run.m->vertex_count(); ++v) lowest = std::min(lowest, run.lifted.point(v)[1]);
  CHECK(lowest > SmoothingParams{}.r_ball / 4);
}

TEST_CASE("dropping the lift leaves exactly the surgery gap") {
  const auto run = run_curve(make_interval(0.0, 5.0, 501), Provider::Line, 1);
  const auto flat = lift(run.raw, ScalarField(run.m, std::vector<double>(run.m->vertex_count(), 0.0)));
  const auto g = MetricField::of(run.m);
  const auto report = pullback_check(flat, g);
  const auto lt = edge_lengths(*run.m, run.gt.coefficients());
  const auto l = edge_lengths(*run.m, g.coefficients());
  double gap = 0.0;
  for (std::size_t e = 0; e < l.size(); ++e) gap = std::max(gap, std::abs(lt[e] - l[e]) / l[e]);
  CHECK(gap > 0.0);
  CHECK(report.max_rel_edge_error == doctest::Approx(gap).epsilon(1e-9));
  CHECK(pullback_check(run.lifted, g).max_rel_edge_error < 1e-12);
}

TEST_CASE("escape bound") {
  SUBCASE("spiral run has no violations") {
    const auto run = run_curve(make_interval(0.0, 100.0, 10001, metric_from_expression(kMetric, 1)),
                               Provider::SpiralToCircle, 2);
    const auto r = escape_bound_check(run.lifted, run.d, {});
    CHECK(r.passed());
    CHECK(r.checked > 9000);
    CHECK(r.min_slack > 0.0);
  }
  SUBCASE("a vertex at D = 8 needs height above 2") {
    const auto m = test::curve_from_lengths({8.0});
    const ScalarField d(m, {0.0, 8.0});
    CHECK_FALSE(escape_bound_check(EmbeddingMap(m, 2, {0, 1, 0, 2.0}), d, {}).passed());
    CHECK(escape_bound_check(EmbeddingMap(m, 2, {0, 1, 0, 2.0000001}), d, {}).passed());
  }
  SUBCASE("sabotaged phi / 10") {
    const auto run = run_curve(make_interval(0.0, 20.0, 2001), Provider::Line, 1);
    std::vector<double> tenth(run.phi.values().begin(), run.phi.values().end());
    for (auto& p : tenth) p /= 10;
    const auto r = escape_bound_check(lift(run.raw, ScalarField(run.m, tenth)), run.d, {});
    CHECK_FALSE(r.passed());
    CHECK(r.violations.size() > 1000);
  }
}

TEST_CASE("properness certificates") {
  const SmoothingParams params;
  const auto run = run_curve(make_interval(0.0, 100.0, 10001, metric_from_expression(kMetric, 1)),
                             Provider::SpiralToCircle, 2);
  bool earlier = true;
  for (const double Q : {0.5, 1.0, 2.0}) {
    const std::vector<double> q{0.0, 0.0, Q};
    const auto cert = properness_certificate(run.lifted, run.d, q, params);
    CHECK(cert.far_bound == Q);
    CHECK(cert.near_min > 0.0);
    CHECK(cert.verdict);
    CHECK(cert.verdict == earlier);
    CHECK(cert.near_count + cert.far_count == run.m->vertex_count());
    // brute force over the far part never beats the wedge bound
    for (VertexId v = 0; v < run.m->vertex_count(); ++v)
      if (run.d[v] > cert.far_radius) CHECK(dist(run.lifted.point(v), q) >= cert.far_bound);
    earlier = cert.verdict;
  }
  CHECK_THROWS_AS(properness_certificate(run.lifted, run.d, std::vector<double>{0, 0, 0}, params), UnsupportedQuery);
  CHECK_THROWS_AS(properness_certificate(run.lifted, run.d, std::vector<double>{1, 0, -1}, params), UnsupportedQuery);
  CHECK_THROWS_AS(properness_certificate(run.lifted, run.d, std::vector<double>{0, 1}, params), ValidationError);

  SUBCASE("perturbed image point") {
    const auto p = run.lifted.point(1234);
    const std::vector<double> q{p[0], p[1], p[2] + 1e-3};
    const auto cert = properness_certificate(run.lifted, run.d, q, params);
    CHECK(cert.near_min == doctest::Approx(1e-3).epsilon(1e-6));
    CHECK(cert.verdict);
    const std::vector<double> on{p[0], p[1], p[2]};
    CHECK_THROWS_AS(properness_certificate(run.lifted, run.d, on, params), ValidationError);
  }
  SUBCASE("empty near part") {
    const auto m = test::curve_from_lengths({1.0, 1.0});
    const ScalarField far_d(m, {10.0, 11.0, 12.0});
    const EmbeddingMap e(m, 2, {0, 3, 1, 3.5, 2, 4});
    const auto cert = properness_certificate(e, far_d, std::vector<double>{0, 0.5}, params);
    CHECK(cert.near_count == 0);
    CHECK(cert.far_bound == 0.5);
    CHECK(cert.verdict);
  }
  SUBCASE("escape failure removes the far bound") {
    const auto m = test::curve_from_lengths({10.0});
    const ScalarField d(m, {0.0, 10.0});
    const EmbeddingMap e(m, 2, {0, 1, 10, 1});
    const auto cert = properness_certificate(e, d, std::vector<double>{0, 0.5}, params);
    CHECK(cert.far_bound == 0.0);
    CHECK_FALSE(cert.verdict);
  }
}

TEST_CASE("non-properness witnesses") {
  WitnessParams wp;
  wp.targets = {{1.0, 0.0}};
  SUBCASE("raw spiral to the unit circle, T = 10^4") {
    // chords must sag less than the 1 / (1 + t) gap: h^2 / 8 << 1e-4
    const auto m = make_interval(0.0, 1e4, 1000001);
    EmbedRequest req{MetricField::of(m)};
    req.provider = Provider::SpiralToCircle;
    req.ambient_dim = 2;
    const auto w = non_properness_witness(embed_curve(req), wp);
    REQUIRE(w.has_value());
    CHECK(w->target == std::vector<double>{1.0, 0.0});
    CHECK(w->samples.size() >= 8);
    CHECK(w->samples.back().t >= 5000.0);
    for (std::size_t k = 0; k < w->samples.size(); ++k) {
      CHECK(w->samples[k].distance < 3.0 / (1.0 + w->samples[k].t));
      if (k > 0) {
        CHECK(w->samples[k].t > w->samples[k - 1].t);
        CHECK(w->samples[k].distance < w->samples[k - 1].distance);
      }
    }
  }
  SUBCASE("raw spiral to a point") {
    const auto m = make_interval(0.0, 100.0, 10001);
    EmbedRequest req{MetricField::of(m)};
    req.provider = Provider::SpiralToPoint;
    req.ambient_dim = 2;
    const auto x = embed_curve(req);
    WitnessParams centre;
    centre.targets = {{0.0, 0.0}};
    const auto w = non_properness_witness(x, centre);
    REQUIRE(w.has_value());
    CHECK(w->samples.size() >= 8);
    // the whole tail is one visit, so a tail point cannot witness against itself
    WitnessParams tail;
    tail.tail_candidates = 4;
    CHECK_FALSE(non_properness_witness(x, tail).has_value());
  }
  SUBCASE("straight line") {
    const auto m = make_interval(0.0, 1e4, 10001);
    EmbedRequest req{MetricField::of(m)};
    req.ambient_dim = 2;
    WitnessParams everywhere = wp;
    everywhere.radius = 1e9;
    everywhere.targets = {{0.0, 0.0}, {5000.0, 0.0}};
    CHECK_FALSE(non_properness_witness(embed_curve(req), everywhere).has_value());
  }
  SUBCASE("lifted spiral") {
    const auto run = run_curve(make_interval(0.0, 100.0, 10001, metric_from_expression(kMetric, 1)),
                               Provider::SpiralToCircle, 2);
    CHECK(non_properness_witness(run.raw, wp).has_value());
    WitnessParams lifted;
    lifted.radius = INFINITY;
    lifted.targets = {{1.0, 0.0, 0.0}};
    CHECK_FALSE(non_properness_witness(run.lifted, lifted).has_value());
  }
  SUBCASE("closed curves are refused") {
    const auto m = make_circle(1.0, 10);
    CHECK_THROWS_AS(non_properness_witness(EmbeddingMap(m, 1, std::vector<double>(10, 0.0)), wp), ValidationError);
  }
}
