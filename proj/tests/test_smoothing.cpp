#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "proper_lift/distance.hpp"
#include "proper_lift/errors.hpp"
#include "proper_lift/kernels.hpp"
#include "proper_lift/manifold_io.hpp"
#include "proper_lift/smoothing.hpp"
#include "support.hpp"

using namespace proper_lift;

namespace {

ScalarField constant(const ManifoldPtr& m, double c) { return ScalarField(m, std::vector<double>(m->vertex_count(), c)); }

void check_certified(const SmoothingResult& r, const ScalarField& f, const SmoothingParams& params) {
  CHECK(r.certificate.valid());
  CHECK(r.certificate.measured_lipschitz <= 0.75);
  CHECK(r.certificate.violating_vertices.empty());
  for (std::size_t v = 0; v < f.size(); ++v) {
    const double lo = r.phi[v] - 0.75 * f[v], hi = 1.5 * f[v] - r.phi[v];
    CHECK(lo > 0.0);
    CHECK(hi > 0.0);
    CHECK(std::min(lo, hi) >= params.tube_margin * f[v] / 8.0);
  }
}

}  // namespace

TEST_CASE("Lipschitz number examples") {
  const auto m = test::curve_from_samples({0, 1, 3}, {1, 1});
  CHECK(lipschitz_number(constant(m, 4.0)) == 0.0);
  CHECK(lipschitz_number(ScalarField(m, {0, 2, 3})) == 2.0);
  CHECK(lipschitz_number(distance_field(m)) == 1.0);
  const auto path = test::curve_from_lengths({1, 1, 1});
  CHECK(lipschitz_number(ScalarField(path, {0, 1, 1.5, 2})) == 1.0);
  CHECK(LipschitzGauge(path, 0).uses_pairs() == false);
  CHECK(LipschitzGauge(path).uses_pairs());
}

TEST_CASE("cell gradients enter the gauge on triangle meshes") {
  const auto m = make_grid(2, 2, 1.0, 1.0);
  const LipschitzGauge gauge(m);
  // x + y on the unit square: every edge quotient is at most 1, the gradient norm is sqrt 2
  const ScalarField f(m, {0, 1, 1, 2});
  CHECK(gauge.pairwise(f.values()) == doctest::Approx(std::sqrt(2.0)));
  CHECK(gauge.cell_gradient(f.values()) == doctest::Approx(std::sqrt(2.0)));
  const ScalarField g(m, {0, 1, 0, 1});
  CHECK(gauge.cell_gradient(g.values()) == doctest::Approx(1.0));
}

TEST_CASE("truncation and tube examples") {
  const auto m = test::curve_from_lengths({0.1, 0.1, 0.8});
  const ScalarField d(m, {0.0, 0.1, 0.2, 1.0});
  SmoothingParams params;
  const auto f = truncate_distance(d, params);
  CHECK(f[3] == doctest::Approx(0.666667).epsilon(1e-6));
  CHECK(f[1] == doctest::Approx(0.133333).epsilon(1e-5));
  CHECK(f[2] == f[1]);
  CHECK(f[0] == 2.0 / 3.0 * 0.2);
  const auto [lo, hi] = tube_bounds(ScalarField(m, {2.0 / 3.0, 0.4 / 3.0, 1, 1}));
  CHECK(lo[0] == doctest::Approx(0.5));
  CHECK(hi[0] == doctest::Approx(1.0));
  CHECK(lo[1] == doctest::Approx(0.1));
  CHECK(hi[1] == doctest::Approx(0.2));
  CHECK_THROWS_AS(tube_bounds(ScalarField(m, {1, 0, 1, 1})), ValidationError);
  params.r_ball = 0.25;
  CHECK_THROWS_AS(truncate_distance(d, params), ValidationError);
}

TEST_CASE("parameter validation") {
  SmoothingParams p;
  CHECK_NOTHROW(p.validate());
  CHECK(p.lipschitz_target() == 0.75);
  p.tube_margin = 0.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = {};
  p.r_slack = 0.1;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = {};
  p.r_ball = 0.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("truncated distance is 2/3-Lipschitz") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  const SmoothingParams params;
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> lengths(100);
    for (auto& l : lengths) l = u(rng);
    const auto m = test::curve_from_lengths(lengths, static_cast<VertexId>(trial * 3));
    const auto f = truncate_distance(distance_field(m), params);
    CHECK(LipschitzGauge(m).pairwise(f.values()) <= 2.0 / 3.0 * (1 + 1e-12));
  }
  const auto grid = make_grid(12, 12, 1.0, 1.0, metric_from_expression("1 + x*y", 2), 30);
  const auto f = truncate_distance(distance_field(grid), params);
  CHECK(LipschitzGauge(grid).pairwise(f.values()) <= 2.0 / 3.0 * (1 + 1e-12));
}

TEST_CASE("constant input is a fixed point") {
  const auto m = make_interval(0.0, 3.0, 31);
  const auto f = constant(m, 0.8);
  const SmoothingParams params;
  const auto r = smooth_approx(f, params);
  for (std::size_t v = 0; v < f.size(); ++v) CHECK(r.phi[v] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(r.certificate.measured_lipschitz == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(r.certificate.min_tube_clearance == doctest::Approx(0.2));
  check_certified(r, f, params);
}

TEST_CASE("inputs outside the contract are rejected") {
  const auto m = make_interval(0.0, 1.0, 11);
  const SmoothingParams params;
  CHECK_THROWS_AS(smooth_approx(ScalarField(m, std::vector<double>(11, 0.0)), params), ValidationError);
  std::vector<double> steep(11);
  for (std::size_t i = 0; i < 11; ++i) steep[i] = 1.0 + 0.1 * static_cast<double>(i);
  CHECK_THROWS_AS(smooth_approx(ScalarField(m, steep), params), ValidationError);
}

TEST_CASE("line: one pass against a quadrature oracle") {
  const double h = 1e-3;
  const auto m = make_interval(0.0, 4.0, 4001);
  const SmoothingParams params;
  const auto d = distance_field(m);
  const auto f = truncate_distance(d, params);
  std::vector<double> widths(f.size()), once(f.size());
  for (std::size_t v = 0; v < f.size(); ++v) widths[v] = params.kernel_width_fraction * f[v];
  kernels::mollify_pass(m->graph(), f.values(), widths, once);
  auto fc = [&](double t) { return 2.0 / 3.0 * std::max(t, params.r_ball); };
  double worst = 0.0;
  for (std::size_t v = 0; v < f.size(); v += 7) {
    const double t = m->chart(static_cast<VertexId>(v))[0];
    const double w = widths[v];
    if (t < w + h || t > 4.0 - w - h) continue;
    auto kernel = [&](double s) { return kernels::bump((s - t) / w); };
    const double num = test::integrate([&](double s) { return kernel(s) * fc(s); }, t - w, t + w, 1e-14);
    const double den = test::integrate(kernel, t - w, t + w, 1e-14);
    worst = std::max(worst, std::abs(once[v] - num / den));
  }
  CHECK(worst <= 5e-6);

  const auto r = smooth_approx(f, params);
  check_certified(r, f, params);
  CHECK(r.certificate.measured_lipschitz <= 0.70);
  CHECK(r.certificate.kernel_passes >= 1);
  // the kink at D = r_ball is rounded off
  const VertexId kink = 200;
  CHECK(r.phi[kink] > f[kink]);
}

TEST_CASE("circle of circumference 2: smooth across the cut point") {
  const auto m = make_circle(2.0, 10000);
  const SmoothingParams params;
  const auto d = distance_field(m);
  const auto f = truncate_distance(d, params);
  const auto r = smooth_approx(f, params);
  check_certified(r, f, params);
  for (VertexId v = 4900; v <= 5100; ++v) CHECK(std::abs(r.phi[v] - f[v]) <= f[v] / 8.0);
  // the kink is gone: phi lies strictly below f at the cut point
  CHECK(r.phi[5000] < f[5000]);
  CHECK(verify_tube(r.phi, f, d, params).passed());
}

TEST_CASE("random 1-D metrics certify") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(0.005, 0.2);
  const SmoothingParams params;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> lengths(150 + trial);
    for (auto& l : lengths) l = u(rng);
    const auto m = test::curve_from_lengths(lengths, static_cast<VertexId>(trial % 50));
    const auto d = distance_field(m);
    const auto f = truncate_distance(d, params);
    const auto r = smooth_approx(f, params);
    check_certified(r, f, params);
    double lo = 10, hi = 0;
    for (std::size_t v = 0; v < f.size(); ++v) {
      lo = std::min(lo, r.phi[v] / f[v]);
      hi = std::max(hi, r.phi[v] / f[v]);
    }
    CHECK(lo > 0.75);
    CHECK(hi < 1.5);
    CHECK(verify_tube(r.phi, f, d, params).passed());
  }
}

TEST_CASE("second differences stay bounded under refinement") {
  const SmoothingParams params;
  double previous = 0.0;
  for (const std::size_t samples : {401u, 801u, 1601u}) {
    const auto m = make_interval(0.0, 4.0, samples);
    const auto f = truncate_distance(distance_field(m), params);
    const auto r = smooth_approx(f, params);
    const double h = m->mesh_scale();
    double worst = 0.0;
    for (std::size_t v = 1; v + 1 < samples; ++v)
      worst = std::max(worst, std::abs(r.phi[v + 1] - 2 * r.phi[v] + r.phi[v - 1]) / (h * h));
    MESSAGE("max second difference at h = " << h << ": " << worst);
    if (previous > 0.0) CHECK(worst <= 2.0 * previous);
    previous = worst;
  }
}

TEST_CASE("verify_tube examples") {
  const auto m = make_interval(0.0, 2.0, 21);
  const SmoothingParams params;
  const auto d = distance_field(m);
  const auto f = truncate_distance(d, params);
  CHECK(verify_tube(f, f, d, params).passed());
  std::vector<double> low(f.size());
  for (std::size_t v = 0; v < f.size(); ++v) low[v] = 0.75 * f[v];
  const auto report = verify_tube(ScalarField(m, low), f, d, params);
  CHECK(report.tube_violations.size() == f.size());
  CHECK_FALSE(report.passed());
  // phi = D violates the derived bound outside the ball but not the tube
  const auto at_d = verify_tube(ScalarField(m, {d.values().begin(), d.values().end()}), f, d, params);
  CHECK_FALSE(at_d.distance_violations.empty());
}

TEST_CASE("zero margin cannot certify") {
  const auto m = make_interval(0.0, 2.0, 201);
  SmoothingParams params;
  const auto f = truncate_distance(distance_field(m), params);
  params.tube_margin = 0.0;
  CHECK_THROWS_AS(smooth_approx(f, params), ValidationError);
}
