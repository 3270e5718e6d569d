#include "proper_lift/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "proper_lift/errors.hpp"
#include "proper_lift/kernels.hpp"

namespace proper_lift {

void SmoothingParams::validate() const {
  if (!(r_ball > 0.0 && r_ball < 0.25)) throw ValidationError("r_ball must lie in (0, 1/4)");
  if (!(r_slack > 0.0 && r_slack <= 1.0 / 12.0 + 1e-15)) throw ValidationError("r_slack must lie in (0, 1/12]");
  if (!(tube_margin > 0.0 && tube_margin < 1.0)) throw ValidationError("tube_margin must lie in (0, 1)");
  if (!(kernel_width_fraction > 0.0)) throw ValidationError("kernel_width_fraction must be positive");
  if (!(max_kernel_width > 0.0)) throw ValidationError("max_kernel_width must be positive");
  if (max_passes < 0) throw ValidationError("max_passes must be non-negative");
}

double SmoothingParams::lipschitz_target() const { return std::min(2.0 / 3.0 + r_slack, 0.75); }

LipschitzGauge::LipschitzGauge(const ManifoldPtr& m, std::size_t pair_limit) : manifold_(m) {
  if (m->vertex_count() <= pair_limit && m->vertex_count() > 1) all_pairs_ = kernels::all_pairs_distances(m->graph());
}

double LipschitzGauge::pairwise(std::span<const double> values) const {
  if (manifold_->vertex_count() < 2) return 0.0;
  const double edges = kernels::edge_lipschitz(manifold_->graph(), values);
  if (all_pairs_.empty()) return edges;
  return std::max(edges, kernels::pair_lipschitz(values, all_pairs_));
}

double LipschitzGauge::cell_gradient(std::span<const double> values) const {
  const auto& m = *manifold_;
  if (m.dimension() != 2) return 0.0;
  const auto cells = static_cast<std::ptrdiff_t>(m.cell_count());
  double worst = 0.0;
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (std::ptrdiff_t i = 0; i < cells; ++i) {
    const auto c = static_cast<CellId>(i);
    const auto vs = m.cell(c);
    const auto e1 = m.corner_delta(c, 0, 1);
    const auto e2 = m.corner_delta(c, 0, 2);
    const double b1 = values[vs[1]] - values[vs[0]];
    const double b2 = values[vs[2]] - values[vs[0]];
    const double det = e1[0] * e2[1] - e1[1] * e2[0];
    const double w0 = (b1 * e2[1] - e1[1] * b2) / det;
    const double w1 = (e1[0] * b2 - e2[0] * b1) / det;
    const auto& g = m.cell_metric(c);
    const double gdet = g.xx * g.yy - g.xy * g.xy;
    const double norm2 = (g.yy * w0 * w0 - 2.0 * g.xy * w0 * w1 + g.xx * w1 * w1) / gdet;
    worst = std::max(worst, std::sqrt(norm2));
  }
  return worst;
}

double LipschitzGauge::operator()(std::span<const double> values) const {
  return std::max(pairwise(values), cell_gradient(values));
}

double lipschitz_number(const ScalarField& field) { return LipschitzGauge(field.manifold())(field.values()); }

ScalarField truncate_distance(const ScalarField& distance, const SmoothingParams& params) {
  if (!(params.r_ball > 0.0 && params.r_ball < 0.25)) throw ValidationError("r_ball must lie in (0, 1/4)");
  std::vector<double> f(distance.size());
  for (std::size_t v = 0; v < f.size(); ++v) f[v] = std::max(distance[v], params.r_ball) * 2.0 / 3.0;
  return ScalarField(distance.manifold(), std::move(f));
}

std::pair<ScalarField, ScalarField> tube_bounds(const ScalarField& f) {
  std::vector<double> lo(f.size()), hi(f.size());
  for (std::size_t v = 0; v < f.size(); ++v) {
    if (!(f[v] > 0.0)) throw ValidationError("tube bounds need a positive field, vertex " + std::to_string(v));
    lo[v] = 0.75 * f[v];
    hi[v] = 1.5 * f[v];
  }
  return {ScalarField(f.manifold(), std::move(lo)), ScalarField(f.manifold(), std::move(hi))};
}

SmoothingCertificate certify_smoothing(std::span<const double> phi, std::span<const double> f,
                                       const SmoothingParams& params, const LipschitzGauge& gauge) {
  SmoothingCertificate cert;
  cert.lipschitz_target = params.lipschitz_target();
  cert.measured_lipschitz = gauge(phi);
  cert.min_tube_clearance = std::numeric_limits<double>::infinity();
  for (VertexId v = 0; v < phi.size(); ++v) {
    const double clearance = std::min(phi[v] - 0.75 * f[v], 1.5 * f[v] - phi[v]);
    const double required = params.tube_margin * f[v] / 8.0;
    cert.min_tube_clearance = std::min(cert.min_tube_clearance, clearance);
    if (!(clearance >= required) || !(clearance > 0.0)) {
      cert.max_tube_violation = std::max(cert.max_tube_violation, std::max(required - clearance, 0.0));
      if (cert.max_tube_violation == 0.0) cert.max_tube_violation = std::numeric_limits<double>::min();
      cert.violating_vertices.push_back(v);
    }
  }
  return cert;
}

SmoothingResult smooth_approx(const ScalarField& f, const SmoothingParams& params) {
  params.validate();
  const auto& m = f.manifold();
  const auto fv = f.values();
  for (VertexId v = 0; v < fv.size(); ++v)
    if (!(fv[v] > 0.0)) throw ValidationError("smooth_approx needs f > 0, vertex " + std::to_string(v));
  const LipschitzGauge gauge(m);
  if (gauge.pairwise(fv) > 2.0 / 3.0 * (1.0 + 1e-9)) throw ValidationError("smooth_approx needs a 2/3-Lipschitz input");

  const std::size_t n = fv.size();
  std::vector<double> widths(n), lo(n), hi(n);
  for (std::size_t v = 0; v < n; ++v) {
    widths[v] = std::min(params.kernel_width_fraction * fv[v], params.max_kernel_width);
    const double rho = params.tube_margin * fv[v] / 4.0;
    lo[v] = fv[v] - rho;
    hi[v] = fv[v] + rho;
  }

  std::vector<double> phi(fv.begin(), fv.end());
  std::vector<double> mollified(n), candidate(n);
  SmoothingCertificate cert = certify_smoothing(phi, fv, params, gauge);
  int accepted = 0;
  for (int pass = 0; pass < params.max_passes; ++pass) {
    kernels::mollify_pass(m->graph(), phi, widths, mollified);
    for (std::size_t v = 0; v < n; ++v) mollified[v] = std::clamp(mollified[v], lo[v], hi[v]);
    bool taken = false;
    SmoothingCertificate first_try;
    for (double step = 1.0; step >= 1.0 / 64.0; step *= 0.5) {
      for (std::size_t v = 0; v < n; ++v)
        candidate[v] = step == 1.0 ? mollified[v] : phi[v] + step * (mollified[v] - phi[v]);
      auto c = certify_smoothing(candidate, fv, params, gauge);
      if (step == 1.0) first_try = c;
      if (c.valid()) {
        phi.swap(candidate);
        cert = std::move(c);
        taken = true;
        break;
      }
    }
    if (!taken) {
      if (accepted == 0) {
        // report the failing unit step
        for (std::size_t v = 0; v < n; ++v) candidate[v] = mollified[v];
        first_try.kernel_passes = 0;
        return {ScalarField(m, std::move(candidate)), std::move(first_try)};
      }
      break;
    }
    ++accepted;
  }
  cert.kernel_passes = accepted;
  return {ScalarField(m, std::move(phi)), std::move(cert)};
}

TubeReport verify_tube(const ScalarField& phi, const ScalarField& f, const ScalarField& distance,
                       const SmoothingParams& params) {
  require_same_manifold(phi.manifold(), f.manifold(), "verify_tube");
  require_same_manifold(phi.manifold(), distance.manifold(), "verify_tube");
  TubeReport report;
  for (VertexId v = 0; v < phi.size(); ++v) {
    if (!(0.75 * f[v] < phi[v] && phi[v] < 1.5 * f[v])) report.tube_violations.push_back(v);
    if (distance[v] > params.r_ball && !(0.5 * distance[v] < phi[v] && phi[v] < distance[v]))
      report.distance_violations.push_back(v);
  }
  return report;
}

}  // namespace proper_lift
