#include "proper_lift/surgery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "proper_lift/errors.hpp"

namespace proper_lift {

CovectorField differential(const ScalarField& phi) {
  const auto& m = phi.manifold();
  const auto cells = static_cast<std::ptrdiff_t>(m->cell_count());
  std::vector<std::array<double, 2>> w(m->cell_count(), {0.0, 0.0});
  bool degenerate = false;
#pragma omp parallel for schedule(static) reduction(|| : degenerate)
  for (std::ptrdiff_t i = 0; i < cells; ++i) {
    const auto c = static_cast<CellId>(i);
    const auto vs = m->cell(c);
    if (m->dimension() == 1) {
      const double dt = m->corner_delta(c, 0, 1)[0];
      if (dt == 0.0) {
        degenerate = true;
        continue;
      }
      w[i] = {(phi[vs[1]] - phi[vs[0]]) / dt, 0.0};
    } else {
      const auto e1 = m->corner_delta(c, 0, 1);
      const auto e2 = m->corner_delta(c, 0, 2);
      const double b1 = phi[vs[1]] - phi[vs[0]];
      const double b2 = phi[vs[2]] - phi[vs[0]];
      const double det = e1[0] * e2[1] - e1[1] * e2[0];
      if (det == 0.0) {
        degenerate = true;
        continue;
      }
      w[i] = {(b1 * e2[1] - e1[1] * b2) / det, (e1[0] * b2 - e2[0] * b1) / det};
    }
  }
  if (degenerate) throw ValidationError("differential: degenerate cell");
  return CovectorField(m, std::move(w));
}

namespace {

double dual_norm_sq(int n, const Sym2& g, const std::array<double, 2>& w) {
  if (n == 1) return w[0] * w[0] / g.xx;
  const double det = g.xx * g.yy - g.xy * g.xy;
  return (g.yy * w[0] * w[0] - 2.0 * g.xy * w[0] * w[1] + g.xx * w[1] * w[1]) / det;
}

bool singular(int n, const Sym2& g) {
  if (n == 1) return !(g.xx > 0.0);
  return !(g.xx * g.yy - g.xy * g.xy > 0.0) || !(g.xx > 0.0);
}

}  // namespace

std::vector<double> covector_norm(const CovectorField& w, const MetricField& g) {
  require_same_manifold(w.manifold(), g.manifold(), "covector_norm");
  const int n = g.manifold()->dimension();
  std::vector<double> out(g.size());
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (singular(n, g[c])) throw SurgeryError("covector_norm: singular metric on cell " + std::to_string(c));
    out[c] = std::sqrt(dual_norm_sq(n, g[c], w[c]));
  }
  return out;
}

MetricField modify_metric(const MetricField& g, const CovectorField& w) {
  require_same_manifold(w.manifold(), g.manifold(), "modify_metric");
  const int n = g.manifold()->dimension();
  const auto norms = covector_norm(w, g);
  for (std::size_t c = 0; c < norms.size(); ++c)
    if (!(norms[c] < 1.0))
      throw SurgeryError("modify_metric: covector norm " + std::to_string(norms[c]) + " >= 1 on cell " +
                         std::to_string(c));
  std::vector<Sym2> out(g.size());
  const auto cells = static_cast<std::ptrdiff_t>(g.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < cells; ++c) {
    const auto& a = g[c];
    const auto& wc = w[c];
    if (n == 1) {
      out[c] = Sym2{a.xx - 0.25 * wc[0] * wc[0], 0.0, 1.0};
    } else {
      out[c] = Sym2{a.xx - 0.25 * wc[0] * wc[0], a.xy - 0.25 * wc[0] * wc[1], a.yy - 0.25 * wc[1] * wc[1]};
    }
  }
  return MetricField(g.manifold(), std::move(out));
}

double min_eigenvalue(int dimension, const Sym2& a) {
  if (dimension == 1) return a.xx;
  return 0.5 * (a.xx + a.yy) - std::hypot(0.5 * (a.xx - a.yy), a.xy);
}

double min_generalized_eigenvalue(int dimension, const Sym2& a, const Sym2& b) {
  if (dimension == 1) return a.xx / b.xx;
  // reduce with the Cholesky factor of b: C = L^{-1} a L^{-T}
  const double l11 = std::sqrt(b.xx);
  const double l21 = b.xy / l11;
  const double l22 = std::sqrt(b.yy - l21 * l21);
  // rows of L^{-1}
  const double i11 = 1.0 / l11;
  const double i21 = -l21 / (l11 * l22);
  const double i22 = 1.0 / l22;
  // M = L^{-1} a
  const double m11 = i11 * a.xx;
  const double m12 = i11 * a.xy;
  const double m21 = i21 * a.xx + i22 * a.xy;
  const double m22 = i21 * a.xy + i22 * a.yy;
  // C = M L^{-T}
  const Sym2 c{m11 * i11, m12 * i22 + m11 * i21, m21 * i21 + m22 * i22};
  return min_eigenvalue(2, c);
}

SpdReport spd_check(const MetricField& gt, const MetricField& g) {
  require_same_manifold(gt.manifold(), g.manifold(), "spd_check");
  const int n = g.manifold()->dimension();
  SpdReport report;
  report.min_eigenvalue = std::numeric_limits<double>::infinity();
  report.min_generalized_eigenvalue = std::numeric_limits<double>::infinity();
  report.generalized_eigenvalues.resize(g.size());
  for (CellId c = 0; c < g.size(); ++c) {
    const double eig = min_eigenvalue(n, gt[c]);
    const double gen = min_generalized_eigenvalue(n, gt[c], g[c]);
    report.generalized_eigenvalues[c] = gen;
    report.min_eigenvalue = std::min(report.min_eigenvalue, eig);
    report.min_generalized_eigenvalue = std::min(report.min_generalized_eigenvalue, gen);
    if (!(eig > 0.0) || !(gen >= report.bound - report.tolerance)) report.failing_cells.push_back(c);
  }
  return report;
}

double reconstruction_residual(const MetricField& gt, const MetricField& g, const CovectorField& w) {
  const int n = g.manifold()->dimension();
  double worst = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    const auto& a = g[c];
    const auto& b = gt[c];
    const auto& x = w[c];
    double scale = std::abs(a.xx);
    double err = std::abs(b.xx + 0.25 * x[0] * x[0] - a.xx);
    if (n == 2) {
      scale = std::max({scale, std::abs(a.xy), std::abs(a.yy)});
      err = std::max({err, std::abs(b.xy + 0.25 * x[0] * x[1] - a.xy), std::abs(b.yy + 0.25 * x[1] * x[1] - a.yy)});
    }
    worst = std::max(worst, err / scale);
  }
  return worst;
}

}  // namespace proper_lift
