#include "proper_lift/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "proper_lift/errors.hpp"
#include "proper_lift/kernels.hpp"

namespace proper_lift {

std::uint64_t nash_dimension(int n) {
  if (n < 1) throw ValidationError("nash_dimension needs n >= 1");
  const auto k = static_cast<std::uint64_t>(n);
  return k * (k + 1) * (3 * k + 11) / 2;
}

Provider parse_provider(const std::string& name) {
  if (name == "line") return Provider::Line;
  if (name == "spiral_to_circle") return Provider::SpiralToCircle;
  if (name == "spiral_to_point") return Provider::SpiralToPoint;
  if (name == "cyclic_polygon") return Provider::CyclicPolygon;
  if (name == "optimizer") return Provider::Optimizer;
  throw ValidationError("unknown embedding provider '" + name + "'");
}

std::string to_string(Provider p) {
  switch (p) {
    case Provider::Line: return "line";
    case Provider::SpiralToCircle: return "spiral_to_circle";
    case Provider::SpiralToPoint: return "spiral_to_point";
    case Provider::CyclicPolygon: return "cyclic_polygon";
    case Provider::Optimizer: return "optimizer";
  }
  return "?";
}

namespace {

EmbeddingMap embed_line(const ManifoldPtr& m, const CurveWalk& walk, std::span<const double> len, int dim) {
  if (walk.closed) throw EmbeddingError("line provider cannot embed a closed curve");
  std::vector<double> x(m->vertex_count() * dim, 0.0);
  double s = 0.0;
  x[walk.order[0] * dim] = 0.0;
  for (std::size_t i = 0; i < walk.edges.size(); ++i) {
    s += len[walk.edges[i]];
    x[walk.order[i + 1] * dim] = s;
  }
  return EmbeddingMap(m, dim, std::move(x));
}

EmbeddingMap embed_spiral(const ManifoldPtr& m, const CurveWalk& walk, std::span<const double> len, int dim,
                          double rho, bool to_circle) {
  if (walk.closed) throw EmbeddingError("spiral providers need an open curve");
  if (dim < 2) throw EmbeddingError("spiral providers need ambient dimension >= 2");
  if (!(rho > 0.0)) throw EmbeddingError("spiral limit radius must be positive");
  auto radius = [&](double t) {
    if (!(t > -1.0)) throw EmbeddingError("spiral parameter must exceed -1");
    return to_circle ? rho * (1.0 + 1.0 / (1.0 + t)) : rho / (1.0 + t);
  };
  std::vector<double> x(m->vertex_count() * dim, 0.0);
  long double theta = 0.0L;
  double r_prev = radius(m->chart(walk.order[0])[0]);
  x[walk.order[0] * dim] = r_prev;
  for (std::size_t i = 0; i < walk.edges.size(); ++i) {
    const VertexId v = walk.order[i + 1];
    const double r = radius(m->chart(v)[0]);
    const double l = len[walk.edges[i]];
    const double dr = r - r_prev;
    // chord^2 = dr^2 + 4 r r' sin^2(dtheta / 2)
    const double s2 = (l * l - dr * dr) / (4.0 * r * r_prev);
    if (!(s2 >= 0.0) || s2 > 1.0)
      throw EmbeddingError("spiral cannot realize edge " + std::to_string(i) + " of length " + std::to_string(l));
    theta += 2.0L * std::asin(std::sqrt(static_cast<long double>(s2)));
    x[v * dim] = static_cast<double>(r * std::cos(theta));
    x[v * dim + 1] = static_cast<double>(r * std::sin(theta));
    r_prev = r;
  }
  return EmbeddingMap(m, dim, std::move(x));
}

EmbeddingMap embed_cyclic(const ManifoldPtr& m, const CurveWalk& walk, std::span<const double> len, int dim) {
  if (!walk.closed) throw EmbeddingError("cyclic polygon provider needs a closed curve");
  if (dim < 2) throw EmbeddingError("cyclic polygon provider needs ambient dimension >= 2");
  std::vector<double> l;
  for (const auto e : walk.edges) l.push_back(len[e]);
  const double longest = *std::max_element(l.begin(), l.end());
  auto excess = [&](double r) {
    long double s = 0.0L;
    for (const double li : l) s += 2.0L * std::asin(std::min(1.0L, static_cast<long double>(li) / (2.0L * r)));
    return s - 2.0L * std::numbers::pi_v<long double>;
  };
  double lo = 0.5 * longest;
  double hi = std::accumulate(l.begin(), l.end(), 0.0);
  if (excess(lo) < 0.0L) throw EmbeddingError("no cyclic polygon with these edge lengths contains its centre");
  for (int it = 0; it < 200 && lo < hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (excess(mid) > 0.0L ? lo : hi) = mid;
  }
  const double r = 0.5 * (lo + hi);
  std::vector<double> x(m->vertex_count() * dim, 0.0);
  long double angle = 0.0L;
  for (std::size_t i = 0; i < walk.order.size(); ++i) {
    const VertexId v = walk.order[i];
    x[v * dim] = static_cast<double>(r * std::cos(angle));
    x[v * dim + 1] = static_cast<double>(r * std::sin(angle));
    angle += 2.0L * std::asin(std::min(1.0L, static_cast<long double>(l[i]) / (2.0L * r)));
  }
  return EmbeddingMap(m, dim, std::move(x));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_abs(std::span<const double> a) {
  double s = 0.0;
  for (const double v : a) s = std::max(s, std::abs(v));
  return s;
}

}  // namespace

EmbeddingMap embed_curve(const EmbedRequest& req) {
  const auto& m = req.metric.manifold();
  if (req.provider == Provider::Optimizer) return optimize_embedding(req).map;
  if (m->dimension() != 1) throw EmbeddingError("curve providers need a 1-D manifold");
  if (req.ambient_dim < 1) throw EmbeddingError("ambient dimension must be >= 1");
  const auto walk = walk_curve(*m);
  const auto len = edge_lengths(*m, req.metric.coefficients());
  switch (req.provider) {
    case Provider::Line: return embed_line(m, walk, len, req.ambient_dim);
    case Provider::SpiralToCircle: return embed_spiral(m, walk, len, req.ambient_dim, req.limit_radius, true);
    case Provider::SpiralToPoint: return embed_spiral(m, walk, len, req.ambient_dim, req.limit_radius, false);
    case Provider::CyclicPolygon: return embed_cyclic(m, walk, len, req.ambient_dim);
    case Provider::Optimizer: break;
  }
  throw EmbeddingError("unsupported provider");
}

OptimizeResult optimize_embedding(const EmbedRequest& req) {
  const auto& m = req.metric.manifold();
  const auto& opt = req.optimizer;
  const int dim = req.ambient_dim;
  if (m->vertex_count() > opt.vertex_limit)
    throw EmbeddingError("optimizer is limited to " + std::to_string(opt.vertex_limit) + " vertices");
  // m < n is allowed: the stress only sees the edge graph
  if (dim < 1) throw EmbeddingError("ambient dimension must be >= 1");
  const auto& g = m->graph();
  const auto len = edge_lengths(*m, req.metric.coefficients());
  std::vector<double> target_sq(len.size());
  for (std::size_t e = 0; e < len.size(); ++e) target_sq[e] = len[e] * len[e];
  const double mean_len = len.empty() ? 1.0 : std::accumulate(len.begin(), len.end(), 0.0) / len.size();

  const std::size_t n = m->vertex_count() * dim;
  std::vector<double> x(n);
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal;
  for (std::size_t v = 0; v < m->vertex_count(); ++v) {
    double norm = 0.0;
    while (!(norm > 0.0)) {
      norm = 0.0;
      for (int k = 0; k < dim; ++k) {
        x[v * dim + k] = normal(rng);
        norm += x[v * dim + k] * x[v * dim + k];
      }
      norm = std::sqrt(norm);
    }
    for (int k = 0; k < dim; ++k) x[v * dim + k] *= mean_len / norm;
  }

  std::vector<double> grad(n), trial(n), trial_grad(n), s(n), y(n);
  double stress = kernels::stress_gradient(g, target_sq, x, dim, grad);
  const double tol = opt.grad_tol * mean_len * mean_len * mean_len;
  double step = 0.0;
  OptimizeResult out{EmbeddingMap(m, dim, x), {}, {}};
  out.trace.push_back({0, stress, 0.0});
  bool converged = false;
  int it = 0;
  for (; it < opt.max_iters; ++it) {
    const double gmax = max_abs(grad);
    if (stress == 0.0 || gmax <= tol) {
      converged = true;
      break;
    }
    if (it == 0 || opt.step_rule == StepRule::Armijo) {
      step = it == 0 ? 0.1 * mean_len / gmax : step * 2.0;
    } else {
      const double sy = dot(s, y);
      step = sy > 0.0 ? dot(s, s) / sy : step * 2.0;
    }
    const double g2 = dot(grad, grad);
    double trial_stress = stress;
    bool accepted = false;
    for (int halving = 0; halving < 80; ++halving) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] - step * grad[i];
      trial_stress = kernels::stress_value(g, target_sq, trial, dim);
      if (trial_stress <= stress - 1e-4 * step * g2) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no representable descent left
    const double new_stress = kernels::stress_gradient(g, target_sq, trial, dim, trial_grad);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = trial[i] - x[i];
      y[i] = trial_grad[i] - grad[i];
    }
    x.swap(trial);
    grad.swap(trial_grad);
    stress = new_stress;
    out.trace.push_back({it + 1, stress, step});
  }
  out.map = EmbeddingMap(m, dim, std::move(x));
  out.report = distortion(out.map, len);
  out.report.converged = converged;
  out.report.iterations = it;
  return out;
}

DistortionReport distortion(const EmbeddingMap& x, std::span<const double> target) {
  const auto& m = x.manifold();
  const auto& g = m->graph();
  if (target.size() != g.edge_count()) throw ValidationError("distortion: target length count mismatch");
  DistortionReport r;
  double sum = 0.0;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (!(target[e] > 0.0)) throw ValidationError("distortion: zero-length target edge " + std::to_string(e));
    const auto a = x.point(g.edges[e].u);
    const auto b = x.point(g.edges[e].v);
    double d2 = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) d2 += (a[k] - b[k]) * (a[k] - b[k]);
    const double rel = std::abs(std::sqrt(d2) - target[e]) / target[e];
    r.max_rel_edge_error = std::max(r.max_rel_edge_error, rel);
    sum += rel;
    const double res = d2 - target[e] * target[e];
    r.stress += res * res;
  }
  r.mean_rel_edge_error = g.edge_count() ? sum / static_cast<double>(g.edge_count()) : 0.0;
  return r;
}

DistortionReport distortion(const EmbeddingMap& x, const MetricField& metric) {
  require_same_manifold(x.manifold(), metric.manifold(), "distortion");
  const auto len = edge_lengths(*x.manifold(), metric.coefficients());
  return distortion(x, len);
}

}  // namespace proper_lift
