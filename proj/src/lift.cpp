#include "proper_lift/lift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "proper_lift/errors.hpp"
#include "proper_lift/kernels.hpp"

namespace proper_lift {

EmbeddingMap lift(const EmbeddingMap& et, const ScalarField& phi) {
  require_same_manifold(et.manifold(), phi.manifold(), "lift");
  const int m = et.ambient_dim();
  const std::size_t n = phi.size();
  if (et.vertex_count() != n) throw ValidationError("lift: vertex count mismatch");
  std::vector<double> x(n * (m + 1));
  for (std::size_t v = 0; v < n; ++v) {
    const auto p = et.point(v);
    std::copy(p.begin(), p.end(), x.begin() + v * (m + 1));
    x[v * (m + 1) + m] = 0.5 * phi[v];
  }
  return EmbeddingMap(et.manifold(), m + 1, std::move(x));
}

DistortionReport pullback_check(const EmbeddingMap& e, const MetricField& g) { return distortion(e, g); }

DistortionReport pullback_check(const EmbeddingMap& e) {
  const auto len = reference_edge_lengths(*e.manifold());
  return distortion(e, len);
}

EscapeReport escape_bound_check(const EmbeddingMap& e, const ScalarField& distance, const SmoothingParams& params) {
  require_same_manifold(e.manifold(), distance.manifold(), "escape_bound_check");
  EscapeReport report;
  report.min_slack = std::numeric_limits<double>::infinity();
  const int last = e.ambient_dim() - 1;
  for (VertexId v = 0; v < distance.size(); ++v) {
    if (!(distance[v] > params.r_ball)) continue;
    ++report.checked;
    const double slack = e.point(v)[last] - distance[v] / 4.0;
    report.min_slack = std::min(report.min_slack, slack);
    if (!(slack > 0.0)) report.violations.push_back(v);
  }
  return report;
}

PropernessCertificate properness_certificate(const EmbeddingMap& e, const ScalarField& distance,
                                             std::span<const double> q, const SmoothingParams& params) {
  require_same_manifold(e.manifold(), distance.manifold(), "properness_certificate");
  const int dim = e.ambient_dim();
  if (q.size() != static_cast<std::size_t>(dim))
    throw ValidationError("properness_certificate: query has " + std::to_string(q.size()) + " coordinates, expected " +
                          std::to_string(dim));
  PropernessCertificate cert;
  cert.query.assign(q.begin(), q.end());
  cert.Q = q.back();
  if (!(cert.Q > 0.0))
    throw UnsupportedQuery("properness_certificate: only queries with positive last coordinate are covered");
  cert.far_radius = std::max(8.0 * cert.Q, params.r_ball);
  cert.mesh_scale = e.manifold()->mesh_scale();
  cert.near_min = std::numeric_limits<double>::infinity();

  bool far_ok = true;
  for (VertexId v = 0; v < distance.size(); ++v) {
    const auto p = e.point(v);
    if (distance[v] > cert.far_radius) {
      ++cert.far_count;
      // last > D/4 > 2Q puts the point at height distance >= Q from q
      if (!(p[dim - 1] > distance[v] / 4.0)) far_ok = false;
      continue;
    }
    ++cert.near_count;
    double d2 = 0.0;
    for (int k = 0; k < dim; ++k) d2 += (p[k] - q[k]) * (p[k] - q[k]);
    cert.near_min = std::min(cert.near_min, std::sqrt(d2));
  }
  if (cert.near_min <= 1e-9) throw ValidationError("properness_certificate: query lies on the image");
  cert.far_bound = far_ok ? cert.Q : 0.0;
  cert.verdict = std::min(cert.far_bound, cert.near_min) > 0.0;
  return cert;
}

namespace {

std::optional<NonPropernessWitness> scan(const std::vector<double>& dist, const std::vector<double>& t_of_segment,
                                         std::size_t segments, std::span<const double> y, double horizon,
                                         const WitnessParams& params, std::optional<std::size_t> own_segment) {
  const double c = params.threshold_constant;
  const double block = horizon / 1024.0;
  NonPropernessWitness w;
  w.target.assign(y.begin(), y.end());
  w.threshold_constant = c;
  double record = std::numeric_limits<double>::infinity();
  auto inside = [&](std::size_t j) { return dist[j] < c / (1.0 + t_of_segment[j]); };
  std::size_t i = 0;
  while (i < segments) {
    if (!inside(i)) {
      ++i;
      continue;
    }
    std::size_t end = i;
    bool own = false;
    while (end < segments && inside(end)) {
      if (own_segment && (end == *own_segment || end + 1 == *own_segment)) own = true;
      ++end;
    }
    // one candidate per parameter block of the visit
    std::size_t j = i;
    while (!own && j < end) {
      const double key = std::floor(t_of_segment[j] / block);
      double best = std::numeric_limits<double>::infinity();
      double best_t = 0.0;
      for (; j < end && std::floor(t_of_segment[j] / block) == key; ++j) {
        if (dist[j] < best) {
          best = dist[j];
          best_t = t_of_segment[j];
        }
      }
      if (best < record) {
        record = best;
        w.samples.push_back({best_t, best});
      }
    }
    i = end;
  }
  if (w.samples.size() < params.min_records) return std::nullopt;
  if (w.samples.back().t < 0.5 * horizon) return std::nullopt;
  return w;
}

}  // namespace

std::optional<NonPropernessWitness> non_properness_witness(const EmbeddingMap& e, const WitnessParams& params) {
  const auto& m = e.manifold();
  if (m->dimension() != 1) throw ValidationError("non_properness_witness needs a 1-D manifold");
  const auto walk = walk_curve(*m);
  if (walk.closed) throw ValidationError("non_properness_witness needs an open curve");
  const int dim = e.ambient_dim();
  const double horizon = params.horizon > 0.0 ? params.horizon : m->chart(walk.order.back())[0];

  // segments with both ends inside [.., T]
  std::vector<VertexId> order;
  for (const auto v : walk.order) {
    if (m->chart(v)[0] > horizon) break;
    order.push_back(v);
  }
  if (order.size() < 2) return std::nullopt;
  const std::size_t segments = order.size() - 1;
  std::vector<double> t_of_segment(segments);
  for (std::size_t i = 0; i < segments; ++i) t_of_segment[i] = m->chart(order[i])[0];

  auto norm = [](std::span<const double> p) {
    double s = 0.0;
    for (const double x : p) s += x * x;
    return std::sqrt(s);
  };

  for (const auto& y : params.targets) {
    if (y.size() != static_cast<std::size_t>(dim)) throw ValidationError("witness target has the wrong dimension");
    if (norm(y) > params.radius) continue;
    const auto dist = kernels::polyline_distances(e.coordinates(), dim, order, false, y);
    if (auto w = scan(dist, t_of_segment, segments, y, horizon, params, std::nullopt)) return w;
  }

  if (params.tail_candidates == 0) return std::nullopt;
  const double t_lo = 0.9 * horizon;
  std::size_t first = 0;
  while (first < order.size() && m->chart(order[first])[0] < t_lo) ++first;
  const std::size_t tail = order.size() - first;
  if (tail == 0) return std::nullopt;
  const std::size_t count = std::min(params.tail_candidates, tail);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t idx = first + (count == 1 ? 0 : k * (tail - 1) / (count - 1));
    const auto p = e.point(order[idx]);
    if (norm(p) > params.radius) continue;
    const std::vector<double> y(p.begin(), p.end());
    const auto dist = kernels::polyline_distances(e.coordinates(), dim, order, false, y);
    if (auto w = scan(dist, t_of_segment, segments, y, horizon, params, idx)) return w;
  }
  return std::nullopt;
}

}  // namespace proper_lift
