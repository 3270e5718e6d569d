#include "proper_lift/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <utility>

#include "proper_lift/distance.hpp"

namespace proper_lift::kernels {

double bump(double s) {
  const double s2 = s * s;
  if (s2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s2));
}

namespace {

// Reusable truncated Dijkstra; one instance per thread.
class LocalSweep {
 public:
  explicit LocalSweep(std::size_t n) : dist_(n, kUnreached) {}

  // Calls visit(u, d) for every vertex with d(source, u) < radius, in settle order.
  template <typename Visit>
  void run(const WeightedGraph& g, VertexId source, double radius, Visit&& visit) {
    dist_[source] = 0.0;
    touched_.push_back(source);
    heap_.emplace(0.0, source);
    while (!heap_.empty()) {
      const auto [d, v] = heap_.top();
      heap_.pop();
      if (d > dist_[v]) continue;
      visit(v, d);
      for (auto k = g.offsets[v]; k < g.offsets[v + 1]; ++k) {
        const VertexId w = g.neighbors[k];
        const double nd = d + g.lengths[g.edge_ids[k]];
        if (nd < radius && nd < dist_[w]) {
          if (dist_[w] == kUnreached) touched_.push_back(w);
          dist_[w] = nd;
          heap_.emplace(nd, w);
        }
      }
    }
    for (const VertexId v : touched_) dist_[v] = kUnreached;
    touched_.clear();
  }

 private:
  std::vector<double> dist_;
  std::vector<VertexId> touched_;
  using Entry = std::pair<double, VertexId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap_;
};

double project_to_segment(std::span<const double> a, std::span<const double> b, std::span<const double> y) {
  double ab2 = 0.0, ay_ab = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = b[i] - a[i];
    ab2 += d * d;
    ay_ab += (y[i] - a[i]) * d;
  }
  const double lambda = ab2 > 0.0 ? std::clamp(ay_ab / ab2, 0.0, 1.0) : 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double p = a[i] + lambda * (b[i] - a[i]) - y[i];
    s += p * p;
  }
  return std::sqrt(s);
}

}  // namespace

void mollify_pass(const WeightedGraph& g, std::span<const double> in, std::span<const double> widths,
                  std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(g.vertex_count());
#pragma omp parallel
  {
    LocalSweep sweep(g.vertex_count());
#pragma omp for schedule(dynamic, 64)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto v = static_cast<VertexId>(i);
      const double w = widths[v];
      if (!(w > 0.0)) {
        out[v] = in[v];
        continue;
      }
      double num = 0.0, den = 0.0;
      sweep.run(g, v, w, [&](VertexId u, double d) {
        const double k = bump(d / w);
        num += k * in[u];
        den += k;
      });
      out[v] = num / den;
    }
  }
}

double edge_lipschitz(const WeightedGraph& g, std::span<const double> values) {
  double best = 0.0;
  const auto m = static_cast<std::ptrdiff_t>(g.edge_count());
#pragma omp parallel for reduction(max : best) schedule(static)
  for (std::ptrdiff_t e = 0; e < m; ++e) {
    const auto& ed = g.edges[e];
    best = std::max(best, std::abs(values[ed.u] - values[ed.v]) / g.lengths[e]);
  }
  return best;
}

std::vector<double> all_pairs_distances(const WeightedGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<double> out(n * n);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(n); ++s) {
    const auto row = shortest_path_lengths(g, static_cast<VertexId>(s));
    std::copy(row.begin(), row.end(), out.begin() + s * static_cast<std::ptrdiff_t>(n));
  }
  return out;
}

double pair_lipschitz(std::span<const double> values, std::span<const double> all_pairs) {
  const auto n = static_cast<std::ptrdiff_t>(values.size());
  double best = 0.0;
#pragma omp parallel for reduction(max : best) schedule(dynamic, 16)
  for (std::ptrdiff_t u = 0; u < n; ++u)
    for (std::ptrdiff_t v = u + 1; v < n; ++v) {
      const double d = all_pairs[u * n + v];
      if (d > 0.0 && d != kUnreached) best = std::max(best, std::abs(values[u] - values[v]) / d);
    }
  return best;
}

double stress_gradient(const WeightedGraph& g, std::span<const double> target_sq, std::span<const double> x, int dim,
                       std::span<double> grad) {
  const auto ne = static_cast<std::ptrdiff_t>(g.edge_count());
  const auto nv = static_cast<std::ptrdiff_t>(g.vertex_count());
  std::vector<double> residual(g.edge_count());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t e = 0; e < ne; ++e) {
    const auto& ed = g.edges[e];
    double d2 = 0.0;
    for (int k = 0; k < dim; ++k) {
      const double d = x[ed.u * dim + k] - x[ed.v * dim + k];
      d2 += d * d;
    }
    residual[e] = d2 - target_sq[e];
  }
  // gather: each vertex sums its incident edges in neighbor-id order
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t v = 0; v < nv; ++v) {
    for (int k = 0; k < dim; ++k) grad[v * dim + k] = 0.0;
    for (auto i = g.offsets[v]; i < g.offsets[v + 1]; ++i) {
      const VertexId w = g.neighbors[i];
      const double r = 4.0 * residual[g.edge_ids[i]];
      for (int k = 0; k < dim; ++k) grad[v * dim + k] += r * (x[v * dim + k] - x[w * dim + k]);
    }
  }
  double s = 0.0;
  for (const double r : residual) s += r * r;
  return s;
}

double stress_value(const WeightedGraph& g, std::span<const double> target_sq, std::span<const double> x, int dim) {
  const auto ne = static_cast<std::ptrdiff_t>(g.edge_count());
  std::vector<double> term(g.edge_count());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t e = 0; e < ne; ++e) {
    const auto& ed = g.edges[e];
    double d2 = 0.0;
    for (int k = 0; k < dim; ++k) {
      const double d = x[ed.u * dim + k] - x[ed.v * dim + k];
      d2 += d * d;
    }
    const double r = d2 - target_sq[e];
    term[e] = r * r;
  }
  double s = 0.0;
  for (const double t : term) s += t;
  return s;
}

std::vector<double> polyline_distances(std::span<const double> coords, int dim, std::span<const VertexId> order,
                                       bool closed, std::span<const double> y) {
  const std::size_t segments = closed ? order.size() : order.size() - 1;
  std::vector<double> out(segments);
  const auto d = static_cast<std::size_t>(dim);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(segments); ++i) {
    const VertexId a = order[i];
    const VertexId b = order[(static_cast<std::size_t>(i) + 1) % order.size()];
    out[i] = project_to_segment(coords.subspan(a * d, d), coords.subspan(b * d, d), y);
  }
  return out;
}

namespace serial {

void mollify_pass(const WeightedGraph& g, std::span<const double> in, std::span<const double> widths,
                  std::span<double> out) {
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const double w = widths[v];
    if (!(w > 0.0)) {
      out[v] = in[v];
      continue;
    }
    const auto dist = shortest_path_lengths(g, v);
    double num = 0.0, den = 0.0;
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
      if (!(dist[u] < w)) continue;
      const double k = bump(dist[u] / w);
      num += k * in[u];
      den += k;
    }
    out[v] = num / den;
  }
}

double edge_lipschitz(const WeightedGraph& g, std::span<const double> values) {
  double best = 0.0;
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    best = std::max(best, std::abs(values[g.edges[e].u] - values[g.edges[e].v]) / g.lengths[e]);
  return best;
}

std::vector<double> all_pairs_distances(const WeightedGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<double> out;
  out.reserve(n * n);
  for (VertexId s = 0; s < n; ++s) {
    const auto row = shortest_path_lengths(g, s);
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

double stress_gradient(const WeightedGraph& g, std::span<const double> target_sq, std::span<const double> x, int dim,
                       std::span<double> grad) {
  std::fill(grad.begin(), grad.end(), 0.0);
  double s = 0.0;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& ed = g.edges[e];
    double d2 = 0.0;
    for (int k = 0; k < dim; ++k) {
      const double d = x[ed.u * dim + k] - x[ed.v * dim + k];
      d2 += d * d;
    }
    const double r = d2 - target_sq[e];
    s += r * r;
    for (int k = 0; k < dim; ++k) {
      const double c = 4.0 * r * (x[ed.u * dim + k] - x[ed.v * dim + k]);
      grad[ed.u * dim + k] += c;
      grad[ed.v * dim + k] -= c;
    }
  }
  return s;
}

}  // namespace serial

}  // namespace proper_lift::kernels
