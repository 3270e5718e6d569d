#include "proper_lift/distance.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <queue>
#include <utility>

#include "proper_lift/errors.hpp"

namespace proper_lift {

std::vector<double> shortest_path_lengths(const WeightedGraph& g, std::span<const double> initial) {
  using Entry = std::pair<double, VertexId>;
  std::vector<double> dist(initial.begin(), initial.end());
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (VertexId v = 0; v < dist.size(); ++v)
    if (dist[v] != kUnreached) heap.emplace(dist[v], v);
  std::vector<char> settled(dist.size(), 0);
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (settled[v] || d > dist[v]) continue;
    settled[v] = 1;
    for (auto k = g.offsets[v]; k < g.offsets[v + 1]; ++k) {
      const VertexId w = g.neighbors[k];
      const double nd = d + g.lengths[g.edge_ids[k]];
      if (nd < dist[w]) {
        dist[w] = nd;
        heap.emplace(nd, w);
      }
    }
  }
  return dist;
}

std::vector<double> shortest_path_lengths(const WeightedGraph& g, VertexId source) {
  std::vector<double> init(g.vertex_count(), kUnreached);
  init.at(source) = 0.0;
  return shortest_path_lengths(g, init);
}

namespace {

// Planar unfolding of triangle (a, b, c) with side lengths under the cell metric: the
// virtual source s sits across ab at distances (da, db); returns |s - c| when the
// straight ray s->c crosses ab, otherwise infinity.
double unfolded_distance(double lab, double lac, double lbc, double da, double db) {
  const double xc = (lac * lac - lbc * lbc + lab * lab) / (2.0 * lab);
  const double yc = std::sqrt(std::max(lac * lac - xc * xc, 0.0));
  const double xs = (da * da - db * db + lab * lab) / (2.0 * lab);
  const double ys2 = da * da - xs * xs;
  if (!(ys2 > 0.0) || !(yc > 0.0)) return kUnreached;
  const double ys = -std::sqrt(ys2);
  const double lambda = -ys / (yc - ys);
  const double xi = xs + lambda * (xc - xs);
  if (xi < 0.0 || xi > lab) return kUnreached;
  return std::hypot(xc - xs, yc - ys);
}

}  // namespace

ScalarField distance_field(const ManifoldPtr& m) {
  const auto& g = m->graph();
  auto dist = shortest_path_lengths(g, m->base_vertex());
  for (const double d : dist)
    if (d == kUnreached) throw ValidationError("distance field: unreachable vertex");

  if (m->dimension() == 2) {
    // per-cell side lengths under the cell metric
    std::vector<std::array<double, 3>> sides(m->cell_count());
    for (CellId c = 0; c < m->cell_count(); ++c)
      for (int k = 0; k < 3; ++k)
        sides[c][k] = metric_length(2, m->cell_metric(c), m->corner_delta(c, (k + 1) % 3, (k + 2) % 3));
    // unfolding rounds until nothing improves
    for (std::size_t round = 0; round <= m->vertex_count(); ++round) {
      std::vector<double> corrected = dist;
      for (CellId c = 0; c < m->cell_count(); ++c) {
        const auto vs = m->cell(c);
        for (int k = 0; k < 3; ++k) {
          const int a = (k + 1) % 3;
          const int b = (k + 2) % 3;
          const double cand = unfolded_distance(sides[c][k], sides[c][b], sides[c][a], dist[vs[a]], dist[vs[b]]);
          if (cand < corrected[vs[k]]) corrected[vs[k]] = cand;
        }
      }
      auto next = shortest_path_lengths(g, corrected);
      const bool settled = next == dist;
      dist = std::move(next);
      if (settled) break;
    }
  }
  return ScalarField(m, std::move(dist));
}

std::vector<VertexId> metric_ball(const ScalarField& distance, double radius) {
  std::vector<VertexId> out;
  const auto d = distance.values();
  for (VertexId v = 0; v < d.size(); ++v)
    if (d[v] <= radius) out.push_back(v);
  return out;
}

}  // namespace proper_lift
