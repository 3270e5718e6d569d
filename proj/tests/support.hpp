#pragma once

// Helpers shared by the unit tests: small manifolds, random graphs and independent
// numerical oracles.

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "proper_lift/geometry.hpp"

namespace test {

using namespace proper_lift;

/// Open curve with charts 0, 1, 2, ... and per-edge lengths `lengths`.
inline ManifoldPtr curve_from_lengths(const std::vector<double>& lengths, VertexId base = 0) {
  ManifoldData d;
  d.dimension = 1;
  for (std::size_t i = 0; i <= lengths.size(); ++i) d.charts.push_back(static_cast<double>(i));
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    d.cell_vertices.insert(d.cell_vertices.end(), {static_cast<VertexId>(i), static_cast<VertexId>(i + 1)});
    d.metric.push_back(Sym2{lengths[i] * lengths[i], 0.0, 1.0});
  }
  d.base_vertex = base;
  return SampledManifold::create(std::move(d));
}

/// Curve over explicit chart samples with metric coefficient g per edge.
inline ManifoldPtr curve_from_samples(const std::vector<double>& t, const std::vector<double>& g, VertexId base = 0) {
  ManifoldData d;
  d.dimension = 1;
  d.charts = t;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    d.cell_vertices.insert(d.cell_vertices.end(), {static_cast<VertexId>(i), static_cast<VertexId>(i + 1)});
    d.metric.push_back(Sym2{g[i], 0.0, 1.0});
  }
  d.base_vertex = base;
  return SampledManifold::create(std::move(d));
}

struct RandomGraph {
  std::size_t n = 0;
  std::vector<GraphEdge> edges;
  std::vector<double> lengths;
};

/// Connected random graph: a random spanning tree plus extra edges with probability p.
inline RandomGraph random_connected_graph(std::mt19937_64& rng, std::size_t n, double p) {
  RandomGraph g;
  g.n = n;
  std::uniform_real_distribution<double> len(0.1, 3.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<std::vector<bool>> has(n, std::vector<bool>(n, false));
  for (std::size_t v = 1; v < n; ++v) {
    const auto u = std::uniform_int_distribution<std::size_t>(0, v - 1)(rng);
    g.edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v)});
    has[u][v] = has[v][u] = true;
  }
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (!has[u][v] && coin(rng) < p) {
        g.edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v)});
        has[u][v] = has[v][u] = true;
      }
  for (std::size_t e = 0; e < g.edges.size(); ++e) g.lengths.push_back(len(rng));
  return g;
}

/// Minimum over all simple paths from `source`, summed from the source outwards.
inline std::vector<double> brute_force_distances(const RandomGraph& g, std::size_t source) {
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(g.n);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    adj[g.edges[e].u].push_back({g.edges[e].v, g.lengths[e]});
    adj[g.edges[e].v].push_back({g.edges[e].u, g.lengths[e]});
  }
  std::vector<double> best(g.n, std::numeric_limits<double>::infinity());
  std::vector<bool> on_path(g.n, false);
  std::function<void(std::size_t, double)> walk = [&](std::size_t v, double d) {
    best[v] = std::min(best[v], d);
    on_path[v] = true;
    for (const auto& [w, l] : adj[v])
      if (!on_path[w]) walk(w, d + l);
    on_path[v] = false;
  };
  walk(source, 0.0);
  return best;
}

/// Adaptive Simpson quadrature.
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-13,
                        int depth = 40) {
  std::function<double(double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, int d) {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        const double flm = f(lm), frm = f(rm);
        const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
        if (d <= 0 || std::abs(left + right - whole) <= 15.0 * tol) return left + right + (left + right - whole) / 15.0;
        return rec(lo, mid, flo, flm, fmid, left, d - 1) + rec(mid, hi, fmid, frm, fhi, right, d - 1);
      };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), depth);
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace test
