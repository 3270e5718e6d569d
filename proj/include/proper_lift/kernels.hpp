#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP version used by the pipeline
// and a plain serial reference in `kernels::serial` that the tests and the benchmark
// compare against. Parallel results do not depend on the worker count: every output
// element is produced by one thread in a fixed order, and reductions are max/min or
// serial sums over per-element arrays.

#include <span>
#include <vector>

#include "proper_lift/geometry.hpp"

namespace proper_lift::kernels {

/// C-infinity bump exp(1 - 1/(1 - s^2)) on |s| < 1, zero outside; bump(0) = 1.
double bump(double s);

/// One mollification pass. out[v] is the bump-weighted mean of `in` over the geodesic
/// (graph) ball of radius widths[v] around v. widths[v] <= 0 copies in[v].
void mollify_pass(const WeightedGraph& g, std::span<const double> in, std::span<const double> widths,
                  std::span<double> out);

/// max over edges of |F(u) - F(v)| / length(u, v).
double edge_lipschitz(const WeightedGraph& g, std::span<const double> values);

/// Dense row-major all-pairs graph distances.
std::vector<double> all_pairs_distances(const WeightedGraph& g);

/// max over vertex pairs of |F(u) - F(v)| / d(u, v) for a dense distance matrix.
double pair_lipschitz(std::span<const double> values, std::span<const double> all_pairs);

/// S(X) = sum_e (|X_u - X_v|^2 - target_sq_e)^2 over the graph edges and its gradient.
/// X and grad are row-major vertex_count x dim.
double stress_gradient(const WeightedGraph& g, std::span<const double> target_sq, std::span<const double> x, int dim,
                       std::span<double> grad);
double stress_value(const WeightedGraph& g, std::span<const double> target_sq, std::span<const double> x, int dim);

/// Distance from point y to each polyline segment (order[i], order[i+1]) of an embedding.
std::vector<double> polyline_distances(std::span<const double> coords, int dim, std::span<const VertexId> order,
                                       bool closed, std::span<const double> y);

namespace serial {

void mollify_pass(const WeightedGraph& g, std::span<const double> in, std::span<const double> widths,
                  std::span<double> out);
double edge_lipschitz(const WeightedGraph& g, std::span<const double> values);
std::vector<double> all_pairs_distances(const WeightedGraph& g);
double stress_gradient(const WeightedGraph& g, std::span<const double> target_sq, std::span<const double> x, int dim,
                       std::span<double> grad);

}  // namespace serial

}  // namespace proper_lift::kernels
