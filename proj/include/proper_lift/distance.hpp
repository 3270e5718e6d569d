#pragma once

#include <limits>
#include <span>
#include <vector>

#include "proper_lift/geometry.hpp"

namespace proper_lift {

inline constexpr double kUnreached = std::numeric_limits<double>::infinity();

/// Multi-source Dijkstra: vertices start with `initial` labels (kUnreached for none).
/// Equal keys are settled in increasing vertex id order.
std::vector<double> shortest_path_lengths(const WeightedGraph& g, std::span<const double> initial);
std::vector<double> shortest_path_lengths(const WeightedGraph& g, VertexId source);

/// Geodesic distance from the base vertex. Curves: exact graph distance. Triangle
/// meshes: edge-graph Dijkstra, then rounds of triangle-unfolding updates each followed
/// by a seeded re-sweep, until a round changes nothing. D(v) <= D(u) + length(u, v)
/// holds on every edge.
ScalarField distance_field(const ManifoldPtr& m);

/// Sampled closed ball {v : D(v) <= radius}, sorted by id.
std::vector<VertexId> metric_ball(const ScalarField& distance, double radius);

}  // namespace proper_lift
