#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "proper_lift/geometry.hpp"

namespace proper_lift {

/// n(n+1)(3n+11)/2, the ambient dimension of Nash's embedding theorem.
std::uint64_t nash_dimension(int n);

enum class Provider {
  Line,            // arc length into E^1
  SpiralToCircle,  // r(t) = rho (1 + 1/(1+t))
  SpiralToPoint,   // r(t) = rho / (1+t)
  CyclicPolygon,   // closed curves: vertices on one circle
  Optimizer,       // stress minimization
};

Provider parse_provider(const std::string& name);
std::string to_string(Provider p);

enum class StepRule { Armijo, BarzilaiBorwein };

struct OptimizerParams {
  std::uint64_t seed = 42;
  int max_iters = 50000;
  double grad_tol = 1e-9;        // relative to mean target length cubed
  StepRule step_rule = StepRule::BarzilaiBorwein;
  std::size_t vertex_limit = 5000;
};

struct EmbedRequest {
  MetricField metric;  // target metric, usually the modified one
  int ambient_dim = 1;
  Provider provider = Provider::Line;
  double limit_radius = 1.0;
  OptimizerParams optimizer;
};

struct DistortionReport {
  double max_rel_edge_error = 0.0;
  double mean_rel_edge_error = 0.0;
  double stress = 0.0;
  bool converged = true;
  int iterations = 0;
};

struct StressSample {
  int iteration = 0;
  double stress = 0.0;
  double step = 0.0;
};

struct OptimizeResult {
  EmbeddingMap map;
  DistortionReport report;
  std::vector<StressSample> trace;
};

/// Analytic providers for curves; Optimizer is forwarded to optimize_embedding.
/// Spiral providers match every chord to the target edge length exactly (closed-form
/// angle step) and throw EmbeddingError when an edge is shorter than the radial change
/// or longer than the sum of the two radii.
EmbeddingMap embed_curve(const EmbedRequest& request);

/// Gradient descent on S(X) = sum_e (|X_u - X_v|^2 - l_e^2)^2 from a seeded random
/// spherical start. Never fails on non-convergence: the report is flagged instead.
OptimizeResult optimize_embedding(const EmbedRequest& request);

/// Per-edge relative error of |X_u - X_v| against the lengths of `metric`.
DistortionReport distortion(const EmbeddingMap& x, const MetricField& metric);
/// Same against explicit per-edge target lengths.
DistortionReport distortion(const EmbeddingMap& x, std::span<const double> target_lengths);

}  // namespace proper_lift
