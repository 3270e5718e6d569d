#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "proper_lift/geometry.hpp"

namespace proper_lift {

enum class ManifoldFormat { Mesh, CurveConfig };

inline constexpr std::size_t kDefaultVertexCap = 2'000'000;

/// `.json` files are curve configs, everything else is read as a mesh.
ManifoldFormat format_for(const std::filesystem::path& path);

/// Mesh files are OFF-compatible: vertex and face sections (faces of 2 vertices give a
/// curve, faces of 3 a triangle mesh) followed by optional extension lines
///
///     METRIC <face count>
///     <g> | <g11 g12 g22>      one line per face
///     BASE <vertex id>
///     PERIOD <p>               closed curves only
///
/// Without METRIC the chart metric is the identity.
ManifoldPtr load_manifold(const std::filesystem::path& path, ManifoldFormat format);

/// Curve config (JSON): {n, parameter_range, samples, metric_expression | edge_lengths,
/// base_vertex, closed}. `samples` counts vertices.
ManifoldPtr parse_curve_config(const std::string& text);

/// Writes a canonical representation. Mesh output keeps charts, cells, metric and base
/// exactly (shortest round-trip decimal); curve-config output is the edge-length form.
void save_manifold(const SampledManifold& m, const std::filesystem::path& path, ManifoldFormat format);
std::string mesh_text(const SampledManifold& m);

/// Midpoint subdivision applied k times: curves split each edge in two, triangles in
/// four. Child metrics come from the analytic metric when present, else from the parent.
/// Original vertices keep their ids. Throws CapacityError past `vertex_cap`.
ManifoldPtr refine(const ManifoldPtr& m, int k, std::size_t vertex_cap = kDefaultVertexCap);

// Generators. `metric` may be null (identity chart metric).

/// Interval [a, b] sampled with `vertices` equally spaced chart points.
ManifoldPtr make_interval(double a, double b, std::size_t vertices,
                          std::shared_ptr<const AnalyticMetric> metric = nullptr, VertexId base = 0);
/// Closed loop with chart [0, period), `vertices` samples.
ManifoldPtr make_circle(double period, std::size_t vertices,
                        std::shared_ptr<const AnalyticMetric> metric = nullptr, VertexId base = 0);
/// Flat nx-by-ny vertex grid on [0, width] x [0, height], each square split along its
/// (i, j)-(i+1, j+1) diagonal. Vertex id = j * nx + i.
ManifoldPtr make_grid(std::size_t nx, std::size_t ny, double width, double height,
                      std::shared_ptr<const AnalyticMetric> metric = nullptr, VertexId base = 0);
/// Surface of revolution patch in (r, theta) charts with metric dr^2 + profile(r)^2 dtheta^2.
ManifoldPtr make_revolution(std::function<double(double)> profile, double r0, double r1, double theta_max,
                            std::size_t nr, std::size_t ntheta, VertexId base = 0);

/// Analytic metric from an expression in t (n = 1) or x, y (n = 2, isotropic factor).
std::shared_ptr<const AnalyticMetric> metric_from_expression(const std::string& text, int dimension);

}  // namespace proper_lift
