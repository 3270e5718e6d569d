#pragma once

// Discretized Riemannian manifolds (n = 1 curves, n = 2 triangle meshes) and
// the per-vertex / per-cell fields that live on them.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace proper_lift {

using VertexId = std::uint32_t;
using CellId = std::uint32_t;

/// Symmetric bilinear form on a cell's chart. For n = 1 only `xx` is used.
struct Sym2 {
  double xx = 1.0;
  double xy = 0.0;
  double yy = 1.0;

  friend bool operator==(const Sym2&, const Sym2&) = default;
};

/// g evaluated at a chart point (n coordinates).
using AnalyticMetric = std::function<Sym2(std::span<const double>)>;

struct GraphEdge {
  VertexId u = 0;
  VertexId v = 0;
};

/// Undirected weighted graph in CSR form. Neighbor lists are sorted by id.
struct WeightedGraph {
  std::vector<std::size_t> offsets;     // vertex_count + 1
  std::vector<VertexId> neighbors;      // 2 * edge_count
  std::vector<std::uint32_t> edge_ids;  // parallel to neighbors
  std::vector<GraphEdge> edges;
  std::vector<double> lengths;          // per edge

  std::size_t vertex_count() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::size_t edge_count() const { return edges.size(); }

  static WeightedGraph from_edges(std::size_t vertex_count, std::vector<GraphEdge> edges,
                                  std::vector<double> lengths);
};

/// Plain description of a manifold; validated by SampledManifold::create.
struct ManifoldData {
  int dimension = 1;
  std::vector<double> charts;          // vertex_count * dimension
  std::vector<VertexId> cell_vertices; // cell_count * (dimension + 1)
  // Optional per-cell corner charts, cell_count * (dimension + 1) * dimension.
  // Defaults to the vertex charts (with wrap-around for periodic curves).
  std::vector<double> cell_charts;
  std::vector<Sym2> metric;            // one per cell
  VertexId base_vertex = 0;
  std::optional<double> period;        // n = 1 closed loops
  std::shared_ptr<const AnalyticMetric> analytic;
};

class SampledManifold : public std::enable_shared_from_this<SampledManifold> {
 public:
  /// Validates `data` and derives the edge graph. Throws ValidationError.
  static std::shared_ptr<const SampledManifold> create(ManifoldData data);

  int dimension() const { return data_.dimension; }
  std::size_t vertex_count() const { return data_.charts.size() / dimension(); }
  std::size_t cell_count() const { return data_.metric.size(); }
  int cell_size() const { return dimension() + 1; }
  VertexId base_vertex() const { return data_.base_vertex; }
  double mesh_scale() const { return mesh_scale_; }
  std::optional<double> period() const { return data_.period; }
  const std::shared_ptr<const AnalyticMetric>& analytic_metric() const { return data_.analytic; }

  std::span<const double> chart(VertexId v) const;
  std::span<const VertexId> cell(CellId c) const;
  /// Chart coordinates of the corners of cell c, in cell-vertex order.
  std::span<const double> cell_chart(CellId c) const;
  const Sym2& cell_metric(CellId c) const { return data_.metric[c]; }
  std::span<const Sym2> metric_coefficients() const { return data_.metric; }

  /// Edge graph; lengths are the mean of the per-cell metric lengths over incident cells.
  const WeightedGraph& graph() const { return graph_; }
  /// Cells incident to graph edge e.
  std::span<const CellId> edge_cells(std::size_t e) const;
  /// Graph edge index of the cell-local edge between corners i and j, or -1.
  std::size_t edge_index(VertexId u, VertexId v) const;

  /// Chart displacement from corner `a` to corner `b` of cell c.
  std::array<double, 2> corner_delta(CellId c, int a, int b) const;

  const ManifoldData& data() const { return data_; }

 private:
  explicit SampledManifold(ManifoldData data);
  void derive();

  ManifoldData data_;
  WeightedGraph graph_;
  std::vector<std::size_t> edge_cell_offsets_;
  std::vector<CellId> edge_cell_ids_;
  double mesh_scale_ = 0.0;
};

using ManifoldPtr = std::shared_ptr<const SampledManifold>;

/// Length of a chart displacement under a cell metric.
double metric_length(int dimension, const Sym2& g, std::array<double, 2> delta);

/// Per-edge lengths of the graph edges under a per-cell metric (mean over incident cells).
std::vector<double> edge_lengths(const SampledManifold& m, std::span<const Sym2> metric);

/// Length of the chart segment start + s * delta, s in [0, 1], under an analytic metric
/// (5-point Gauss-Legendre).
double analytic_segment_length(const AnalyticMetric& metric, int dimension, std::span<const double> start,
                               std::array<double, 2> delta);

/// The constant metric on a triangle (corner charts x0 y0 x1 y1 x2 y2) that gives the
/// edges 01, 12, 20 the requested lengths.
Sym2 fit_triangle_metric(std::span<const double> corners, std::span<const double, 3> lengths);
/// Same with the lengths measured under an analytic metric.
Sym2 fit_triangle_metric(std::span<const double> corners, const AnalyticMetric& metric);

/// Per-edge lengths under the analytic metric when present (Gauss-Legendre along the
/// chart segment), else the per-cell metric lengths.
std::vector<double> reference_edge_lengths(const SampledManifold& m);

/// One real per vertex.
class ScalarField {
 public:
  ScalarField(ManifoldPtr manifold, std::vector<double> values);

  const ManifoldPtr& manifold() const { return manifold_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t v) const { return values_[v]; }
  std::size_t size() const { return values_.size(); }

 private:
  ManifoldPtr manifold_;
  std::vector<double> values_;
};

/// One covector per cell, in chart components (n = 1 uses component 0).
class CovectorField {
 public:
  CovectorField(ManifoldPtr manifold, std::vector<std::array<double, 2>> components);

  const ManifoldPtr& manifold() const { return manifold_; }
  std::span<const std::array<double, 2>> components() const { return components_; }
  const std::array<double, 2>& operator[](std::size_t c) const { return components_[c]; }
  std::size_t size() const { return components_.size(); }

 private:
  ManifoldPtr manifold_;
  std::vector<std::array<double, 2>> components_;
};

/// One symmetric form per cell.
class MetricField {
 public:
  MetricField(ManifoldPtr manifold, std::vector<Sym2> coefficients);
  /// The manifold's own metric g.
  static MetricField of(const ManifoldPtr& manifold);

  const ManifoldPtr& manifold() const { return manifold_; }
  std::span<const Sym2> coefficients() const { return coefficients_; }
  const Sym2& operator[](std::size_t c) const { return coefficients_[c]; }
  std::size_t size() const { return coefficients_.size(); }

 private:
  ManifoldPtr manifold_;
  std::vector<Sym2> coefficients_;
};

/// Per-vertex coordinates in E^m, row-major.
class EmbeddingMap {
 public:
  EmbeddingMap(ManifoldPtr manifold, int ambient_dim, std::vector<double> coordinates);

  const ManifoldPtr& manifold() const { return manifold_; }
  int ambient_dim() const { return ambient_dim_; }
  std::span<const double> point(std::size_t v) const {
    return {coordinates_.data() + v * static_cast<std::size_t>(ambient_dim_),
            static_cast<std::size_t>(ambient_dim_)};
  }
  std::span<const double> coordinates() const { return coordinates_; }
  std::size_t vertex_count() const { return coordinates_.size() / ambient_dim_; }

 private:
  ManifoldPtr manifold_;
  int ambient_dim_;
  std::vector<double> coordinates_;
};

void require_same_manifold(const ManifoldPtr& a, const ManifoldPtr& b, const char* what);

/// Order of the vertices of a 1-D manifold along the curve: open curves start at the
/// endpoint with the smaller chart coordinate, loops at the base vertex. Also returns
/// the graph edge between consecutive entries (size = vertices - 1 for open curves,
/// vertices for loops, the last entry closing the loop).
struct CurveWalk {
  std::vector<VertexId> order;
  std::vector<std::uint32_t> edges;
  bool closed = false;
};
CurveWalk walk_curve(const SampledManifold& m);

}  // namespace proper_lift
