#include "proper_lift/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "proper_lift/errors.hpp"

namespace proper_lift {

namespace {

bool all_finite(std::span<const double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

bool is_positive_definite(int dim, const Sym2& g) {
  if (!std::isfinite(g.xx) || !(g.xx > 0.0)) return false;
  if (dim == 1) return true;
  if (!std::isfinite(g.xy) || !std::isfinite(g.yy)) return false;
  // min eigenvalue of [[xx, xy], [xy, yy]]
  const double mean = 0.5 * (g.xx + g.yy);
  const double radius = std::hypot(0.5 * (g.xx - g.yy), g.xy);
  return mean - radius > 0.0 && g.xx * g.yy - g.xy * g.xy > 0.0;
}

template <typename... Args>
std::string concat(Args&&... args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

}  // namespace

WeightedGraph WeightedGraph::from_edges(std::size_t vertex_count, std::vector<GraphEdge> edges,
                                        std::vector<double> lengths) {
  WeightedGraph g;
  g.edges = std::move(edges);
  g.lengths = std::move(lengths);
  g.offsets.assign(vertex_count + 1, 0);
  for (const auto& e : g.edges) {
    ++g.offsets[e.u + 1];
    ++g.offsets[e.v + 1];
  }
  std::partial_sum(g.offsets.begin(), g.offsets.end(), g.offsets.begin());
  g.neighbors.resize(2 * g.edges.size());
  g.edge_ids.resize(2 * g.edges.size());
  std::vector<std::size_t> fill(g.offsets.begin(), g.offsets.end() - 1);
  for (std::uint32_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    g.neighbors[fill[e.u]] = e.v;
    g.edge_ids[fill[e.u]++] = i;
    g.neighbors[fill[e.v]] = e.u;
    g.edge_ids[fill[e.v]++] = i;
  }
  // sort each neighbor list by neighbor id (then edge id) for deterministic sweeps
  std::vector<std::pair<VertexId, std::uint32_t>> scratch;
  for (std::size_t v = 0; v < vertex_count; ++v) {
    scratch.clear();
    for (auto k = g.offsets[v]; k < g.offsets[v + 1]; ++k) scratch.emplace_back(g.neighbors[k], g.edge_ids[k]);
    std::sort(scratch.begin(), scratch.end());
    for (std::size_t k = 0; k < scratch.size(); ++k) {
      g.neighbors[g.offsets[v] + k] = scratch[k].first;
      g.edge_ids[g.offsets[v] + k] = scratch[k].second;
    }
  }
  return g;
}

double metric_length(int dimension, const Sym2& g, std::array<double, 2> d) {
  if (dimension == 1) return std::sqrt(g.xx) * std::abs(d[0]);
  return std::sqrt(g.xx * d[0] * d[0] + 2.0 * g.xy * d[0] * d[1] + g.yy * d[1] * d[1]);
}

SampledManifold::SampledManifold(ManifoldData data) : data_(std::move(data)) {}

std::shared_ptr<const SampledManifold> SampledManifold::create(ManifoldData data) {
  const int n = data.dimension;
  if (n != 1 && n != 2) throw ValidationError(concat("unsupported manifold dimension ", n));
  if (data.charts.empty() || data.charts.size() % n != 0)
    throw ValidationError("chart coordinate count is not a positive multiple of the dimension");
  if (!all_finite(data.charts)) throw ValidationError("non-finite vertex chart coordinate");
  const std::size_t vertex_count = data.charts.size() / n;
  const std::size_t k = n + 1;
  if (data.cell_vertices.size() % k != 0) throw ValidationError("cell vertex list has wrong length");
  const std::size_t cell_count = data.cell_vertices.size() / k;
  if (data.metric.size() != cell_count)
    throw ValidationError(concat("expected ", cell_count, " per-cell metrics, got ", data.metric.size()));
  if (data.period && (n != 1 || !(*data.period > 0.0)))
    throw ValidationError("a period is only valid for 1-D manifolds and must be positive");
  if (data.base_vertex >= vertex_count)
    throw ValidationError(concat("base vertex ", data.base_vertex, " does not exist"));
  if (cell_count == 0 && vertex_count > 1) throw ValidationError("manifold has no cells");

  for (std::size_t c = 0; c < cell_count; ++c) {
    for (std::size_t i = 0; i < k; ++i) {
      const VertexId v = data.cell_vertices[c * k + i];
      if (v >= vertex_count)
        throw ValidationError(concat("cell ", c, " references vertex ", v, " of ", vertex_count));
      for (std::size_t j = 0; j < i; ++j)
        if (data.cell_vertices[c * k + j] == v) throw ValidationError(concat("cell ", c, " repeats a vertex"));
    }
    if (!is_positive_definite(n, data.metric[c]))
      throw ValidationError(concat("metric on cell ", c, " is not positive definite"));
  }

  const std::size_t corner_len = k * n;
  if (data.cell_charts.empty()) {
    data.cell_charts.resize(cell_count * corner_len);
    for (std::size_t c = 0; c < cell_count; ++c) {
      for (std::size_t i = 0; i < k; ++i) {
        const VertexId v = data.cell_vertices[c * k + i];
        for (int a = 0; a < n; ++a) data.cell_charts[c * corner_len + i * n + a] = data.charts[v * n + a];
      }
      if (n == 1 && data.period) {
        // unwrap the second corner so the cell chart is the short arc
        const double p = *data.period;
        double t0 = data.cell_charts[c * corner_len];
        double d = data.cell_charts[c * corner_len + 1] - t0;
        d -= p * std::round(d / p);
        if (d == 0.0) d = p;
        data.cell_charts[c * corner_len + 1] = t0 + d;
      }
    }
  } else if (data.cell_charts.size() != cell_count * corner_len) {
    throw ValidationError("cell chart list has wrong length");
  }
  if (!all_finite(data.cell_charts)) throw ValidationError("non-finite cell chart coordinate");

  std::shared_ptr<SampledManifold> m(new SampledManifold(std::move(data)));
  m->derive();
  return m;
}

std::span<const double> SampledManifold::chart(VertexId v) const {
  return {data_.charts.data() + static_cast<std::size_t>(v) * dimension(), static_cast<std::size_t>(dimension())};
}

std::span<const VertexId> SampledManifold::cell(CellId c) const {
  return {data_.cell_vertices.data() + static_cast<std::size_t>(c) * cell_size(),
          static_cast<std::size_t>(cell_size())};
}

std::span<const double> SampledManifold::cell_chart(CellId c) const {
  const std::size_t len = static_cast<std::size_t>(cell_size()) * dimension();
  return {data_.cell_charts.data() + c * len, len};
}

std::array<double, 2> SampledManifold::corner_delta(CellId c, int a, int b) const {
  const auto cc = cell_chart(c);
  const int n = dimension();
  std::array<double, 2> d{0.0, 0.0};
  for (int i = 0; i < n; ++i) d[i] = cc[b * n + i] - cc[a * n + i];
  return d;
}

std::span<const CellId> SampledManifold::edge_cells(std::size_t e) const {
  return {edge_cell_ids_.data() + edge_cell_offsets_[e], edge_cell_offsets_[e + 1] - edge_cell_offsets_[e]};
}

std::size_t SampledManifold::edge_index(VertexId u, VertexId v) const {
  const auto begin = graph_.neighbors.begin() + static_cast<std::ptrdiff_t>(graph_.offsets[u]);
  const auto end = graph_.neighbors.begin() + static_cast<std::ptrdiff_t>(graph_.offsets[u + 1]);
  const auto it = std::lower_bound(begin, end, v);
  if (it == end || *it != v) return static_cast<std::size_t>(-1);
  return graph_.edge_ids[static_cast<std::size_t>(it - graph_.neighbors.begin())];
}

void SampledManifold::derive() {
  const int n = dimension();
  const int k = cell_size();
  const std::size_t cells = cell_count();

  struct Incidence {
    VertexId u, v;
    CellId cell;
  };
  std::vector<Incidence> inc;
  inc.reserve(cells * (n == 1 ? 1 : 3));
  for (CellId c = 0; c < cells; ++c) {
    const auto vs = cell(c);
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) inc.push_back({std::min(vs[i], vs[j]), std::max(vs[i], vs[j]), c});
  }
  std::sort(inc.begin(), inc.end(), [](const Incidence& a, const Incidence& b) {
    return std::tie(a.u, a.v, a.cell) < std::tie(b.u, b.v, b.cell);
  });

  std::vector<GraphEdge> edges;
  edge_cell_offsets_.clear();
  edge_cell_ids_.clear();
  for (std::size_t i = 0; i < inc.size(); ++i) {
    if (i == 0 || inc[i].u != inc[i - 1].u || inc[i].v != inc[i - 1].v) {
      edges.push_back({inc[i].u, inc[i].v});
      edge_cell_offsets_.push_back(edge_cell_ids_.size());
    }
    edge_cell_ids_.push_back(inc[i].cell);
  }
  edge_cell_offsets_.push_back(edge_cell_ids_.size());

  graph_ = WeightedGraph::from_edges(vertex_count(), std::move(edges), {});
  graph_.lengths = edge_lengths(*this, data_.metric);

  for (std::size_t e = 0; e < graph_.edge_count(); ++e)
    if (!(graph_.lengths[e] > 0.0) || !std::isfinite(graph_.lengths[e]))
      throw ValidationError(concat("edge ", graph_.edges[e].u, "-", graph_.edges[e].v, " has degenerate length"));
  if (n == 2) {
    for (CellId c = 0; c < cells; ++c) {
      const auto a = corner_delta(c, 0, 1);
      const auto b = corner_delta(c, 0, 2);
      if (a[0] * b[1] - a[1] * b[0] == 0.0) throw ValidationError(concat("cell ", c, " has zero chart area"));
    }
  }

  // connectivity
  std::vector<char> seen(vertex_count(), 0);
  std::vector<VertexId> stack{base_vertex()};
  seen[base_vertex()] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    for (auto i = graph_.offsets[v]; i < graph_.offsets[v + 1]; ++i) {
      const VertexId w = graph_.neighbors[i];
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  if (reached != vertex_count())
    throw ValidationError(concat("manifold is disconnected: ", vertex_count() - reached, " vertices unreachable"));

  mesh_scale_ = 0.0;
  for (CellId c = 0; c < cells; ++c)
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        mesh_scale_ = std::max(mesh_scale_, metric_length(n, data_.metric[c], corner_delta(c, i, j)));
}

namespace {

// corner indices of u and v within cell c
std::pair<int, int> corners_of(const SampledManifold& m, CellId c, VertexId u, VertexId v) {
  const auto vs = m.cell(c);
  int a = -1, b = -1;
  for (int i = 0; i < m.cell_size(); ++i) {
    if (vs[i] == u) a = i;
    if (vs[i] == v) b = i;
  }
  return {a, b};
}

}  // namespace

std::vector<double> edge_lengths(const SampledManifold& m, std::span<const Sym2> metric) {
  const auto& g = m.graph();
  std::vector<double> out(g.edge_count(), 0.0);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto cells = m.edge_cells(e);
    double sum = 0.0;
    for (const CellId c : cells) {
      const auto [a, b] = corners_of(m, c, g.edges[e].u, g.edges[e].v);
      sum += metric_length(m.dimension(), metric[c], m.corner_delta(c, a, b));
    }
    out[e] = sum / static_cast<double>(cells.size());
  }
  return out;
}

double analytic_segment_length(const AnalyticMetric& metric, int dimension, std::span<const double> start,
                               std::array<double, 2> delta) {
  // 5-point Gauss-Legendre on [0, 1]
  static constexpr std::array<double, 5> nodes{0.04691007703066800, 0.23076534494715845, 0.5,
                                               0.76923465505284155, 0.95308992296933200};
  static constexpr std::array<double, 5> weights{0.11846344252809454, 0.23931433524968324, 0.28444444444444444,
                                                 0.23931433524968324, 0.11846344252809454};
  double sum = 0.0;
  for (std::size_t q = 0; q < nodes.size(); ++q) {
    std::array<double, 2> x{0.0, 0.0};
    for (int i = 0; i < dimension; ++i) x[i] = start[i] + nodes[q] * delta[i];
    sum += weights[q] * metric_length(dimension, metric(std::span<const double>(x.data(), dimension)), delta);
  }
  return sum;
}

Sym2 fit_triangle_metric(std::span<const double> corners, std::span<const double, 3> lengths) {
  // rows [a^2, 2ab, b^2] for the edges 01, 12, 20
  double rows[3][3];
  double rhs[3];
  static constexpr int ends[3][2] = {{0, 1}, {1, 2}, {2, 0}};
  for (int k = 0; k < 3; ++k) {
    const double a = corners[2 * ends[k][1]] - corners[2 * ends[k][0]];
    const double b = corners[2 * ends[k][1] + 1] - corners[2 * ends[k][0] + 1];
    rows[k][0] = a * a;
    rows[k][1] = 2.0 * a * b;
    rows[k][2] = b * b;
    rhs[k] = lengths[k] * lengths[k];
  }
  auto det3 = [](const double (&m)[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  const double det = det3(rows);
  if (det == 0.0) throw ValidationError("fit_triangle_metric: degenerate triangle");
  double sol[3];
  for (int col = 0; col < 3; ++col) {
    double m[3][3];
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) m[r][c] = c == col ? rhs[r] : rows[r][c];
    sol[col] = det3(m) / det;
  }
  return Sym2{sol[0], sol[1], sol[2]};
}

Sym2 fit_triangle_metric(std::span<const double> corners, const AnalyticMetric& metric) {
  std::array<double, 3> lengths{};
  static constexpr int ends[3][2] = {{0, 1}, {1, 2}, {2, 0}};
  for (int k = 0; k < 3; ++k) {
    const std::array<double, 2> d{corners[2 * ends[k][1]] - corners[2 * ends[k][0]],
                                  corners[2 * ends[k][1] + 1] - corners[2 * ends[k][0] + 1]};
    lengths[k] = analytic_segment_length(metric, 2, corners.subspan(2 * ends[k][0], 2), d);
  }
  return fit_triangle_metric(corners, std::span<const double, 3>(lengths));
}

std::vector<double> reference_edge_lengths(const SampledManifold& m) {
  if (!m.analytic_metric()) return m.graph().lengths;
  const auto& metric = *m.analytic_metric();
  const auto& g = m.graph();
  const int n = m.dimension();
  std::vector<double> out(g.edge_count(), 0.0);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const CellId c = m.edge_cells(e)[0];
    const auto [a, b] = corners_of(m, c, g.edges[e].u, g.edges[e].v);
    out[e] = analytic_segment_length(metric, n, m.cell_chart(c).subspan(a * n, n), m.corner_delta(c, a, b));
  }
  return out;
}

ScalarField::ScalarField(ManifoldPtr manifold, std::vector<double> values)
    : manifold_(std::move(manifold)), values_(std::move(values)) {
  if (values_.size() != manifold_->vertex_count())
    throw ValidationError(concat("scalar field has ", values_.size(), " values for ", manifold_->vertex_count(),
                                 " vertices"));
  if (!all_finite(values_)) throw ValidationError("scalar field has non-finite values");
}

CovectorField::CovectorField(ManifoldPtr manifold, std::vector<std::array<double, 2>> components)
    : manifold_(std::move(manifold)), components_(std::move(components)) {
  if (components_.size() != manifold_->cell_count())
    throw ValidationError("covector field size does not match cell count");
  for (const auto& w : components_)
    if (!std::isfinite(w[0]) || !std::isfinite(w[1])) throw ValidationError("covector field has non-finite entries");
}

MetricField::MetricField(ManifoldPtr manifold, std::vector<Sym2> coefficients)
    : manifold_(std::move(manifold)), coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != manifold_->cell_count())
    throw ValidationError("metric field size does not match cell count");
  for (const auto& g : coefficients_)
    if (!std::isfinite(g.xx) || !std::isfinite(g.xy) || !std::isfinite(g.yy))
      throw ValidationError("metric field has non-finite entries");
}

MetricField MetricField::of(const ManifoldPtr& manifold) {
  const auto coeffs = manifold->metric_coefficients();
  return MetricField(manifold, std::vector<Sym2>(coeffs.begin(), coeffs.end()));
}

EmbeddingMap::EmbeddingMap(ManifoldPtr manifold, int ambient_dim, std::vector<double> coordinates)
    : manifold_(std::move(manifold)), ambient_dim_(ambient_dim), coordinates_(std::move(coordinates)) {
  if (ambient_dim_ < 1) throw ValidationError("ambient dimension must be positive");
  if (coordinates_.size() != manifold_->vertex_count() * static_cast<std::size_t>(ambient_dim_))
    throw ValidationError("embedding coordinate count does not match vertex count x ambient dimension");
  if (!all_finite(coordinates_)) throw ValidationError("embedding has non-finite coordinates");
}

void require_same_manifold(const ManifoldPtr& a, const ManifoldPtr& b, const char* what) {
  if (a.get() != b.get()) throw ValidationError(concat(what, ": fields live on different manifolds"));
}

CurveWalk walk_curve(const SampledManifold& m) {
  if (m.dimension() != 1) throw ValidationError("curve walk requires a 1-D manifold");
  const auto& g = m.graph();
  const std::size_t nv = m.vertex_count();
  CurveWalk walk;
  if (nv == 1) {
    walk.order = {0};
    return walk;
  }
  std::vector<VertexId> ends;
  for (VertexId v = 0; v < nv; ++v) {
    const auto deg = g.offsets[v + 1] - g.offsets[v];
    if (deg > 2 || deg == 0) throw ValidationError("1-D manifold is not a simple curve");
    if (deg == 1) ends.push_back(v);
  }
  VertexId start;
  VertexId prev = static_cast<VertexId>(-1);
  if (ends.empty()) {
    walk.closed = true;
    start = m.base_vertex();
    // orient along increasing chart: pick the neighbor reached with a positive cell delta
    const auto o = g.offsets[start];
    const std::uint32_t e0 = g.edge_ids[o];
    const CellId c = m.edge_cells(e0)[0];
    const auto vs = m.cell(c);
    const double d = m.corner_delta(c, 0, 1)[0];
    const bool forward = (vs[0] == start) == (d > 0.0);
    prev = forward ? g.neighbors[o + 1] : g.neighbors[o];
  } else if (ends.size() == 2) {
    const double t0 = m.chart(ends[0])[0];
    const double t1 = m.chart(ends[1])[0];
    start = (t1 < t0) ? ends[1] : ends[0];
  } else {
    throw ValidationError("1-D manifold is not a simple curve");
  }
  walk.order.reserve(nv);
  VertexId cur = start;
  walk.order.push_back(cur);
  while (walk.order.size() < nv || walk.closed) {
    std::uint32_t next_edge = static_cast<std::uint32_t>(-1);
    VertexId next = cur;
    for (auto i = g.offsets[cur]; i < g.offsets[cur + 1]; ++i) {
      if (g.neighbors[i] != prev) {
        next = g.neighbors[i];
        next_edge = g.edge_ids[i];
        break;
      }
    }
    if (next_edge == static_cast<std::uint32_t>(-1)) break;
    walk.edges.push_back(next_edge);
    if (next == start) break;
    walk.order.push_back(next);
    prev = cur;
    cur = next;
  }
  if (walk.order.size() != nv) throw ValidationError("1-D manifold is not a simple curve");
  return walk;
}

}  // namespace proper_lift
