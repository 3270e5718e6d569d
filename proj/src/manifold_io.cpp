#include "proper_lift/manifold_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "proper_lift/errors.hpp"
#include "proper_lift/expression.hpp"

namespace proper_lift {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string shortest(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

// Whitespace tokenizer that drops '#' comments.
class Tokens {
 public:
  explicit Tokens(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) tokens_.push_back(tok);
    }
  }
  bool done() const { return pos_ >= tokens_.size(); }
  const std::string& peek() const {
    if (done()) throw ParseError("unexpected end of mesh file");
    return tokens_[pos_];
  }
  std::string next() {
    const auto& t = peek();
    ++pos_;
    return t;
  }
  double real() {
    const auto t = next();
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size()) throw ParseError("expected a number, got '" + t + "'");
    return v;
  }
  std::size_t count() {
    const auto t = next();
    std::size_t v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size())
      throw ParseError("expected a non-negative integer, got '" + t + "'");
    return v;
  }

 private:
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

ManifoldPtr parse_mesh(const std::string& text) {
  Tokens tok(text);
  if (tok.next() != "OFF") throw ParseError("mesh file must start with OFF");
  const std::size_t nv = tok.count();
  const std::size_t nf = tok.count();
  tok.count();  // edge count, unused
  std::vector<std::array<double, 3>> xyz(nv);
  for (auto& p : xyz)
    for (auto& c : p) c = tok.real();
  std::vector<std::vector<VertexId>> faces(nf);
  for (auto& f : faces) {
    const std::size_t k = tok.count();
    if (k != 2 && k != 3) throw ParseError("faces must have 2 or 3 vertices");
    f.resize(k);
    for (auto& v : f) {
      const auto id = tok.count();
      if (id > std::numeric_limits<VertexId>::max()) throw ValidationError("vertex id out of range");
      v = static_cast<VertexId>(id);
    }
  }
  int dim = nf == 0 ? 1 : static_cast<int>(faces.front().size()) - 1;
  for (const auto& f : faces)
    if (static_cast<int>(f.size()) - 1 != dim) throw ParseError("mixed edge and triangle faces");

  ManifoldData data;
  data.dimension = dim;
  data.metric.assign(nf, Sym2{});
  while (!tok.done()) {
    const auto key = tok.next();
    if (key == "METRIC") {
      const std::size_t n = tok.count();
      if (n != nf) throw ParseError("METRIC section must list one entry per face");
      for (auto& g : data.metric) {
        if (dim == 1) {
          g.xx = tok.real();
        } else {
          g.xx = tok.real();
          g.xy = tok.real();
          g.yy = tok.real();
        }
      }
    } else if (key == "BASE") {
      data.base_vertex = static_cast<VertexId>(tok.count());
    } else if (key == "PERIOD") {
      data.period = tok.real();
    } else {
      throw ParseError("unknown mesh extension '" + key + "'");
    }
  }
  for (const auto& p : xyz)
    for (int i = 0; i < dim; ++i) data.charts.push_back(p[i]);
  for (const auto& f : faces) data.cell_vertices.insert(data.cell_vertices.end(), f.begin(), f.end());
  return SampledManifold::create(std::move(data));
}

}  // namespace

ManifoldFormat format_for(const std::filesystem::path& path) {
  return path.extension() == ".json" ? ManifoldFormat::CurveConfig : ManifoldFormat::Mesh;
}

std::shared_ptr<const AnalyticMetric> metric_from_expression(const std::string& text, int dimension) {
  if (dimension == 1) {
    auto e = Expression::parse(text, {"t"});
    return std::make_shared<const AnalyticMetric>([e](std::span<const double> x) {
      Sym2 g;
      g.xx = e(x);
      return g;
    });
  }
  auto e = Expression::parse(text, {"x", "y"});
  return std::make_shared<const AnalyticMetric>([e](std::span<const double> x) {
    const double s = e(x);
    return Sym2{s, 0.0, s};
  });
}

ManifoldPtr parse_curve_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("curve config: ") + e.what());
  }
  try {
    if (j.value("n", 1) != 1) throw ValidationError("curve config requires n = 1");
    const bool closed = j.value("closed", false);
    const auto base = j.value("base_vertex", 0u);
    if (j.contains("edge_lengths")) {
      const auto lengths = j.at("edge_lengths").get<std::vector<double>>();
      if (lengths.empty()) throw ValidationError("edge_lengths is empty");
      for (const double l : lengths)
        if (!(l > 0.0) || !std::isfinite(l)) throw ValidationError("edge_lengths must be positive and finite");
      const double start = j.contains("parameter_range") ? j.at("parameter_range").at(0).get<double>() : 0.0;
      ManifoldData data;
      data.dimension = 1;
      data.base_vertex = base;
      const std::size_t nv = closed ? lengths.size() : lengths.size() + 1;
      double t = start;
      for (std::size_t i = 0; i < nv; ++i) {
        data.charts.push_back(t);
        if (i < lengths.size()) t += lengths[i];
      }
      for (std::size_t i = 0; i < lengths.size(); ++i) {
        const auto u = static_cast<VertexId>(i);
        const auto v = static_cast<VertexId>((i + 1) % nv);
        data.cell_vertices.insert(data.cell_vertices.end(), {u, v});
        data.cell_charts.insert(data.cell_charts.end(), {data.charts[i], data.charts[i] + lengths[i]});
        data.metric.push_back(Sym2{});
      }
      if (closed) data.period = t - start;
      return SampledManifold::create(std::move(data));
    }
    const auto range = j.at("parameter_range").get<std::vector<double>>();
    if (range.size() != 2 || !(range[1] > range[0])) throw ValidationError("parameter_range must be [a, b] with a < b");
    const auto samples = j.at("samples").get<std::size_t>();
    std::shared_ptr<const AnalyticMetric> metric;
    if (j.contains("metric_expression")) metric = metric_from_expression(j.at("metric_expression").get<std::string>(), 1);
    if (closed) return make_circle(range[1] - range[0], samples, metric, base);
    return make_interval(range[0], range[1], samples, metric, base);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("curve config: ") + e.what());
  }
}

ManifoldPtr load_manifold(const std::filesystem::path& path, ManifoldFormat format) {
  const auto text = read_file(path);
  return format == ManifoldFormat::Mesh ? parse_mesh(text) : parse_curve_config(text);
}

std::string mesh_text(const SampledManifold& m) {
  const int n = m.dimension();
  std::ostringstream os;
  os << "OFF\n" << m.vertex_count() << ' ' << m.cell_count() << " 0\n";
  for (VertexId v = 0; v < m.vertex_count(); ++v) {
    const auto c = m.chart(v);
    os << shortest(c[0]) << ' ' << (n == 2 ? shortest(c[1]) : "0") << " 0\n";
  }
  for (CellId c = 0; c < m.cell_count(); ++c) {
    os << m.cell_size();
    for (const auto v : m.cell(c)) os << ' ' << v;
    os << '\n';
  }
  os << "METRIC " << m.cell_count() << '\n';
  for (const auto& g : m.metric_coefficients()) {
    if (n == 1) os << shortest(g.xx) << '\n';
    else os << shortest(g.xx) << ' ' << shortest(g.xy) << ' ' << shortest(g.yy) << '\n';
  }
  os << "BASE " << m.base_vertex() << '\n';
  if (m.period()) os << "PERIOD " << shortest(*m.period()) << '\n';
  return os.str();
}

void save_manifold(const SampledManifold& m, const std::filesystem::path& path, ManifoldFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  if (format == ManifoldFormat::Mesh) {
    out << mesh_text(m);
  } else {
    const auto walk = walk_curve(m);
    // edge-length form renumbers vertices along the walk
    std::vector<double> lengths;
    double total = 0.0;
    for (const auto e : walk.edges) {
      lengths.push_back(m.graph().lengths[e]);
      total += lengths.back();
    }
    VertexId base = 0;
    for (std::size_t i = 0; i < walk.order.size(); ++i)
      if (walk.order[i] == m.base_vertex()) base = static_cast<VertexId>(i);
    nlohmann::json j{{"n", 1},
                     {"parameter_range", {0.0, total}},
                     {"edge_lengths", lengths},
                     {"base_vertex", base},
                     {"closed", walk.closed}};
    out << j.dump(2) << '\n';
  }
  if (!out) throw Error("write failed for " + path.string());
}

namespace {

Sym2 sample_metric(const ManifoldPtr& m, const Sym2& parent, std::span<const double> point) {
  if (m->analytic_metric()) return (*m->analytic_metric())(point);
  return parent;
}

ManifoldPtr refine_once(const ManifoldPtr& m) {
  const int n = m->dimension();
  const auto& src = m->data();
  ManifoldData out;
  out.dimension = n;
  out.base_vertex = src.base_vertex;
  out.period = src.period;
  out.analytic = src.analytic;
  out.charts = src.charts;
  auto next_id = static_cast<VertexId>(m->vertex_count());

  if (n == 1) {
    for (CellId c = 0; c < m->cell_count(); ++c) {
      const auto vs = m->cell(c);
      const auto cc = m->cell_chart(c);
      const double mid = 0.5 * (cc[0] + cc[1]);
      const VertexId w = next_id++;
      out.charts.push_back(mid);
      const std::array<double, 2> halves[2] = {{cc[0], mid}, {mid, cc[1]}};
      const VertexId ends[2][2] = {{vs[0], w}, {w, vs[1]}};
      for (int h = 0; h < 2; ++h) {
        out.cell_vertices.insert(out.cell_vertices.end(), {ends[h][0], ends[h][1]});
        out.cell_charts.insert(out.cell_charts.end(), {halves[h][0], halves[h][1]});
        const double centre = 0.5 * (halves[h][0] + halves[h][1]);
        out.metric.push_back(sample_metric(m, m->cell_metric(c), std::span<const double>(&centre, 1)));
      }
    }
    return SampledManifold::create(std::move(out));
  }

  const auto& g = m->graph();
  std::vector<VertexId> midpoint(g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    midpoint[e] = next_id++;
    const auto a = m->chart(g.edges[e].u);
    const auto b = m->chart(g.edges[e].v);
    out.charts.push_back(0.5 * (a[0] + b[0]));
    out.charts.push_back(0.5 * (a[1] + b[1]));
  }
  for (CellId c = 0; c < m->cell_count(); ++c) {
    const auto vs = m->cell(c);
    const auto cc = m->cell_chart(c);
    const VertexId ab = midpoint[m->edge_index(vs[0], vs[1])];
    const VertexId bc = midpoint[m->edge_index(vs[1], vs[2])];
    const VertexId ca = midpoint[m->edge_index(vs[2], vs[0])];
    // corner charts: 0,1,2 originals, 3 = ab, 4 = bc, 5 = ca
    std::array<std::array<double, 2>, 6> p{};
    for (int i = 0; i < 3; ++i) p[i] = {cc[2 * i], cc[2 * i + 1]};
    auto mid = [&](int i, int j) { return std::array<double, 2>{0.5 * (p[i][0] + p[j][0]), 0.5 * (p[i][1] + p[j][1])}; };
    p[3] = mid(0, 1);
    p[4] = mid(1, 2);
    p[5] = mid(2, 0);
    const VertexId ids[6] = {vs[0], vs[1], vs[2], ab, bc, ca};
    static constexpr int children[4][3] = {{0, 3, 5}, {3, 1, 4}, {5, 4, 2}, {3, 4, 5}};
    for (const auto& ch : children) {
      for (const int k : ch) {
        out.cell_vertices.push_back(ids[k]);
        out.cell_charts.insert(out.cell_charts.end(), {p[k][0], p[k][1]});
      }
      const auto corners = std::span<const double>(out.cell_charts).last(6);
      out.metric.push_back(m->analytic_metric() ? fit_triangle_metric(corners, *m->analytic_metric())
                                                : m->cell_metric(c));
    }
  }
  return SampledManifold::create(std::move(out));
}

}  // namespace

ManifoldPtr refine(const ManifoldPtr& m, int k, std::size_t vertex_cap) {
  if (k < 0) throw ValidationError("refinement level must be non-negative");
  ManifoldPtr cur = m;
  for (int level = 0; level < k; ++level) {
    const std::size_t added = cur->dimension() == 1 ? cur->cell_count() : cur->graph().edge_count();
    if (cur->vertex_count() + added > vertex_cap)
      throw CapacityError("refinement would create " + std::to_string(cur->vertex_count() + added) +
                          " vertices, cap is " + std::to_string(vertex_cap));
    cur = refine_once(cur);
  }
  return cur;
}

ManifoldPtr make_interval(double a, double b, std::size_t vertices, std::shared_ptr<const AnalyticMetric> metric,
                          VertexId base) {
  if (vertices < 2 || !(b > a)) throw ValidationError("interval needs b > a and at least 2 samples");
  ManifoldData data;
  data.dimension = 1;
  data.base_vertex = base;
  data.analytic = metric;
  const double h = (b - a) / static_cast<double>(vertices - 1);
  for (std::size_t i = 0; i < vertices; ++i) data.charts.push_back(i + 1 == vertices ? b : a + h * static_cast<double>(i));
  for (std::size_t i = 0; i + 1 < vertices; ++i) {
    data.cell_vertices.insert(data.cell_vertices.end(), {static_cast<VertexId>(i), static_cast<VertexId>(i + 1)});
    const double mid = 0.5 * (data.charts[i] + data.charts[i + 1]);
    data.metric.push_back(metric ? (*metric)(std::span<const double>(&mid, 1)) : Sym2{});
  }
  return SampledManifold::create(std::move(data));
}

ManifoldPtr make_circle(double period, std::size_t vertices, std::shared_ptr<const AnalyticMetric> metric,
                        VertexId base) {
  if (vertices < 3 || !(period > 0.0)) throw ValidationError("circle needs a positive period and at least 3 samples");
  ManifoldData data;
  data.dimension = 1;
  data.base_vertex = base;
  data.analytic = metric;
  data.period = period;
  const double h = period / static_cast<double>(vertices);
  for (std::size_t i = 0; i < vertices; ++i) data.charts.push_back(h * static_cast<double>(i));
  for (std::size_t i = 0; i < vertices; ++i) {
    const double t0 = data.charts[i];
    const double t1 = i + 1 == vertices ? period : data.charts[i + 1];
    data.cell_vertices.insert(data.cell_vertices.end(),
                              {static_cast<VertexId>(i), static_cast<VertexId>((i + 1) % vertices)});
    data.cell_charts.insert(data.cell_charts.end(), {t0, t1});
    const double mid = 0.5 * (t0 + t1);
    data.metric.push_back(metric ? (*metric)(std::span<const double>(&mid, 1)) : Sym2{});
  }
  return SampledManifold::create(std::move(data));
}

ManifoldPtr make_grid(std::size_t nx, std::size_t ny, double width, double height,
                      std::shared_ptr<const AnalyticMetric> metric, VertexId base) {
  if (nx < 2 || ny < 2 || !(width > 0.0) || !(height > 0.0)) throw ValidationError("grid needs at least 2x2 vertices");
  ManifoldData data;
  data.dimension = 2;
  data.base_vertex = base;
  data.analytic = metric;
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      data.charts.push_back(width * static_cast<double>(i) / static_cast<double>(nx - 1));
      data.charts.push_back(height * static_cast<double>(j) / static_cast<double>(ny - 1));
    }
  auto id = [nx](std::size_t i, std::size_t j) { return static_cast<VertexId>(j * nx + i); };
  auto add = [&](VertexId a, VertexId b, VertexId c) {
    data.cell_vertices.insert(data.cell_vertices.end(), {a, b, c});
    std::array<double, 6> corners{};
    for (int k = 0; k < 3; ++k) {
      const VertexId v = k == 0 ? a : k == 1 ? b : c;
      corners[2 * k] = data.charts[2 * v];
      corners[2 * k + 1] = data.charts[2 * v + 1];
    }
    data.metric.push_back(metric ? fit_triangle_metric(corners, *metric) : Sym2{});
  };
  for (std::size_t j = 0; j + 1 < ny; ++j)
    for (std::size_t i = 0; i + 1 < nx; ++i) {
      add(id(i, j), id(i + 1, j), id(i + 1, j + 1));
      add(id(i, j), id(i + 1, j + 1), id(i, j + 1));
    }
  return SampledManifold::create(std::move(data));
}

ManifoldPtr make_revolution(std::function<double(double)> profile, double r0, double r1, double theta_max,
                            std::size_t nr, std::size_t ntheta, VertexId base) {
  auto metric = std::make_shared<const AnalyticMetric>([profile](std::span<const double> x) {
    const double rho = profile(x[0]);
    return Sym2{1.0, 0.0, rho * rho};
  });
  // charts (r, theta) laid out like make_grid, then shifted to start at r0
  auto grid = make_grid(nr, ntheta, r1 - r0, theta_max, nullptr, base);
  ManifoldData data = grid->data();
  for (std::size_t v = 0; v < grid->vertex_count(); ++v) data.charts[2 * v] += r0;
  for (std::size_t k = 0; k < data.cell_charts.size(); k += 2) data.cell_charts[k] += r0;
  data.analytic = metric;
  for (CellId c = 0; c < grid->cell_count(); ++c)
    data.metric[c] = fit_triangle_metric(std::span<const double>(data.cell_charts).subspan(6 * c, 6), *metric);
  return SampledManifold::create(std::move(data));
}

}  // namespace proper_lift
