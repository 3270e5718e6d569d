#include "proper_lift/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "proper_lift/distance.hpp"
#include "proper_lift/errors.hpp"
#include "proper_lift/expression.hpp"
#include "proper_lift/manifold_io.hpp"

namespace proper_lift {

using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kStageNames[] = {"distance", "truncate", "smooth", "surgery", "embed",
                                       "lift", "pullback", "escape", "properness", "witness"};
constexpr int kFirstVerificationStage = 7;
const char* kOneDimMetric = "(1 + 0.1*(t/100)^2)^2";

Scenario curve_scenario(const std::string& name, Provider provider, int dim) {
  Scenario s;
  s.name = name;
  s.manifold.generator = "interval";
  s.manifold.range = {0.0, 100.0};
  s.manifold.samples = 10001;
  s.manifold.metric_expression = kOneDimMetric;
  s.provider = provider;
  s.ambient_dim = dim;
  s.witness = true;
  return s;
}

Scenario optimizer_scenario(const std::string& name) {
  Scenario s;
  s.name = name;
  s.provider = Provider::Optimizer;
  s.ambient_dim = 3;
  s.embed_tolerance = 1e-3;
  s.pullback_tolerance = 1e-3;
  return s;
}

}  // namespace

void Scenario::validate() const {
  const auto& g = manifold.generator;
  if (g == "interval" || g == "circle") {
    if (manifold.range.size() != 2 || !(manifold.range[1] > manifold.range[0]))
      throw ValidationError("scenario " + name + ": range must be [a, b] with a < b");
    if (manifold.samples < 2) throw ValidationError("scenario " + name + ": need at least 2 samples");
  } else if (g == "grid" || g == "revolution") {
    if (manifold.nx < 2 || manifold.ny < 2) throw ValidationError("scenario " + name + ": grid needs 2x2 vertices");
    if (!(manifold.width > 0.0 && manifold.height > 0.0))
      throw ValidationError("scenario " + name + ": grid extent must be positive");
    if (g == "revolution" && !(manifold.r0 >= 0.0)) throw ValidationError("scenario " + name + ": r0 must be >= 0");
  } else if (g == "file") {
    if (manifold.file.empty()) throw ValidationError("scenario " + name + ": file source without a path");
  } else {
    throw ValidationError("scenario " + name + ": unknown generator '" + g + "'");
  }
  if (ambient_dim < 1) throw ValidationError("scenario " + name + ": ambient_dim must be >= 1");
  if (refine < 0) throw ValidationError("scenario " + name + ": refine must be >= 0");
  if (!(embed_tolerance > 0.0) || !(pullback_tolerance > 0.0))
    throw ValidationError("scenario " + name + ": tolerances must be positive");
}

std::vector<std::string> list_scenarios() {
  return {"line", "circle", "spiral-circle", "spiral-point", "grid-patch"};
}

Scenario bundled_scenario(const std::string& name) {
  if (name == "line") {
    auto s = curve_scenario(name, Provider::Line, 1);
    s.witness_params.radius = 1e9;
    return s;
  }
  if (name == "spiral-circle") {
    auto s = curve_scenario(name, Provider::SpiralToCircle, 2);
    s.expect_raw_witness = true;
    s.witness_params.targets = {{1.0, 0.0}};
    return s;
  }
  if (name == "spiral-point") {
    auto s = curve_scenario(name, Provider::SpiralToPoint, 2);
    s.expect_raw_witness = true;
    s.witness_params.targets = {{0.0, 0.0}};
    return s;
  }
  if (name == "circle") {
    Scenario s;
    s.name = name;
    s.manifold.generator = "circle";
    s.manifold.range = {0.0, 2.0};
    s.manifold.samples = 10000;
    s.provider = Provider::CyclicPolygon;
    s.ambient_dim = 2;
    return s;
  }
  if (name == "grid-patch") {
    auto s = optimizer_scenario(name);
    s.manifold.generator = "grid";
    return s;
  }
  throw ValidationError("unknown scenario '" + name + "'");
}

namespace {

template <typename T>
void read(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

Scenario scenario_from_json(const Json& j, const std::filesystem::path& base_dir) {
  Scenario s = j.contains("base") ? bundled_scenario(j.at("base").get<std::string>()) : Scenario{};
  read(j, "name", s.name);
  if (s.name.empty()) s.name = "custom";
  if (j.contains("manifold")) {
    const auto& m = j.at("manifold");
    auto& src = s.manifold;
    read(m, "generator", src.generator);
    read(m, "range", src.range);
    read(m, "samples", src.samples);
    read(m, "nx", src.nx);
    read(m, "ny", src.ny);
    read(m, "width", src.width);
    read(m, "height", src.height);
    read(m, "r0", src.r0);
    read(m, "metric_expression", src.metric_expression);
    read(m, "profile_expression", src.profile_expression);
    read(m, "base_vertex", src.base);
    if (m.contains("file")) {
      src.generator = "file";
      src.file = m.at("file").get<std::string>();
      if (src.file.is_relative()) src.file = base_dir / src.file;
    }
  }
  if (j.contains("smoothing")) {
    const auto& p = j.at("smoothing");
    read(p, "r_ball", s.smoothing.r_ball);
    read(p, "r_slack", s.smoothing.r_slack);
    read(p, "tube_margin", s.smoothing.tube_margin);
    read(p, "kernel_width_fraction", s.smoothing.kernel_width_fraction);
    read(p, "max_kernel_width", s.smoothing.max_kernel_width);
    read(p, "max_passes", s.smoothing.max_passes);
  }
  if (j.contains("embedding")) {
    const auto& e = j.at("embedding");
    if (e.contains("provider")) s.provider = parse_provider(e.at("provider").get<std::string>());
    read(e, "ambient_dim", s.ambient_dim);
    read(e, "limit_radius", s.limit_radius);
    if (e.contains("optimizer")) {
      const auto& o = e.at("optimizer");
      read(o, "seed", s.optimizer.seed);
      read(o, "max_iters", s.optimizer.max_iters);
      read(o, "grad_tol", s.optimizer.grad_tol);
      read(o, "vertex_limit", s.optimizer.vertex_limit);
      if (o.contains("step_rule")) {
        const auto rule = o.at("step_rule").get<std::string>();
        if (rule == "armijo") s.optimizer.step_rule = StepRule::Armijo;
        else if (rule == "barzilai_borwein") s.optimizer.step_rule = StepRule::BarzilaiBorwein;
        else throw ValidationError("unknown step_rule '" + rule + "'");
      }
    }
  }
  read(j, "query_heights", s.query_heights);
  read(j, "queries", s.queries);
  read(j, "refine", s.refine);
  if (j.contains("tolerances")) {
    read(j.at("tolerances"), "embed", s.embed_tolerance);
    read(j.at("tolerances"), "pullback", s.pullback_tolerance);
  }
  if (j.contains("witness")) {
    const auto& w = j.at("witness");
    s.witness = w.value("enabled", true);
    read(w, "expect_raw", s.expect_raw_witness);
    read(w, "radius", s.witness_params.radius);
    read(w, "horizon", s.witness_params.horizon);
    read(w, "threshold", s.witness_params.threshold_constant);
    read(w, "min_records", s.witness_params.min_records);
    read(w, "tail_candidates", s.witness_params.tail_candidates);
    read(w, "targets", s.witness_params.targets);
  }
  s.validate();
  return s;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }
  try {
    return scenario_from_json(j, std::filesystem::current_path());
  } catch (const Json::exception& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }
}

Scenario load_scenario(const std::string& name_or_path) {
  const auto names = list_scenarios();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return bundled_scenario(name_or_path);
  const std::filesystem::path path(name_or_path);
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario '" + name_or_path + "' (not a bundled name or readable file)");
  std::stringstream buf;
  buf << in.rdbuf();
  Json j;
  try {
    j = Json::parse(buf.str());
    return scenario_from_json(j, path.parent_path());
  } catch (const Json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

ManifoldPtr build_manifold(const Scenario& s) {
  s.validate();
  const auto& src = s.manifold;
  std::shared_ptr<const AnalyticMetric> metric;
  ManifoldPtr m;
  if (src.generator == "interval" || src.generator == "circle") {
    if (!src.metric_expression.empty()) metric = metric_from_expression(src.metric_expression, 1);
    m = src.generator == "interval"
            ? make_interval(src.range[0], src.range[1], src.samples, metric, src.base)
            : make_circle(src.range[1] - src.range[0], src.samples, metric, src.base);
  } else if (src.generator == "grid") {
    if (!src.metric_expression.empty()) metric = metric_from_expression(src.metric_expression, 2);
    m = make_grid(src.nx, src.ny, src.width, src.height, metric, src.base);
  } else if (src.generator == "revolution") {
    const auto profile = Expression::parse(src.profile_expression, {"r"});
    m = make_revolution([profile](double r) { return profile(std::span<const double>(&r, 1)); }, src.r0,
                        src.r0 + src.width, src.height, src.nx, src.ny, src.base);
  } else {
    m = load_manifold(src.file, format_for(src.file));
  }
  if (s.refine > 0) m = refine(m, s.refine);
  return m;
}

const StageRecord* RunReport::stage(const std::string& name) const {
  for (const auto& st : stages)
    if (st.name == name) return &st;
  return nullptr;
}

bool RunReport::passed() const {
  return std::none_of(stages.begin(), stages.end(), [](const auto& st) { return st.status == StageStatus::Failed; });
}

int RunReport::exit_code() const {
  for (const auto& st : stages)
    if (st.status == StageStatus::Failed && st.index < kFirstVerificationStage) return 2;
  return passed() ? 0 : 3;
}

namespace {

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::vector<double> padded(const std::vector<double>& y) {
  auto out = y;
  out.push_back(0.0);
  return out;
}

class StageRunner {
 public:
  explicit StageRunner(RunReport& report) : report_(report) {
    for (int i = 0; i < static_cast<int>(std::size(kStageNames)); ++i)
      report_.stages.push_back({i + 1, kStageNames[i], StageStatus::Skipped, "", 0.0});
  }

  // Runs `body`, which returns an empty string on success or a failure message.
  template <typename Body>
  bool run(int index, Body&& body) {
    auto& st = report_.stages[index - 1];
    const auto start = std::chrono::steady_clock::now();
    try {
      st.message = body();
      st.status = st.message.empty() ? StageStatus::Passed : StageStatus::Failed;
    } catch (const std::exception& e) {
      st.status = StageStatus::Failed;
      st.message = e.what();
    }
    st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return st.status == StageStatus::Passed;
  }

 private:
  RunReport& report_;
};

}  // namespace

RunReport run_scenario(const Scenario& s) {
  RunReport r;
  r.scenario = s.name;
  r.seed = s.optimizer.seed;
  r.refine = s.refine;
  const auto m = build_manifold(s);
  r.dimension = m->dimension();
  r.vertices = m->vertex_count();
  r.cells = m->cell_count();
  r.mesh_scale = m->mesh_scale();
  StageRunner stages(r);
  const auto& params = s.smoothing;
  const MetricField g = MetricField::of(m);

  if (!stages.run(1, [&] {
        r.distance = distance_field(m);
        return std::string();
      }))
    return r;
  if (!stages.run(2, [&] {
        r.truncated = truncate_distance(*r.distance, params);
        return std::string();
      }))
    return r;
  if (!stages.run(3, [&] {
        auto result = smooth_approx(*r.truncated, params);
        r.phi = std::move(result.phi);
        r.smoothing = std::move(result.certificate);
        r.tube = verify_tube(*r.phi, *r.truncated, *r.distance, params);
        if (!r.smoothing->valid())
          return "smoothing certificate failed: Lipschitz " + fmt(r.smoothing->measured_lipschitz) + " (target " +
                 fmt(r.smoothing->lipschitz_target) + "), " + std::to_string(r.smoothing->violating_vertices.size()) +
                 " tube violations";
        if (!r.tube->passed()) return std::string("phi leaves the tube or the (D/2, D) band");
        return std::string();
      }))
    return r;
  if (!stages.run(4, [&] {
        const auto w = differential(*r.phi);
        const auto norms = covector_norm(w, g);
        r.max_covector_norm = norms.empty() ? 0.0 : *std::max_element(norms.begin(), norms.end());
        r.gtilde = modify_metric(g, w);
        r.spd = spd_check(*r.gtilde, g);
        r.reconstruction_residual = reconstruction_residual(*r.gtilde, g, w);
        if (!r.spd->passed())
          return "modified metric fails the SPD bound on " + std::to_string(r.spd->failing_cells.size()) + " cells";
        return std::string();
      }))
    return r;
  if (!stages.run(5, [&] {
        EmbedRequest req{*r.gtilde, s.ambient_dim, s.provider, s.limit_radius, s.optimizer};
        if (s.provider == Provider::Optimizer) {
          auto result = optimize_embedding(req);
          r.raw = std::move(result.map);
          r.stress_trace = std::move(result.trace);
          r.embedding = result.report;
        } else {
          r.raw = embed_curve(req);
          r.embedding = distortion(*r.raw, *r.gtilde);
        }
        if (!(r.embedding->max_rel_edge_error <= s.embed_tolerance))
          return "embedding edge error " + fmt(r.embedding->max_rel_edge_error) + " exceeds " +
                 fmt(s.embed_tolerance) + (r.embedding->converged ? "" : " (optimizer did not converge)");
        return std::string();
      }))
    return r;
  if (!stages.run(6, [&] {
        r.lifted = lift(*r.raw, *r.phi);
        const int last = r.lifted->ambient_dim() - 1;
        for (std::size_t v = 0; v < r.lifted->vertex_count(); ++v)
          if (!(r.lifted->point(v)[last] > params.r_ball / 4.0))
            return "last coordinate not above r_ball/4 at vertex " + std::to_string(v);
        return std::string();
      }))
    return r;

  stages.run(7, [&] {
    r.pullback = pullback_check(*r.lifted);
    if (!(r.pullback->max_rel_edge_error <= s.pullback_tolerance))
      return "pullback edge error " + fmt(r.pullback->max_rel_edge_error) + " exceeds " + fmt(s.pullback_tolerance);
    return std::string();
  });
  stages.run(8, [&] {
    r.escape = escape_bound_check(*r.lifted, *r.distance, params);
    if (!r.escape->passed()) return std::to_string(r.escape->violations.size()) + " escape bound violations";
    return std::string();
  });
  stages.run(9, [&] {
    std::vector<std::vector<double>> queries = s.queries;
    if (queries.empty()) {
      for (const double h : s.query_heights) {
        std::vector<double> q(r.lifted->ambient_dim(), 0.0);
        q.back() = h;
        queries.push_back(std::move(q));
      }
    }
    std::string failures;
    for (const auto& q : queries) {
      r.certificates.push_back(properness_certificate(*r.lifted, *r.distance, q, params));
      const auto& c = r.certificates.back();
      if (!c.verdict || !(c.far_bound >= c.Q)) failures += (failures.empty() ? "" : ", ") + ("Q=" + fmt(c.Q));
    }
    return failures.empty() ? std::string() : "no certificate for " + failures;
  });
  const bool open_curve = m->dimension() == 1 && !m->period();
  if (s.witness && open_curve) {
    stages.run(10, [&] {
      r.witness_checked = true;
      r.raw_witness = non_properness_witness(*r.raw, s.witness_params);
      auto lifted_params = s.witness_params;
      lifted_params.radius = std::numeric_limits<double>::infinity();
      for (auto& y : lifted_params.targets) y = padded(y);
      r.lifted_witness = non_properness_witness(*r.lifted, lifted_params);
      std::string msg;
      if (r.raw_witness.has_value() != s.expect_raw_witness)
        msg = s.expect_raw_witness ? "raw map shows no witness" : "raw map has an unexpected witness";
      if (r.lifted_witness) msg += std::string(msg.empty() ? "" : "; ") + "lifted map has a non-properness witness";
      return msg;
    });
  }
  return r;
}

namespace {

Json num(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

const char* status_name(StageStatus s) {
  switch (s) {
    case StageStatus::Passed: return "passed";
    case StageStatus::Failed: return "failed";
    case StageStatus::Skipped: return "skipped";
  }
  return "?";
}

Json to_json(const DistortionReport& d) {
  return {{"max_rel_edge_error", num(d.max_rel_edge_error)},
          {"mean_rel_edge_error", num(d.mean_rel_edge_error)},
          {"stress", num(d.stress)},
          {"converged", d.converged},
          {"iterations", d.iterations}};
}

Json to_json(const PropernessCertificate& c) {
  Json q = Json::array();
  for (const double x : c.query) q.push_back(num(x));
  return {{"query", q},
          {"Q", num(c.Q)},
          {"far_radius", num(c.far_radius)},
          {"far_bound", num(c.far_bound)},
          {"near_min", num(c.near_min)},
          {"near_count", c.near_count},
          {"far_count", c.far_count},
          {"mesh_scale", num(c.mesh_scale)},
          {"verdict", c.verdict}};
}

Json to_json(const std::optional<NonPropernessWitness>& w) {
  if (!w) return nullptr;
  Json samples = Json::array();
  for (const auto& s : w->samples) samples.push_back({{"t", num(s.t)}, {"distance", num(s.distance)}});
  Json target = Json::array();
  for (const double x : w->target) target.push_back(num(x));
  return {{"target", target}, {"threshold_constant", num(w->threshold_constant)}, {"samples", samples}};
}

Json certificates_json(const RunReport& r) {
  Json out = Json::array();
  for (const auto& c : r.certificates) out.push_back(to_json(c));
  return out;
}

Json witness_json(const RunReport& r) {
  return {{"checked", r.witness_checked}, {"raw", to_json(r.raw_witness)}, {"lifted", to_json(r.lifted_witness)}};
}

}  // namespace

std::string report_json(const RunReport& r) {
  Json j;
  j["scenario"] = r.scenario;
  j["seed"] = r.seed;
  j["refine"] = r.refine;
  j["manifold"] = {{"dimension", r.dimension},
                   {"vertices", r.vertices},
                   {"cells", r.cells},
                   {"mesh_scale", num(r.mesh_scale)}};
  Json stages = Json::array();
  for (const auto& st : r.stages)
    stages.push_back({{"index", st.index}, {"name", st.name}, {"status", status_name(st.status)}, {"message", st.message}});
  j["stages"] = stages;
  if (r.smoothing) {
    const auto& c = *r.smoothing;
    j["smoothing_certificate"] = {{"measured_lipschitz", num(c.measured_lipschitz)},
                                  {"lipschitz_target", num(c.lipschitz_target)},
                                  {"max_tube_violation", num(c.max_tube_violation)},
                                  {"min_tube_clearance", num(c.min_tube_clearance)},
                                  {"kernel_passes", c.kernel_passes},
                                  {"violating_vertices", c.violating_vertices.size()},
                                  {"valid", c.valid()}};
  }
  if (r.tube)
    j["tube"] = {{"tube_violations", r.tube->tube_violations.size()},
                 {"distance_violations", r.tube->distance_violations.size()}};
  if (r.spd)
    j["spd"] = {{"bound", num(r.spd->bound)},
                {"min_eigenvalue", num(r.spd->min_eigenvalue)},
                {"min_generalized_eigenvalue", num(r.spd->min_generalized_eigenvalue)},
                {"failing_cells", r.spd->failing_cells.size()},
                {"max_covector_norm", num(r.max_covector_norm)},
                {"reconstruction_residual", num(r.reconstruction_residual)},
                {"passed", r.spd->passed()}};
  if (r.embedding) j["embedding"] = to_json(*r.embedding);
  if (r.pullback) j["pullback"] = to_json(*r.pullback);
  if (r.escape)
    j["escape"] = {{"checked", r.escape->checked},
                   {"violations", r.escape->violations.size()},
                   {"min_slack", num(r.escape->min_slack)}};
  j["certificates"] = certificates_json(r);
  j["witness"] = witness_json(r);
  j["passed"] = r.passed();
  j["exit_code"] = r.exit_code();
  return j.dump(2) + "\n";
}

std::string timings_json(const RunReport& r) {
  Json j = Json::object();
  double total = 0.0;
  for (const auto& st : r.stages) {
    j[st.name] = st.seconds;
    total += st.seconds;
  }
  j["total"] = total;
  return j.dump(2) + "\n";
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace

void emit_plots(const RunReport& r, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw Error("cannot create output directory " + dir.string());

  if (r.distance) {
    const auto& m = r.distance->manifold();
    std::ostringstream out;
    out << (m->dimension() == 1 ? "vertex,t,D\n" : "vertex,x,y,D\n");
    for (VertexId v = 0; v < m->vertex_count(); ++v) {
      out << v;
      for (const double c : m->chart(v)) out << ',' << fmt(c);
      out << ',' << fmt((*r.distance)[v]) << '\n';
    }
    write_file(dir / "distance.csv", out.str());
  }
  if (r.phi) {
    std::ostringstream out;
    out << "vertex,D,f,phi,tube_lo,tube_hi\n";
    for (VertexId v = 0; v < r.phi->size(); ++v) {
      const double f = (*r.truncated)[v];
      out << v << ',' << fmt((*r.distance)[v]) << ',' << fmt(f) << ',' << fmt((*r.phi)[v]) << ',' << fmt(0.75 * f)
          << ',' << fmt(1.5 * f) << '\n';
    }
    write_file(dir / "phi.csv", out.str());
  }
  if (r.gtilde) {
    const auto& m = r.gtilde->manifold();
    std::ostringstream out;
    out << "cell,g_xx,g_xy,g_yy,gt_xx,gt_xy,gt_yy,lambda_min\n";
    for (CellId c = 0; c < r.gtilde->size(); ++c) {
      const auto& a = m->cell_metric(c);
      const auto& b = (*r.gtilde)[c];
      out << c << ',' << fmt(a.xx) << ',' << fmt(a.xy) << ',' << fmt(a.yy) << ',' << fmt(b.xx) << ',' << fmt(b.xy)
          << ',' << fmt(b.yy) << ',' << fmt(r.spd->generalized_eigenvalues[c]) << '\n';
    }
    write_file(dir / "gtilde.csv", out.str());
  }
  if (r.raw) {
    std::ostringstream out;
    out << "vertex";
    for (int k = 0; k < r.raw->ambient_dim(); ++k) out << ",raw_" << k;
    if (r.lifted)
      for (int k = 0; k < r.lifted->ambient_dim(); ++k) out << ",lift_" << k;
    out << '\n';
    for (VertexId v = 0; v < r.raw->vertex_count(); ++v) {
      out << v;
      for (const double x : r.raw->point(v)) out << ',' << fmt(x);
      if (r.lifted)
        for (const double x : r.lifted->point(v)) out << ',' << fmt(x);
      out << '\n';
    }
    write_file(dir / "embedding.csv", out.str());
  }
  if (!r.stress_trace.empty()) {
    std::ostringstream out;
    out << "iteration,stress,step\n";
    for (const auto& s : r.stress_trace) out << s.iteration << ',' << fmt(s.stress) << ',' << fmt(s.step) << '\n';
    write_file(dir / "stress.csv", out.str());
  }
  write_file(dir / "certificate.json", certificates_json(r).dump(2) + "\n");
  if (r.witness_checked) write_file(dir / "witness.json", witness_json(r).dump(2) + "\n");
  write_file(dir / "report.json", report_json(r));
  write_file(dir / "timings.json", timings_json(r));
}

}  // namespace proper_lift
