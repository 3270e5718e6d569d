#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "proper_lift/embedding.hpp"
#include "proper_lift/geometry.hpp"
#include "proper_lift/lift.hpp"
#include "proper_lift/smoothing.hpp"
#include "proper_lift/surgery.hpp"

namespace proper_lift {

/// Where the manifold comes from: a generator or a file.
struct ManifoldSource {
  std::string generator = "interval";  // interval | circle | grid | revolution | file
  std::vector<double> range{0.0, 100.0};  // interval: [a, b]; circle: [0, period]
  std::size_t samples = 10001;            // vertex count for curves
  std::size_t nx = 33, ny = 33;           // grid and revolution vertex counts
  double width = 1.0, height = 1.0;       // grid extent; revolution: r in [r0, r0 + width], theta in [0, height]
  double r0 = 1.0;
  std::string metric_expression;          // optional analytic metric (t, or x and y)
  std::string profile_expression = "r";   // revolution profile rho(r)
  VertexId base = 0;
  std::filesystem::path file;
};

struct Scenario {
  std::string name;
  ManifoldSource manifold;
  SmoothingParams smoothing;
  Provider provider = Provider::Line;
  int ambient_dim = 1;
  double limit_radius = 1.0;
  OptimizerParams optimizer;
  std::vector<double> query_heights{0.5, 1.0, 2.0};  // q = (0, ..., 0, Q)
  std::vector<std::vector<double>> queries;          // explicit points, override heights
  int refine = 0;
  double embed_tolerance = 1e-9;     // max relative edge error of the raw embedding vs g-tilde
  double pullback_tolerance = 1e-6;  // max relative edge error of the lift vs g
  bool witness = false;
  bool expect_raw_witness = false;
  WitnessParams witness_params;

  /// Throws ValidationError when generator parameters or tolerances are invalid.
  void validate() const;
};

/// Bundled scenario names.
std::vector<std::string> list_scenarios();
Scenario bundled_scenario(const std::string& name);
/// Scenario from JSON text; unspecified fields keep their defaults.
Scenario parse_scenario(const std::string& json_text);
/// A bundled name or a path to a JSON scenario file.
Scenario load_scenario(const std::string& name_or_path);
ManifoldPtr build_manifold(const Scenario& s);

enum class StageStatus { Passed, Failed, Skipped };

struct StageRecord {
  int index = 0;
  std::string name;
  StageStatus status = StageStatus::Skipped;
  std::string message;
  double seconds = 0.0;
};

struct RunReport {
  std::string scenario;
  std::uint64_t seed = 0;
  int refine = 0;
  int dimension = 0;
  std::size_t vertices = 0;
  std::size_t cells = 0;
  double mesh_scale = 0.0;
  std::vector<StageRecord> stages;

  std::optional<SmoothingCertificate> smoothing;
  std::optional<TubeReport> tube;
  std::optional<SpdReport> spd;
  double reconstruction_residual = 0.0;
  double max_covector_norm = 0.0;
  std::optional<DistortionReport> embedding;  // raw map vs g-tilde
  std::optional<DistortionReport> pullback;   // lift vs g
  std::optional<EscapeReport> escape;
  std::vector<PropernessCertificate> certificates;
  bool witness_checked = false;
  std::optional<NonPropernessWitness> raw_witness;
  std::optional<NonPropernessWitness> lifted_witness;

  // fields kept for plotting
  std::optional<ScalarField> distance, truncated, phi;
  std::optional<MetricField> gtilde;
  std::optional<EmbeddingMap> raw, lifted;
  std::vector<StressSample> stress_trace;

  const StageRecord* stage(const std::string& name) const;
  bool passed() const;
  /// 0 pass, 2 certification or construction stage failed, 3 verification failed.
  int exit_code() const;
};

/// Runs distance, truncate, smooth, surgery, embed, lift, pullback, escape, properness
/// and (for curves) witness stages. Construction stages stop the run on failure; the
/// verification stages all run. Deterministic for a fixed scenario and seed.
RunReport run_scenario(const Scenario& s);

std::string report_json(const RunReport& report);
std::string timings_json(const RunReport& report);

/// Writes distance.csv, phi.csv, gtilde.csv, embedding.csv, stress.csv (optimizer runs),
/// certificate.json, witness.json (when checked), report.json and timings.json.
/// Throws Error when the directory cannot be written.
void emit_plots(const RunReport& report, const std::filesystem::path& dir);

}  // namespace proper_lift
