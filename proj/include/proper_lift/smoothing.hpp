#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "proper_lift/geometry.hpp"

namespace proper_lift {

struct SmoothingParams {
  double r_ball = 0.2;                 // radius of the flat cap around the base, < 1/4
  double r_slack = 1.0 / 12.0;         // Lipschitz slack over the 2/3 of the truncated field
  double tube_margin = 0.5;            // clamp half-width = tube_margin * f / 4
  double kernel_width_fraction = 0.25; // bump support radius = fraction * f(v)
  double max_kernel_width = 2.0;       // cap on the bump support radius
  int max_passes = 3;

  /// Throws ValidationError when a field is out of range.
  void validate() const;
  /// min(2/3 + r_slack, 3/4)
  double lipschitz_target() const;
};

struct SmoothingCertificate {
  double measured_lipschitz = 0.0;
  double lipschitz_target = 0.75;
  double max_tube_violation = 0.0;   // max over v of (required clearance - clearance)^+
  double min_tube_clearance = 0.0;   // min over v of min(phi - 3f/4, 3f/2 - phi)
  int kernel_passes = 0;
  std::vector<VertexId> violating_vertices;

  bool valid() const { return measured_lipschitz <= lipschitz_target && max_tube_violation == 0.0; }
};

/// Sampled Lipschitz quotient of fields on one manifold. Uses edge quotients, plus all
/// vertex pairs against graph distance when the manifold has at most `pair_limit`
/// vertices (the all-pairs matrix is computed once). On triangle meshes the gradient
/// norm of the piecewise-affine interpolant on each cell is included as well.
class LipschitzGauge {
 public:
  explicit LipschitzGauge(const ManifoldPtr& m, std::size_t pair_limit = 1000);
  /// max(pairwise, cell_gradient)
  double operator()(std::span<const double> values) const;
  /// Vertex-pair quotients only.
  double pairwise(std::span<const double> values) const;
  /// Max cell-metric norm of the per-triangle gradient; 0 on curves.
  double cell_gradient(std::span<const double> values) const;
  bool uses_pairs() const { return !all_pairs_.empty(); }

 private:
  ManifoldPtr manifold_;
  std::vector<double> all_pairs_;
};

double lipschitz_number(const ScalarField& field);

/// f(v) = (2/3) max(D(v), r_ball).
ScalarField truncate_distance(const ScalarField& distance, const SmoothingParams& params);

/// (3f/4, 3f/2). Throws ValidationError if some f(v) <= 0.
std::pair<ScalarField, ScalarField> tube_bounds(const ScalarField& f);

struct SmoothingResult {
  ScalarField phi;
  SmoothingCertificate certificate;
};

/// f must be 2/3-Lipschitz on vertex pairs (relative slack 1e-9 for summation error).
/// Iterated bump mollification with clamping into [f - rho, f + rho], rho = tube_margin f / 4.
/// A pass is kept only if the result stays certified; when the full step breaks the
/// Lipschitz target the step is halved (down to 1/64) before the pass is abandoned.
/// If not even the first pass certifies, the failing candidate and its certificate are
/// returned.
SmoothingResult smooth_approx(const ScalarField& f, const SmoothingParams& params);

SmoothingCertificate certify_smoothing(std::span<const double> phi, std::span<const double> f,
                                       const SmoothingParams& params, const LipschitzGauge& gauge);

struct TubeReport {
  std::vector<VertexId> tube_violations;      // not strictly inside (3f/4, 3f/2)
  std::vector<VertexId> distance_violations;  // D > r_ball but not D/2 < phi < D
  bool passed() const { return tube_violations.empty() && distance_violations.empty(); }
};

TubeReport verify_tube(const ScalarField& phi, const ScalarField& f, const ScalarField& distance,
                       const SmoothingParams& params);

}  // namespace proper_lift
