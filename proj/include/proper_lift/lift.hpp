#pragma once

#include <optional>
#include <vector>

#include "proper_lift/embedding.hpp"
#include "proper_lift/geometry.hpp"
#include "proper_lift/smoothing.hpp"

namespace proper_lift {

/// (et(v), phi(v) / 2) in E^{m+1}.
EmbeddingMap lift(const EmbeddingMap& et, const ScalarField& phi);

/// Edge distortion of `e` against the lengths of `g`.
DistortionReport pullback_check(const EmbeddingMap& e, const MetricField& g);
/// Edge distortion against the manifold's reference lengths (arc length under the
/// analytic metric when one is attached).
DistortionReport pullback_check(const EmbeddingMap& e);

struct EscapeReport {
  std::size_t checked = 0;             // vertices with D > r_ball
  std::vector<VertexId> violations;    // last coordinate <= D / 4
  double min_slack = 0.0;              // min over checked of last - D / 4
  bool passed() const { return violations.empty(); }
};

EscapeReport escape_bound_check(const EmbeddingMap& e, const ScalarField& distance, const SmoothingParams& params);

struct PropernessCertificate {
  std::vector<double> query;
  double Q = 0.0;
  double far_radius = 0.0;     // vertices with D > far_radius form the far part
  double far_bound = 0.0;      // Q when the escape bound covers the far part, else 0
  double near_min = 0.0;       // +inf when the near part is empty
  std::size_t near_count = 0;
  std::size_t far_count = 0;
  double mesh_scale = 0.0;
  bool verdict = false;
};

/// Q is the last coordinate of q. The far part is {D > max(8Q, r_ball)}; its bound
/// follows from the escape check (last coordinate >= 2Q there). The near part is
/// scored by exact distances. Throws UnsupportedQuery for Q <= 0 and ValidationError
/// when q lies within 1e-9 of an image point.
PropernessCertificate properness_certificate(const EmbeddingMap& e, const ScalarField& distance,
                                             std::span<const double> q, const SmoothingParams& params);

struct WitnessSample {
  double t = 0.0;
  double distance = 0.0;
};

struct NonPropernessWitness {
  std::vector<double> target;
  double threshold_constant = 10.0;
  std::vector<WitnessSample> samples;  // t increasing, distance strictly decreasing
};

struct WitnessParams {
  double radius = 4.0;                     // candidates must satisfy |y| <= radius
  double horizon = 0.0;                    // T; <= 0 means the last chart coordinate
  double threshold_constant = 10.0;        // visits are runs with distance < c / (1 + t)
  std::size_t min_records = 8;
  std::size_t tail_candidates = 16;        // image points sampled from t in [0.9 T, T]
  std::vector<std::vector<double>> targets;  // extra explicit candidates
};

/// Looks for y with |y| <= radius that the curve keeps approaching. A visit is a maximal
/// run of segments closer than c / (1 + t); each visit is cut into parameter blocks of
/// length T / 1024 and the block minima are scanned in order. The running record minima
/// must give at least `min_records` strictly decreasing values, the last at t >= T / 2.
/// For candidates taken from the curve itself the visit through the candidate is
/// skipped. Distances are measured to the polyline through the samples. Needs an open
/// 1-D manifold.
std::optional<NonPropernessWitness> non_properness_witness(const EmbeddingMap& e, const WitnessParams& params);

}  // namespace proper_lift
