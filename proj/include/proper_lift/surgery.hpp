#pragma once

#include <vector>

#include "proper_lift/geometry.hpp"

namespace proper_lift {

/// Per-cell gradient covector of the piecewise-affine interpolant of phi, in chart
/// components: (phi(v) - phi(u)) / dt on curves, the solution of the 2x2 interpolation
/// system on triangles.
CovectorField differential(const ScalarField& phi);

/// Per-cell dual norm sqrt(w^T g^{-1} w). Throws SurgeryError on a singular cell metric.
std::vector<double> covector_norm(const CovectorField& w, const MetricField& g);

/// g - (1/4) w (x) w, cell by cell. Throws SurgeryError naming the first cell whose
/// covector norm is not below 1.
MetricField modify_metric(const MetricField& g, const CovectorField& w);

/// Smallest eigenvalue of a cell form (n = 1: the coefficient itself).
double min_eigenvalue(int dimension, const Sym2& a);
/// Smallest lambda with det(a - lambda b) = 0, b positive definite.
double min_generalized_eigenvalue(int dimension, const Sym2& a, const Sym2& b);

struct SpdReport {
  double bound = 55.0 / 64.0;
  double tolerance = 1e-9;
  double min_eigenvalue = 0.0;
  double min_generalized_eigenvalue = 0.0;
  std::vector<double> generalized_eigenvalues;  // per cell
  std::vector<CellId> failing_cells;
  bool passed() const { return failing_cells.empty(); }
};

/// Checks min eig(gt) > 0 and lambda_min(gt, g) >= 55/64 - 1e-9 on every cell.
SpdReport spd_check(const MetricField& gt, const MetricField& g);

/// max over cells of max |gt + w(x)w/4 - g| / max |g|.
double reconstruction_residual(const MetricField& gt, const MetricField& g, const CovectorField& w);

}  // namespace proper_lift
