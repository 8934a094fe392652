#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grhs/candidate.hpp"
#include "grhs/curvature.hpp"

namespace grhs {

/// Ric + Hess h - theta du (x) du - lambda g, and tau_g u - g(grad u, grad h).
struct SolitonResidual {
  BlockMatrix tensor;
  double harmonic = 0.0;
};

/// Direct assembly from the curvature operators on the warped metric.
/// Throws ConfigError when u is placed on the fiber without tau.
SolitonResidual grhs_residual(const WarpedCandidate& candidate, double xi, double zeta);

/// E1..E4 for u on the base and a generic Einstein fiber (tau absent).
std::array<double, 4> reduced_residuals_base(const WarpedCandidate& candidate, double xi);

/// E1..E5 for u on a conformal fiber tau. E3 carries the tau^2 factor of the
/// fiber Ricci bracket, E5 = [tau^2 u'' - (m-2) tau tau' u'] ||beta||^2.
std::array<double, 5> reduced_residuals_fiber(const WarpedCandidate& candidate, double xi, double zeta);

/// Rebuilds the residual tensor and harmonic residual from the reduced
/// equations alone. Matches grhs_residual for every candidate the reduced
/// systems apply to.
SolitonResidual reconstruct_from_reduced(const WarpedCandidate& candidate, double xi, double zeta);

/// f Lap f + (m-1)|grad f|^2 + lambda f^2 - f <grad f, grad h> on the base.
double mu_constant(const WarpedCandidate& candidate, double xi);

/// Lap u - <grad u, grad omega> with omega = h - m log f; u on the base.
double drift_laplacian(const WarpedCandidate& candidate, double xi);

/// Xi(f) - (mu - lambda f^2)/f with Xi = Lap - <grad h, grad .> + (m-1)/f <grad f, grad .>.
double xi_operator(const WarpedCandidate& candidate, double xi);

struct GridSample {
  double xi = 0.0;
  double zeta = 0.0;
};

/// count uniform samples of xi (and zeta, zipped). Open endpoints are pulled
/// in by shrink times the width.
struct GridSpec {
  Interval xi = Interval::closed(-5.0, 5.0);
  Interval zeta = Interval::closed(-5.0, 5.0);
  std::size_t count = 101;
  double shrink = 0.01;

  std::vector<GridSample> samples() const;
};

/// Grid over the candidate's working intervals.
GridSpec default_grid(const WarpedCandidate& candidate);
/// 1e-8 for closed-form candidates, 1e-6 when a profile holds quadrature or ODE leaves.
double default_tolerance(const WarpedCandidate& candidate);

struct ResidualReport {
  std::string candidate;
  std::vector<std::string> equations;
  std::vector<double> sup_residuals;
  std::vector<GridSample> grid;
  double tolerance = 0.0;
  bool passed = false;

  std::optional<double> residual(std::string_view id) const;
  /// Ids of the equations above tolerance.
  std::vector<std::string> failing() const;
};

/// Runs the direct assembly, the applicable reduced system and the
/// diagnostics over the grid and aggregates sup-norms.
ResidualReport verify(const WarpedCandidate& candidate, const GridSpec& grid, double tolerance);
ResidualReport verify(const WarpedCandidate& candidate);

}  // namespace grhs
