#pragma once

#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "grhs/candidate.hpp"
#include "grhs/ode.hpp"

namespace grhs {

struct GeodesicState {
  double s = 0.0;
  Vector position;
  Vector velocity;
};

enum class Termination { ReachedSMax, StepCollapse, Diverged };
std::string_view to_string(Termination t);

struct GeodesicOptions {
  double tol = 1e-10;
  double min_step_factor = 1e-12;
  double max_norm = 1e12;
  // Dense samples per direction, end points included.
  std::size_t samples = 401;
};

struct GeodesicTrajectory {
  std::vector<GeodesicState> samples;  // strictly increasing s
  std::vector<double> drift;           // g(v, v) - g(v0, v0) per sample
  Termination termination = Termination::ReachedSMax;
  Termination forward = Termination::ReachedSMax;
  Termination backward = Termination::ReachedSMax;
  double s_forward = 0.0;   // parameter reached in +s
  double s_backward = 0.0;  // parameter reached in -s
  double stop_norm = 0.0;   // state norm where a direction stopped early
  double causal_character = 0.0;
  double max_drift = 0.0;

  bool early() const { return termination != Termination::ReachedSMax; }
  /// CSV with header s, x1.., v1.., drift.
  void write_csv(std::ostream& os) const;
};

/// g(v, v) at x for the metric phi^-2 g0 (+) f^2 tau^-2 g0'.
double metric_norm(const WarpedCandidate& c, const Vector& x, const Vector& v);

/// -Gamma^k_ij v^i v^j from the closed-form Christoffel symbols of the diagonal metric.
Vector geodesic_acceleration(const WarpedCandidate& c, const Vector& x, const Vector& v);

/// Same acceleration from the warped-product split: base
/// -Gamma_B(v_B, v_B) + g_F(v_F, v_F) f grad_B f, fiber
/// -Gamma_F(v_F, v_F) - (2/f)(df/ds) v_F.
Vector geodesic_acceleration_split(const WarpedCandidate& c, const Vector& x, const Vector& v);

/// State derivative (v, a) for the stacked state (x, v).
Vector geodesic_rhs(const WarpedCandidate& c, const Vector& state);

/// Integrates from init to init.s + s_max and init.s - s_max.
GeodesicTrajectory integrate_geodesic(const WarpedCandidate& c, const GeodesicState& init, double s_max,
                                      const GeodesicOptions& options = {});

enum class CausalClass { Null, Timelike, Spacelike };
std::string_view to_string(CausalClass k);

/// Random initial state at x in [-spread, spread]^(n+m) with the requested
/// causal character, or the nearest available one when the metric signature
/// rules it out.
GeodesicState sample_initial_state(const WarpedCandidate& c, CausalClass kind, std::mt19937_64& rng,
                                   double spread = 1.0);

struct ProbeOptions {
  std::size_t count = 50;
  double s_max = 1e3;
  std::uint64_t seed = 0;
  double spread = 1.0;
  GeodesicOptions geodesic;
};

struct ProbeEntry {
  CausalClass kind = CausalClass::Null;
  double causal_character = 0.0;
  Termination termination = Termination::ReachedSMax;
  double s_forward = 0.0;
  double s_backward = 0.0;
  double max_drift = 0.0;
  // Gallery 1.8 only: the acceleration bound and sup |y1''| over the samples.
  double accel_bound = 0.0;
  double sup_y1_accel = 0.0;
  bool bound_holds = true;
};

struct ProbeSummary {
  std::string candidate;
  std::size_t count = 0;
  std::size_t early_terminations = 0;
  double s_max = 0.0;
  double max_drift = 0.0;
  bool bound_checked = false;
  std::size_t bound_violations = 0;
  std::uint64_t seed = 0;
  std::vector<ProbeEntry> entries;

  /// Never a completeness claim.
  std::string verdict() const;
};

/// Integrates count seeded geodesics (null, timelike, spacelike in turn).
/// For gallery 1.8 candidates also checks |y1''| <= |k^4 A g0'(v_F, v_F) e^(4 A xi(0))|
/// at every sample.
ProbeSummary completeness_probe(const WarpedCandidate& c, const ProbeOptions& options);

/// Fiber coordinates at s predicted by the linear fiber system with
/// c1 = alpha . v_B(0) held constant: linear when c1 = 0, else
/// y(0) + v(0) (1 - e^(-2 A c1 s)) / (2 A c1).
Vector gallery_1_8_fiber_closed_form(const GeodesicState& init, std::size_t n, double A, double s);

}  // namespace grhs
