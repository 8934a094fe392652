#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "grhs/core.hpp"
#include "grhs/profile.hpp"

namespace grhs {

enum class Placement { Base, Fiber };

std::string_view to_string(Placement p);
Placement placement_from_string(std::string_view s);

/// Full GRHS candidate on (R^n, phi^-2 g0) x_f (R^m, tau^-2 g0').
///
/// phi, f and h are functions of xi = alpha . x_B; tau and a fiber-placed u
/// are functions of zeta = beta . x_F. Without tau the fiber is a generic
/// Einstein manifold with Ric_F = mu g_F, represented on R^m with g_F = g0'.
struct WarpedCandidate {
  std::string name;
  SemiEuclideanFactor base = SemiEuclideanFactor::euclidean(1);
  InvariantDirection alpha{{1.0}, SemiEuclideanFactor::euclidean(1)};
  Profile phi = Profile::constant(1.0);
  SemiEuclideanFactor fiber = SemiEuclideanFactor::euclidean(1);
  std::optional<InvariantDirection> beta;
  std::optional<Profile> tau;
  Profile f = Profile::constant(1.0);
  Profile h = Profile::constant(0.0);
  Profile u = Profile::constant(0.0);
  Placement u_placement = Placement::Base;
  double theta = 0.0;
  double lambda = 0.0;
  double mu = 0.0;

  std::size_t n() const { return base.dim(); }
  std::size_t m() const { return fiber.dim(); }
  bool is_numerical() const;

  /// Dimension and sign checks; throws ConfigError.
  void validate() const;
  /// Checks phi, f (and tau) are strictly positive at the given point.
  void require_positive(double xi, double zeta) const;

  /// Same candidate with tau = 1 and beta = e_1 made explicit when tau is absent.
  WarpedCandidate with_explicit_fiber() const;
};

/// Working intervals for xi and zeta: the profile domains, clipped to
/// [-5, 5] when unbounded.
Interval working_xi_interval(const WarpedCandidate& c);
Interval working_zeta_interval(const WarpedCandidate& c);

}  // namespace grhs
