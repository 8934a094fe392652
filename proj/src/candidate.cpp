#include "grhs/candidate.hpp"

#include <algorithm>
#include <cmath>

#include "grhs/error.hpp"

namespace grhs {

std::string_view to_string(Placement p) { return p == Placement::Base ? "base" : "fiber"; }

Placement placement_from_string(std::string_view s) {
  if (s == "base") return Placement::Base;
  if (s == "fiber") return Placement::Fiber;
  throw ConfigError("u_placement must be \"base\" or \"fiber\"");
}

bool WarpedCandidate::is_numerical() const {
  return phi.is_numerical() || f.is_numerical() || h.is_numerical() || u.is_numerical() ||
         (tau && tau->is_numerical());
}

void WarpedCandidate::validate() const {
  if (alpha.dim() != base.dim()) throw ConfigError("alpha does not match the base dimension");
  if (beta && beta->dim() != fiber.dim()) throw ConfigError("beta does not match the fiber dimension");
  if (tau && !beta) throw ConfigError("a fiber conformal factor tau needs a direction beta");
  if (!(theta >= 0.0)) throw ConfigError("theta must be non-negative");
  if (!std::isfinite(lambda) || !std::isfinite(mu)) throw ConfigError("lambda and mu must be finite");
  if (u_placement == Placement::Fiber && !tau) {
    throw ConfigError("a fiber-placed harmonic map needs the fiber conformal factor tau");
  }
}

void WarpedCandidate::require_positive(double xi, double zeta) const {
  if (!(phi(xi) > 0.0)) throw DomainError("conformal factor phi is not positive");
  if (!(f(xi) > 0.0)) throw DomainError("warping function f is not positive");
  if (tau && !((*tau)(zeta) > 0.0)) throw DomainError("fiber conformal factor tau is not positive");
}

WarpedCandidate WarpedCandidate::with_explicit_fiber() const {
  if (tau) return *this;
  if (mu != 0.0) {
    throw ConfigError("an Einstein fiber with mu != 0 has no flat coordinate representation");
  }
  WarpedCandidate out = *this;
  std::vector<double> e1(fiber.dim(), 0.0);
  e1[0] = 1.0;
  out.beta = InvariantDirection(std::move(e1), fiber);
  out.tau = Profile::constant(1.0);
  return out;
}

namespace {

Interval clip(Interval d) {
  constexpr double kSpan = 5.0;
  if (!std::isfinite(d.lo) && !std::isfinite(d.hi)) return Interval::closed(-kSpan, kSpan);
  if (!std::isfinite(d.lo)) return Interval{d.hi - 2 * kSpan, d.hi, true, d.hi_closed};
  if (!std::isfinite(d.hi)) return Interval{d.lo, d.lo + 2 * kSpan, d.lo_closed, true};
  return d;
}

}  // namespace

Interval working_xi_interval(const WarpedCandidate& c) {
  return clip(c.phi.domain().intersect(c.f.domain()).intersect(c.h.domain()).intersect(
      c.u_placement == Placement::Base ? c.u.domain() : Interval::all()));
}

Interval working_zeta_interval(const WarpedCandidate& c) {
  Interval d = c.tau ? c.tau->domain() : Interval::all();
  if (c.u_placement == Placement::Fiber) d = d.intersect(c.u.domain());
  return clip(d);
}

}  // namespace grhs
