#include "grhs/soliton.hpp"

#include <algorithm>
#include <cmath>

#include "grhs/error.hpp"
#include "grhs/parallel.hpp"

namespace grhs {

namespace {

Matrix diag_of(const SemiEuclideanFactor& factor) {
  const auto n = static_cast<Eigen::Index>(factor.dim());
  Matrix d = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) d(i, i) = factor.epsilon(static_cast<std::size_t>(i));
  return d;
}

Matrix outer(const InvariantDirection& a) {
  const auto n = static_cast<Eigen::Index>(a.dim());
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = a[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(j)];
  }
  return out;
}

void require_base_placement(const WarpedCandidate& c) {
  if (c.u_placement != Placement::Base) throw ConfigError("operation needs the harmonic map on the base");
}

}  // namespace

SolitonResidual grhs_residual(const WarpedCandidate& c, double xi, double zeta) {
  c.validate();
  c.require_positive(xi, zeta);
  const double fv = c.f(xi);
  SolitonResidual r;
  r.tensor = warped_ricci(c, xi, zeta);

  const Matrix gb = base_metric(c, xi);
  r.tensor.base += conformal_hessian(c.h, c.phi, c.alpha, c.base, xi) - c.lambda * gb;

  const Matrix gf = fiber_metric(c, zeta);
  const double grad_fh = conformal_pairing(c.f, c.h, c.phi, c.alpha, c.base, xi);
  r.tensor.fiber += (fv * grad_fh - c.lambda * fv * fv) * gf;

  if (c.u_placement == Placement::Base) {
    r.tensor.base -= c.theta * gradient_outer(c.u, c.alpha, xi);
    r.harmonic = conformal_laplacian(c.u, c.phi, c.alpha, c.base, xi) +
                 static_cast<double>(c.m()) / fv * conformal_pairing(c.u, c.f, c.phi, c.alpha, c.base, xi) -
                 conformal_pairing(c.u, c.h, c.phi, c.alpha, c.base, xi);
  } else {
    r.tensor.fiber -= c.theta * gradient_outer(c.u, *c.beta, zeta);
    r.harmonic = conformal_laplacian(c.u, *c.tau, *c.beta, c.fiber, zeta) / (fv * fv);
  }
  return r;
}

std::array<double, 4> reduced_residuals_base(const WarpedCandidate& c, double xi) {
  c.validate();
  require_base_placement(c);
  if (c.tau) throw ConfigError("the base-placement system needs a generic Einstein fiber (no tau)");
  c.require_positive(xi, 0.0);
  const Jet p = c.phi.eval(xi), f = c.f.eval(xi), h = c.h.eval(xi), u = c.u.eval(xi);
  const double n = static_cast<double>(c.n()), m = static_cast<double>(c.m());
  const double a = c.alpha.norm_sq();
  const double pp = p.d1 / p.value, ff = f.d1 / f.value;

  std::array<double, 4> e{};
  e[0] = (n - 2.0) * p.d2 / p.value - m * f.d2 / f.value - 2.0 * m * pp * ff + h.d2 + 2.0 * pp * h.d1 -
         c.theta * u.d1 * u.d1;
  e[1] = (p.d2 / p.value - (n - 1.0) * pp * pp + m * pp * ff - pp * h.d1) * a - c.lambda / (p.value * p.value);
  e[2] = (f.d2 / f.value - (n - 2.0) * pp * ff + (m - 1.0) * ff * ff - ff * h.d1) * a -
         c.mu / (f.value * f.value * p.value * p.value) + c.lambda / (p.value * p.value);
  e[3] = (u.d2 - (n - 2.0) * pp * u.d1 + m * u.d1 * ff - u.d1 * h.d1) * a;
  return e;
}

std::array<double, 5> reduced_residuals_fiber(const WarpedCandidate& c, double xi, double zeta) {
  c.validate();
  if (c.u_placement != Placement::Fiber) throw ConfigError("the fiber-placement system needs u on the fiber");
  c.require_positive(xi, zeta);
  const Jet p = c.phi.eval(xi), f = c.f.eval(xi), h = c.h.eval(xi);
  const Jet t = c.tau->eval(zeta), u = c.u.eval(zeta);
  const double n = static_cast<double>(c.n()), m = static_cast<double>(c.m());
  const double a = c.alpha.norm_sq(), b = c.beta->norm_sq();
  const double pp = p.d1 / p.value, ff = f.d1 / f.value;

  std::array<double, 5> e{};
  e[0] = (n - 2.0) * p.d2 / p.value - m * f.d2 / f.value - 2.0 * m * pp * ff + h.d2 + 2.0 * pp * h.d1;
  e[1] = (p.d2 / p.value - (n - 1.0) * pp * pp + m * pp * ff - pp * h.d1) * a - c.lambda / (p.value * p.value);
  const double bracket = f.value * f.d2 - (n - 2.0) * pp * f.value * f.d1 + (m - 1.0) * f.d1 * f.d1 -
                         f.value * f.d1 * h.d1;
  e[2] = a * p.value * p.value * bracket + c.lambda * f.value * f.value -
         b * (t.value * t.d2 - (m - 1.0) * t.d1 * t.d1);
  e[3] = (m - 2.0) * t.d2 / t.value - c.theta * u.d1 * u.d1;
  e[4] = (t.value * t.value * u.d2 - (m - 2.0) * t.value * t.d1 * u.d1) * b;
  return e;
}

SolitonResidual reconstruct_from_reduced(const WarpedCandidate& c, double xi, double zeta) {
  SolitonResidual r;
  r.tensor = BlockMatrix::zero(c.n(), c.m());
  const double pv = c.phi(xi), fv = c.f(xi);
  if (c.u_placement == Placement::Base) {
    const auto e = reduced_residuals_base(c, xi);
    r.tensor.base = e[0] * outer(c.alpha) + e[1] * diag_of(c.base);
    r.tensor.fiber = -fv * fv * pv * pv * e[2] * diag_of(c.fiber);
    r.harmonic = pv * pv * e[3];
  } else {
    const auto e = reduced_residuals_fiber(c, xi, zeta);
    const double tv = (*c.tau)(zeta);
    r.tensor.base = e[0] * outer(c.alpha) + e[1] * diag_of(c.base);
    r.tensor.fiber = e[3] * outer(*c.beta) - (e[2] / (tv * tv)) * diag_of(c.fiber);
    r.harmonic = e[4] / (fv * fv);
  }
  return r;
}

double mu_constant(const WarpedCandidate& c, double xi) {
  c.validate();
  const double fv = c.f(xi);
  if (!(fv > 0.0)) throw DomainError("warping function f is not positive");
  const double m = static_cast<double>(c.m());
  return fv * conformal_laplacian(c.f, c.phi, c.alpha, c.base, xi) +
         (m - 1.0) * conformal_grad_norm_sq(c.f, c.phi, c.alpha, c.base, xi) + c.lambda * fv * fv -
         fv * conformal_pairing(c.f, c.h, c.phi, c.alpha, c.base, xi);
}

double drift_laplacian(const WarpedCandidate& c, double xi) {
  c.validate();
  require_base_placement(c);
  const double fv = c.f(xi);
  if (!(fv > 0.0)) throw DomainError("warping function f is not positive");
  const double m = static_cast<double>(c.m());
  const Profile omega = c.h - m * log(c.f);
  return conformal_laplacian(c.u, c.phi, c.alpha, c.base, xi) -
         conformal_pairing(c.u, omega, c.phi, c.alpha, c.base, xi);
}

double xi_operator(const WarpedCandidate& c, double xi) {
  c.validate();
  const double fv = c.f(xi);
  if (!(fv > 0.0)) throw DomainError("warping function f is not positive");
  const double m = static_cast<double>(c.m());
  const double op = conformal_laplacian(c.f, c.phi, c.alpha, c.base, xi) -
                    conformal_pairing(c.h, c.f, c.phi, c.alpha, c.base, xi) +
                    (m - 1.0) / fv * conformal_grad_norm_sq(c.f, c.phi, c.alpha, c.base, xi);
  return op - (c.mu - c.lambda * fv * fv) / fv;
}

std::vector<GridSample> GridSpec::samples() const {
  if (count == 0) throw ConfigError("grid needs at least one point");
  auto ends = [this](const Interval& d) {
    if (!std::isfinite(d.lo) || !std::isfinite(d.hi) || !(d.hi >= d.lo)) {
      throw ConfigError("grid interval must be finite and ordered");
    }
    const double w = d.hi - d.lo;
    return std::pair{d.lo_closed ? d.lo : d.lo + shrink * w, d.hi_closed ? d.hi : d.hi - shrink * w};
  };
  const auto [x0, x1] = ends(xi);
  const auto [z0, z1] = ends(zeta);
  std::vector<GridSample> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double s = count == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(count - 1);
    out[i] = {x0 + s * (x1 - x0), z0 + s * (z1 - z0)};
    if (count > 1 && i + 1 == count) out[i] = {x1, z1};
  }
  return out;
}

GridSpec default_grid(const WarpedCandidate& c) {
  GridSpec g;
  g.xi = working_xi_interval(c);
  g.zeta = working_zeta_interval(c);
  return g;
}

double default_tolerance(const WarpedCandidate& c) { return c.is_numerical() ? 1e-6 : 1e-8; }

std::optional<double> ResidualReport::residual(std::string_view id) const {
  for (std::size_t i = 0; i < equations.size(); ++i) {
    if (equations[i] == id) return sup_residuals[i];
  }
  return std::nullopt;
}

std::vector<std::string> ResidualReport::failing() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < equations.size(); ++i) {
    if (!(sup_residuals[i] <= tolerance)) out.push_back(equations[i]);
  }
  return out;
}

namespace {

enum class ReducedSystem { None, Base, Fiber };

ReducedSystem reduced_system(const WarpedCandidate& c) {
  if (c.u_placement == Placement::Fiber) return ReducedSystem::Fiber;
  return c.tau ? ReducedSystem::None : ReducedSystem::Base;
}

}  // namespace

ResidualReport verify(const WarpedCandidate& c, const GridSpec& grid, double tolerance) {
  c.validate();
  if (!(tolerance > 0.0)) throw ConfigError("tolerance must be positive");
  const ReducedSystem system = reduced_system(c);

  ResidualReport report;
  report.candidate = c.name;
  report.tolerance = tolerance;
  report.grid = grid.samples();
  report.equations = {"grhs.base", "grhs.mixed", "grhs.fiber", "grhs.harmonic"};
  if (system == ReducedSystem::Base) {
    for (const char* id : {"base.E1", "base.E2", "base.E3", "base.E4"}) report.equations.emplace_back(id);
  } else if (system == ReducedSystem::Fiber) {
    for (const char* id : {"fiber.E1", "fiber.E2", "fiber.E3", "fiber.E4", "fiber.E5"}) {
      report.equations.emplace_back(id);
    }
  }
  const std::size_t reduced_end = report.equations.size();
  report.equations.emplace_back("mu-const");
  const bool base_u = c.u_placement == Placement::Base;
  if (base_u) report.equations.emplace_back("drift");
  if (!c.tau) report.equations.emplace_back("xi-op");

  const std::size_t count = report.grid.size();
  const std::size_t width = report.equations.size();
  // Per point: |residual| per equation, with the mu value stored in the mu-const slot.
  std::vector<std::vector<double>> rows(count, std::vector<double>(width, 0.0));
  parallel_for(count, [&](std::size_t i) {
    const GridSample s = report.grid[i];
    std::vector<double>& row = rows[i];
    const SolitonResidual r = grhs_residual(c, s.xi, s.zeta);
    row[0] = r.tensor.max_abs_base();
    row[1] = r.tensor.max_abs_mixed();
    row[2] = r.tensor.max_abs_fiber();
    row[3] = std::abs(r.harmonic);
    std::size_t k = 4;
    if (system == ReducedSystem::Base) {
      for (double e : reduced_residuals_base(c, s.xi)) row[k++] = std::abs(e);
    } else if (system == ReducedSystem::Fiber) {
      for (double e : reduced_residuals_fiber(c, s.xi, s.zeta)) row[k++] = std::abs(e);
    }
    row[k++] = mu_constant(c, s.xi);
    if (base_u) row[k++] = std::abs(drift_laplacian(c, s.xi));
    if (!c.tau) row[k++] = std::abs(xi_operator(c, s.xi));
  });

  report.sup_residuals.assign(width, 0.0);
  double mu_lo = rows[0][reduced_end], mu_hi = mu_lo;
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < width; ++k) {
      if (k == reduced_end) continue;
      report.sup_residuals[k] = std::max(report.sup_residuals[k], row[k]);
    }
    mu_lo = std::min(mu_lo, row[reduced_end]);
    mu_hi = std::max(mu_hi, row[reduced_end]);
  }
  report.sup_residuals[reduced_end] = mu_hi - mu_lo;
  report.passed = std::all_of(report.sup_residuals.begin(), report.sup_residuals.end(),
                              [&](double v) { return v <= tolerance; });
  return report;
}

ResidualReport verify(const WarpedCandidate& c) { return verify(c, default_grid(c), default_tolerance(c)); }

}  // namespace grhs
