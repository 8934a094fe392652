#include "grhs/constructor.hpp"

#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>

#include "grhs/error.hpp"

namespace grhs {

std::string_view to_string(ZMode mode) { return mode == ZMode::Constant ? "constant" : "variable"; }
std::string_view to_string(PsiForm form) { return form == PsiForm::Corrected ? "corrected" : "printed"; }

ZMode z_mode_from_string(std::string_view s) {
  if (s == "constant") return ZMode::Constant;
  if (s == "variable") return ZMode::Variable;
  throw ConfigError("z_mode must be \"constant\" or \"variable\"");
}

PsiForm psi_form_from_string(std::string_view s) {
  if (s == "corrected") return PsiForm::Corrected;
  if (s == "printed") return PsiForm::Printed;
  throw ConfigError("psi form must be \"corrected\" or \"printed\"");
}

double case3_root(std::size_t n, std::size_t m, double k) {
  return std::sqrt(static_cast<double>(m) + k * k * (static_cast<double>(n) - 1.0));
}

double case3_n(std::size_t n, std::size_t m, double k, int branch) {
  return -k + (branch >= 0 ? 1.0 : -1.0) * case3_root(n, m, k);
}

namespace {

bool base_null(int id) { return id == 1 || id == 2; }
bool fiber_null(int id) { return id == 1 || id == 3; }

struct FactorChoice {
  SemiEuclideanFactor factor;
  InvariantDirection direction;
};

FactorChoice choose_factor(const std::optional<std::vector<int>>& signature,
                           const std::optional<std::vector<double>>& direction, std::size_t dim, bool null,
                           const char* which) {
  SemiEuclideanFactor factor = signature ? SemiEuclideanFactor(*signature)
                               : null   ? SemiEuclideanFactor::lorentzian(dim)
                                        : SemiEuclideanFactor::euclidean(dim);
  if (factor.dim() != dim) throw ConfigError(std::string(which) + " signature length does not match its dimension");
  std::vector<double> coeffs;
  if (direction) {
    coeffs = *direction;
  } else {
    coeffs.assign(dim, 0.0);
    if (null) {
      if (dim < 2) throw ConfigError(std::string(which) + " needs dimension >= 2 for a null direction");
      coeffs[0] = 1.0;
      coeffs[1] = 1.0;
    } else {
      coeffs[0] = 1.0;
    }
  }
  InvariantDirection d(std::move(coeffs), factor);
  const double want = null ? 0.0 : 1.0;
  if (std::abs(d.norm_sq() - want) > 1e-12) {
    throw ConfigError(std::string(which) + " direction must have pseudo-norm " + (null ? "0" : "1") + " for this case");
  }
  return {std::move(factor), std::move(d)};
}

double midpoint(const Interval& d) {
  if (!std::isfinite(d.lo) || !std::isfinite(d.hi)) throw ConfigError("working interval must be finite");
  return 0.5 * (d.lo + d.hi);
}

WarpedCandidate skeleton(const CaseParams& p, const std::string& name) {
  p.validate();
  WarpedCandidate c;
  c.name = name;
  auto base = choose_factor(p.base_signature, p.alpha, p.n, base_null(p.case_id), "base");
  auto fiber = choose_factor(p.fiber_signature, p.beta, p.m, fiber_null(p.case_id), "fiber");
  c.base = std::move(base.factor);
  c.alpha = std::move(base.direction);
  c.fiber = std::move(fiber.factor);
  c.beta = std::move(fiber.direction);
  c.theta = p.theta;
  c.lambda = 0.0;
  c.mu = 0.0;
  c.u_placement = Placement::Fiber;
  return c;
}

// phi, f, h from the constant-z closed forms.
void case3_constant_base(const CaseParams& p, WarpedCandidate& c) {
  const double N = case3_n(p.n, p.m, p.k, p.n_branch);
  const Profile w = N * Profile::identity() + p.b;
  const double n = static_cast<double>(p.n), m = static_cast<double>(p.m);
  c.phi = p.c[4] * pow(w, -p.k / N);
  c.f = p.c[5] * pow(w, -1.0 / N);
  c.h = (-(m - (n - 2.0) * p.k + N) / N) * log(w);
}

void case3_variable_base(const CaseParams& p, WarpedCandidate& c) {
  PsiZSource::Params q;
  q.n = p.n;
  q.m = p.m;
  q.k = p.k;
  q.c6 = p.c[6];
  q.z0 = p.z0;
  q.xi0 = p.xi0;
  q.span = p.xi_span;
  q.h0 = p.h_c2;
  q.form = p.psi_form;
  auto source = PsiZSource::integrate(q);
  const Profile log_f = Profile::ode_state(source, 1);
  c.f = p.c[5] * exp(log_f);
  c.phi = p.c[4] * exp(p.k * log_f);
  c.h = Profile::ode_state(source, 2);
}

// tau and u of Case 2.
void case2_fiber(const CaseParams& p, WarpedCandidate& c) {
  const double m = static_cast<double>(p.m);
  const Profile w = p.c[1] + (m - 2.0) * Profile::identity();
  c.tau = (p.c[2] * pow(w, 1.0 / (2.0 - m)))
              .restricted(Interval::open(-p.c[1] / (m - 2.0), std::numeric_limits<double>::infinity()));
  const double slope = std::sqrt((m - 1.0) * (m - 2.0) / p.theta) / (m - 2.0);
  c.u = p.c[3] + (p.u_sign * slope) * log(w);
}

}  // namespace

void CaseParams::validate() const {
  if (case_id < 1 || case_id > 4) throw ConfigError("case must be 1, 2, 3 or 4");
  if (m < 3) throw ConfigError("the steady cases need m >= 3");
  if (n < 1) throw ConfigError("n must be positive");
  if (!(theta > 0.0)) throw ConfigError("theta must be positive for a non-constant harmonic map");
  if (u_sign != 1 && u_sign != -1) throw ConfigError("u_sign must be +1 or -1");
  if (n_branch != 1 && n_branch != -1) throw ConfigError("n_branch must be +1 or -1");
  if (!(quad_tol > 0.0)) throw ConfigError("quadrature tolerance must be positive");
  for (double v : c) {
    if (!std::isfinite(v)) throw ConfigError("constants must be finite");
  }
  if (base_null(case_id) && (!phi || !f)) throw ConfigError("cases 1 and 2 need the profiles phi and f");
  if (fiber_null(case_id) && !tau) throw ConfigError("cases 1 and 3 need the fiber profile tau");
  if ((case_id == 2 || case_id == 4) && !(c[2] > 0.0)) throw ConfigError("c2 must be positive");
  if (case_id >= 3) {
    if (z_mode == ZMode::Constant) {
      if (!(k > 0.0)) throw ConfigError("k must be positive");
      if (!(c[4] > 0.0) || !(c[5] > 0.0)) throw ConfigError("c4 and c5 must be positive");
      if (case3_n(n, m, k, n_branch) == 0.0) throw ConfigError("N vanishes; the exponents are degenerate");
    } else {
      if (!(k >= 0.0)) throw ConfigError("k must be non-negative");
      if (!(c[6] >= 0.0)) throw ConfigError("c6 must be non-negative");
      if (!(c[4] > 0.0) || !(c[5] > 0.0)) throw ConfigError("c4 and c5 must be positive");
      if (!(xi_span > 0.0)) throw ConfigError("xi_span must be positive");
      if (!(z0 + k - case3_root(n, m, k) > 0.0)) {
        throw ConfigError("initial z must satisfy z + k - sqrt(m + k^2 (n-1)) > 0");
      }
    }
  }
}

CaseParams default_case_params(int case_id) {
  CaseParams p;
  p.case_id = case_id;
  const Profile t = Profile::identity();
  switch (case_id) {
    case 1:
      p.phi = exp(t);
      p.f = exp(t);
      p.tau = t * t + 1.0;
      break;
    case 2:
      p.phi = exp(t);
      p.f = exp(t);
      break;
    case 3:
      p.n = 2;
      p.tau = exp(t);
      p.xi_interval = Interval::closed(0.0, 5.0);
      p.zeta_interval = Interval::closed(-2.0, 2.0);
      break;
    case 4:
      p.n = 2;
      p.xi_interval = Interval::closed(0.0, 5.0);
      break;
    default: throw ConfigError("case must be 1, 2, 3 or 4");
  }
  return p;
}

Profile potential_from_quadrature(const Profile& phi, const Profile& f, std::size_t n, std::size_t m,
                                  double c1, double c2, const Interval& xi_interval, double tol) {
  const double nd = static_cast<double>(n), md = static_cast<double>(m);
  const Profile dphi = phi.derivative();
  const Profile df = f.derivative();
  const Profile g = md * df.derivative() * phi * phi / f + 2.0 * md * phi * dphi * df / f -
                    (nd - 2.0) * phi * dphi.derivative();
  const double ref = midpoint(xi_interval);
  const Profile inner = Profile::antiderivative(g, ref, c1, tol / 10.0);
  return Profile::antiderivative(inner / (phi * phi), ref, c2, tol);
}

Profile harmonic_from_tau(const Profile& tau, std::size_t m, double theta, int sign, double c3,
                          const Interval& zeta_interval, double tol) {
  const Profile radicand = ((static_cast<double>(m) - 2.0) / theta) * tau.derivative().derivative() / tau;
  constexpr std::size_t kChecks = 201;
  const double mid = midpoint(zeta_interval);
  const double lo = zeta_interval.lo, hi = zeta_interval.hi;
  for (std::size_t i = 0; i < kChecks; ++i) {
    double z = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(kChecks - 1);
    if (!zeta_interval.contains(z)) continue;
    if (radicand(z) < 0.0) {
      std::ostringstream os;
      os << "negative radicand (m-2)/theta tau''/tau at zeta = " << z;
      throw DomainError(os.str());
    }
  }
  return Profile::antiderivative(static_cast<double>(sign) * sqrt(radicand), mid, c3, tol);
}

namespace {

// Profiles live on the caller's working intervals.
WarpedCandidate confine(WarpedCandidate c, const CaseParams& p) {
  c.phi = c.phi.restricted(p.xi_interval);
  c.f = c.f.restricted(p.xi_interval);
  c.h = c.h.restricted(p.xi_interval);
  if (c.tau) c.tau = c.tau->restricted(p.zeta_interval);
  c.u = c.u.restricted(c.u_placement == Placement::Base ? p.xi_interval : p.zeta_interval);
  return c;
}

}  // namespace

WarpedCandidate construct_case1(const CaseParams& p) {
  if (p.case_id != 1) throw ConfigError("construct_case1 needs case 1 parameters");
  WarpedCandidate c = skeleton(p, "case1");
  c.phi = *p.phi;
  c.f = *p.f;
  c.tau = *p.tau;
  c.h = potential_from_quadrature(c.phi, c.f, p.n, p.m, p.h_c1, p.h_c2, p.xi_interval, p.quad_tol);
  c.u = harmonic_from_tau(*c.tau, p.m, p.theta, p.u_sign, p.c[3], p.zeta_interval, p.quad_tol);
  return confine(std::move(c), p);
}

WarpedCandidate construct_case2(const CaseParams& p) {
  if (p.case_id != 2) throw ConfigError("construct_case2 needs case 2 parameters");
  WarpedCandidate c = skeleton(p, "case2");
  c.phi = *p.phi;
  c.f = *p.f;
  c.h = potential_from_quadrature(c.phi, c.f, p.n, p.m, p.h_c1, p.h_c2, p.xi_interval, p.quad_tol);
  case2_fiber(p, c);
  return confine(std::move(c), p);
}

WarpedCandidate construct_case3_constant_z(const CaseParams& p) {
  if (p.case_id != 3) throw ConfigError("construct_case3 needs case 3 parameters");
  CaseParams q = p;
  q.z_mode = ZMode::Constant;
  WarpedCandidate c = skeleton(q, "case3-constant-z");
  case3_constant_base(q, c);
  c.tau = *q.tau;
  c.u = harmonic_from_tau(*c.tau, q.m, q.theta, q.u_sign, q.c[3], q.zeta_interval, q.quad_tol);
  return confine(std::move(c), q);
}

WarpedCandidate construct_case3_variable_z(const CaseParams& p) {
  if (p.case_id != 3) throw ConfigError("construct_case3 needs case 3 parameters");
  CaseParams q = p;
  q.z_mode = ZMode::Variable;
  WarpedCandidate c = skeleton(q, "case3-variable-z");
  case3_variable_base(q, c);
  c.tau = *q.tau;
  c.u = harmonic_from_tau(*c.tau, q.m, q.theta, q.u_sign, q.c[3], q.zeta_interval, q.quad_tol);
  return confine(std::move(c), q);
}

WarpedCandidate construct_case4(const CaseParams& p) {
  if (p.case_id != 4) throw ConfigError("construct_case4 needs case 4 parameters");
  WarpedCandidate c = skeleton(p, "case4");
  if (p.z_mode == ZMode::Constant) {
    case3_constant_base(p, c);
  } else {
    case3_variable_base(p, c);
  }
  case2_fiber(p, c);
  return confine(std::move(c), p);
}

WarpedCandidate construct(const CaseParams& p) {
  switch (p.case_id) {
    case 1: return construct_case1(p);
    case 2: return construct_case2(p);
    case 3: return p.z_mode == ZMode::Constant ? construct_case3_constant_z(p) : construct_case3_variable_z(p);
    case 4: return construct_case4(p);
    default: throw ConfigError("case must be 1, 2, 3 or 4");
  }
}

PsiZSource::PsiZSource(const Params& params) : params_(params) {
  root_ = case3_root(params.n, params.m, params.k);
  a_ = params.k / root_;
}

double PsiZSource::psi_exponent_q() const {
  return params_.form == PsiForm::Corrected ? -(a_ + 1.0) / 2.0 : (1.0 - a_) / 2.0;
}

double PsiZSource::z_exponent_q() const {
  return params_.form == PsiForm::Corrected ? (1.0 - a_) / 2.0 : -(a_ + 1.0) / 2.0;
}

namespace {

void require_factors(double P, double Q, double z) {
  if (!(P > 0.0) || !(Q > 0.0)) {
    std::ostringstream os;
    os << "psi-z system leaves the real branch at z = " << z << " (z + k -/+ root must stay positive)";
    throw DomainError(os.str());
  }
}

}  // namespace

double PsiZSource::psi(double z) const {
  const double P = z + params_.k - root_, Q = z + params_.k + root_;
  require_factors(P, Q, z);
  return params_.c6 * std::pow(P, (a_ - 1.0) / 2.0) * std::pow(Q, psi_exponent_q());
}

double PsiZSource::z_rate(double z) const {
  const double P = z + params_.k - root_, Q = z + params_.k + root_;
  require_factors(P, Q, z);
  return -params_.c6 * std::pow(P, (a_ + 1.0) / 2.0) * std::pow(Q, z_exponent_q());
}

Interval PsiZSource::span() const {
  return Interval::closed(params_.xi0, params_.xi0 + params_.span);
}

Eigen::VectorXd PsiZSource::state(double t) const { return trajectory_(t); }

Eigen::VectorXd PsiZSource::rate(const Eigen::VectorXd& y) const {
  const double z = y[0];
  const double ps = psi(z);
  const double drift = z + static_cast<double>(params_.m) - params_.k * (static_cast<double>(params_.n) - 2.0);
  Eigen::VectorXd r(3);
  r << z_rate(z), ps, drift * ps;
  return r;
}

Eigen::VectorXd PsiZSource::rate_derivative(const Eigen::VectorXd& y) const {
  const double z = y[0];
  const double P = z + params_.k - root_, Q = z + params_.k + root_;
  const double ps = psi(z);
  const double zr = z_rate(z);
  const double dpsi = ps * ((a_ - 1.0) / (2.0 * P) + psi_exponent_q() / Q);
  const double dzr = zr * ((a_ + 1.0) / (2.0 * P) + z_exponent_q() / Q);
  const double drift = z + static_cast<double>(params_.m) - params_.k * (static_cast<double>(params_.n) - 2.0);
  Eigen::VectorXd r(3);
  r << dzr * zr, dpsi * zr, zr * ps + drift * dpsi * zr;
  return r;
}

std::shared_ptr<const PsiZSource> PsiZSource::integrate(const Params& params) {
  std::shared_ptr<PsiZSource> src(new PsiZSource(params));
  if (!(params.span > 0.0)) throw ConfigError("psi-z span must be positive");
  if (!(params.c6 >= 0.0) || !(params.k >= 0.0)) throw ConfigError("psi-z needs k >= 0 and c6 >= 0");
  if (!(params.z0 + params.k - src->root_ > 0.0)) {
    throw ConfigError("initial z must satisfy z + k - sqrt(m + k^2 (n-1)) > 0");
  }
  Eigen::VectorXd y0(3);
  y0 << params.z0, 0.0, params.h0;
  OdeOptions opts;
  opts.rtol = params.rtol;
  opts.atol = params.atol;
  const PsiZSource* self = src.get();
  OdeResult r = integrate_dopri5([self](double, const Vector& y) { return self->rate(y); }, params.xi0, y0,
                                 params.xi0 + params.span, opts);
  if (r.status != OdeStatus::Completed) {
    std::ostringstream os;
    os << "psi-z integration stopped (" << to_string(r.status) << ") at xi = " << r.t_stop;
    if (r.status == OdeStatus::StepCollapse) throw DomainError(os.str());
    throw NumericalError(os.str());
  }
  src->trajectory_ = std::move(r.trajectory);
  return src;
}

double PsiZSource::redundant_path_spread(std::size_t count) const {
  // (z, psi_path) with psi_path' = z psi_path^2 from the closed-form psi(z0).
  Eigen::VectorXd y0(2);
  y0 << params_.z0, psi(params_.z0);
  OdeOptions opts;
  opts.rtol = params_.rtol;
  opts.atol = params_.atol;
  const OdeResult r = integrate_dopri5(
      [this](double, const Vector& y) {
        Vector d(2);
        d << z_rate(y[0]), y[0] * y[1] * y[1];
        return d;
      },
      params_.xi0, y0, params_.xi0 + params_.span, opts);
  if (r.status != OdeStatus::Completed) return std::numeric_limits<double>::infinity();
  const Interval s = span();
  double spread = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = s.lo + (s.hi - s.lo) * static_cast<double>(i) / static_cast<double>(count > 1 ? count - 1 : 1);
    const Eigen::VectorXd y = r.trajectory(t);
    spread = std::max(spread, std::abs(y[1] - psi(y[0])));
  }
  return spread;
}

std::string PsiZSource::describe_json() const {
  nlohmann::json j;
  j["kind"] = kind();
  j["n"] = params_.n;
  j["m"] = params_.m;
  j["k"] = params_.k;
  j["c6"] = params_.c6;
  j["z0"] = params_.z0;
  j["xi0"] = params_.xi0;
  j["span"] = params_.span;
  j["h0"] = params_.h0;
  j["form"] = std::string(to_string(params_.form));
  j["rtol"] = params_.rtol;
  j["atol"] = params_.atol;
  return j.dump();
}

std::shared_ptr<const StateSource> state_source_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("state source: ") + e.what());
  }
  if (!j.is_object() || j.value("kind", "") != "psi-z") throw ConfigError("unknown state source kind");
  try {
    PsiZSource::Params p;
    p.n = j.at("n").get<std::size_t>();
    p.m = j.at("m").get<std::size_t>();
    p.k = j.at("k").get<double>();
    p.c6 = j.at("c6").get<double>();
    p.z0 = j.at("z0").get<double>();
    p.xi0 = j.at("xi0").get<double>();
    p.span = j.at("span").get<double>();
    p.h0 = j.value("h0", 0.0);
    p.form = psi_form_from_string(j.value("form", std::string("corrected")));
    p.rtol = j.value("rtol", 1e-10);
    p.atol = j.value("atol", 1e-12);
    return PsiZSource::integrate(p);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("state source: ") + e.what());
  }
}

}  // namespace grhs
