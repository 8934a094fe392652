#include "grhs/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>

#include "grhs/error.hpp"
#include "grhs/parallel.hpp"

namespace grhs {

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::ReachedSMax: return "reached-s-max";
    case Termination::StepCollapse: return "step-collapse";
    case Termination::Diverged: return "diverged";
  }
  return "unknown";
}

std::string_view to_string(CausalClass k) {
  switch (k) {
    case CausalClass::Null: return "null";
    case CausalClass::Timelike: return "timelike";
    case CausalClass::Spacelike: return "spacelike";
  }
  return "unknown";
}

namespace {

struct Local {
  double xi = 0.0, zeta = 0.0;
  Jet phi, f, tau{1.0, 0.0, 0.0};
};

Local local(const WarpedCandidate& c, const Vector& x) {
  const std::size_t n = c.n(), m = c.m();
  if (static_cast<std::size_t>(x.size()) != n + m) throw ConfigError("position dimension does not match n + m");
  Local l;
  l.xi = c.alpha.project(std::span<const double>(x.data(), n));
  if (c.beta) l.zeta = c.beta->project(std::span<const double>(x.data() + n, m));
  l.phi = c.phi.eval(l.xi);
  l.f = c.f.eval(l.xi);
  if (c.tau) l.tau = c.tau->eval(l.zeta);
  if (!(l.phi.value > 0.0) || !(l.f.value > 0.0) || !(l.tau.value > 0.0)) {
    throw DomainError("metric profiles are not positive along the geodesic");
  }
  return l;
}

double beta_at(const WarpedCandidate& c, std::size_t j) { return c.beta ? (*c.beta)[j] : 0.0; }

}  // namespace

double metric_norm(const WarpedCandidate& c, const Vector& x, const Vector& v) {
  const Local l = local(c, x);
  const std::size_t n = c.n(), m = c.m();
  double g = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    g += c.base.epsilon(i) * v[static_cast<Eigen::Index>(i)] * v[static_cast<Eigen::Index>(i)] /
         (l.phi.value * l.phi.value);
  }
  const double warp = l.f.value * l.f.value / (l.tau.value * l.tau.value);
  for (std::size_t j = 0; j < m; ++j) {
    const double vj = v[static_cast<Eigen::Index>(n + j)];
    g += c.fiber.epsilon(j) * warp * vj * vj;
  }
  return g;
}

Vector geodesic_acceleration(const WarpedCandidate& c, const Vector& x, const Vector& v) {
  const Local l = local(c, x);
  const std::size_t n = c.n(), m = c.m();
  const auto N = static_cast<Eigen::Index>(n + m);
  // Diagonal metric entries and their gradients D(k, i) = d_i g_kk.
  Vector g(N);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N, N);
  const double p = l.phi.value, t = l.tau.value, f = l.f.value;
  for (std::size_t k = 0; k < n; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    g[kk] = c.base.epsilon(k) / (p * p);
    for (std::size_t i = 0; i < n; ++i) {
      D(kk, static_cast<Eigen::Index>(i)) = -2.0 * c.base.epsilon(k) * l.phi.d1 * c.alpha[i] / (p * p * p);
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    const auto kk = static_cast<Eigen::Index>(n + j);
    const double e = c.fiber.epsilon(j);
    g[kk] = e * f * f / (t * t);
    for (std::size_t i = 0; i < n; ++i) {
      D(kk, static_cast<Eigen::Index>(i)) = 2.0 * e * f * l.f.d1 * c.alpha[i] / (t * t);
    }
    for (std::size_t q = 0; q < m; ++q) {
      D(kk, static_cast<Eigen::Index>(n + q)) = -2.0 * e * f * f * l.tau.d1 * beta_at(c, q) / (t * t * t);
    }
  }
  Vector a(N);
  for (Eigen::Index k = 0; k < N; ++k) {
    double along = 0.0, across = 0.0;
    for (Eigen::Index i = 0; i < N; ++i) {
      along += D(k, i) * v[i];
      across += D(i, k) * v[i] * v[i];
    }
    a[k] = -(along * v[k] - 0.5 * across) / g[k];
  }
  return a;
}

Vector geodesic_acceleration_split(const WarpedCandidate& c, const Vector& x, const Vector& v) {
  const Local l = local(c, x);
  const std::size_t n = c.n(), m = c.m();
  Vector a(static_cast<Eigen::Index>(n + m));

  double av = 0.0, base_norm0 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double vi = v[static_cast<Eigen::Index>(i)];
    av += c.alpha[i] * vi;
    base_norm0 += c.base.epsilon(i) * vi * vi;
  }
  double bv = 0.0, fiber_norm0 = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double vj = v[static_cast<Eigen::Index>(n + j)];
    bv += beta_at(c, j) * vj;
    fiber_norm0 += c.fiber.epsilon(j) * vj * vj;
  }
  const double gF = fiber_norm0 / (l.tau.value * l.tau.value);
  const double dfds = l.f.d1 * av;

  for (std::size_t k = 0; k < n; ++k) {
    const double vk = v[static_cast<Eigen::Index>(k)];
    // Gamma_B(v, v)^k for phi^-2 g0.
    const double gamma = -(2.0 * vk * l.phi.d1 * av - c.base.epsilon(k) * l.phi.d1 * c.alpha[k] * base_norm0) /
                         l.phi.value;
    const double grad_f = l.phi.value * l.phi.value * c.base.epsilon(k) * l.f.d1 * c.alpha[k];
    a[static_cast<Eigen::Index>(k)] = -gamma + gF * l.f.value * grad_f;
  }
  for (std::size_t j = 0; j < m; ++j) {
    const double vj = v[static_cast<Eigen::Index>(n + j)];
    const double gamma = -(2.0 * vj * l.tau.d1 * bv - c.fiber.epsilon(j) * l.tau.d1 * beta_at(c, j) * fiber_norm0) /
                         l.tau.value;
    a[static_cast<Eigen::Index>(n + j)] = -gamma - 2.0 / l.f.value * dfds * vj;
  }
  return a;
}

Vector geodesic_rhs(const WarpedCandidate& c, const Vector& state) {
  const Eigen::Index N = state.size() / 2;
  const Vector x = state.head(N), v = state.tail(N);
  Vector out(2 * N);
  out.head(N) = v;
  out.tail(N) = geodesic_acceleration(c, x, v);
  return out;
}

void GeodesicTrajectory::write_csv(std::ostream& os) const {
  const std::size_t N = samples.empty() ? 0 : static_cast<std::size_t>(samples.front().position.size());
  os << "s";
  for (std::size_t i = 1; i <= N; ++i) os << ",x" << i;
  for (std::size_t i = 1; i <= N; ++i) os << ",v" << i;
  os << ",drift\n";
  os << std::setprecision(17);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& st = samples[k];
    os << st.s;
    for (Eigen::Index i = 0; i < st.position.size(); ++i) os << ',' << st.position[i];
    for (Eigen::Index i = 0; i < st.velocity.size(); ++i) os << ',' << st.velocity[i];
    os << ',' << drift[k] << '\n';
  }
}

namespace {

struct Leg {
  std::vector<GeodesicState> samples;
  Termination termination = Termination::ReachedSMax;
  double reached = 0.0;
  double norm = 0.0;
};

Leg integrate_leg(const WarpedCandidate& c, const GeodesicState& init, double s_end, const GeodesicOptions& o) {
  const Eigen::Index N = init.position.size();
  Vector y0(2 * N);
  y0 << init.position, init.velocity;
  OdeOptions opts;
  opts.rtol = o.tol;
  opts.atol = o.tol;
  opts.min_step_factor = o.min_step_factor;
  opts.max_norm = o.max_norm;
  const OdeResult r = integrate_dopri5([&c](double, const Vector& y) { return geodesic_rhs(c, y); }, init.s, y0,
                                       s_end, opts);
  Leg leg;
  leg.reached = r.t_stop;
  leg.norm = r.y_stop.size() ? r.y_stop.lpNorm<Eigen::Infinity>() : 0.0;
  switch (r.status) {
    case OdeStatus::Completed: leg.termination = Termination::ReachedSMax; break;
    case OdeStatus::Diverged: leg.termination = Termination::Diverged; break;
    case OdeStatus::StepCollapse:
    case OdeStatus::StepLimit: leg.termination = Termination::StepCollapse; break;
  }
  const std::size_t count = std::max<std::size_t>(o.samples, 2);
  if (r.trajectory.empty()) {
    leg.samples.push_back(init);
    return leg;
  }
  const double a = r.trajectory.t_begin(), b = r.trajectory.t_end();
  for (std::size_t i = 0; i < count; ++i) {
    const double s = i + 1 == count ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
    const Vector y = i == 0 ? y0 : r.trajectory(s);
    leg.samples.push_back({s, y.head(N), y.tail(N)});
  }
  return leg;
}

}  // namespace

GeodesicTrajectory integrate_geodesic(const WarpedCandidate& c, const GeodesicState& init, double s_max,
                                      const GeodesicOptions& options) {
  c.validate();
  if (!(s_max > 0.0)) throw ConfigError("s_max must be positive");
  if (init.position.size() != init.velocity.size() ||
      static_cast<std::size_t>(init.position.size()) != c.n() + c.m()) {
    throw ConfigError("initial state dimension does not match n + m");
  }
  GeodesicTrajectory out;
  out.causal_character = metric_norm(c, init.position, init.velocity);

  const Leg fwd = integrate_leg(c, init, init.s + s_max, options);
  const Leg bwd = integrate_leg(c, init, init.s - s_max, options);
  out.forward = fwd.termination;
  out.backward = bwd.termination;
  out.s_forward = fwd.reached;
  out.s_backward = bwd.reached;
  out.termination = fwd.termination != Termination::ReachedSMax ? fwd.termination : bwd.termination;
  if (fwd.termination != Termination::ReachedSMax) out.stop_norm = fwd.norm;
  else if (bwd.termination != Termination::ReachedSMax) out.stop_norm = bwd.norm;

  for (auto it = bwd.samples.rbegin(); it != bwd.samples.rend(); ++it) {
    if (it->s < init.s) out.samples.push_back(*it);
  }
  for (const auto& st : fwd.samples) {
    if (out.samples.empty() || st.s > out.samples.back().s) out.samples.push_back(st);
  }
  out.drift.reserve(out.samples.size());
  for (const auto& st : out.samples) {
    double d = std::numeric_limits<double>::infinity();
    try {
      d = metric_norm(c, st.position, st.velocity) - out.causal_character;
    } catch (const DomainError&) {
    }
    out.drift.push_back(d);
    out.max_drift = std::max(out.max_drift, std::abs(d));
  }
  return out;
}

GeodesicState sample_initial_state(const WarpedCandidate& c, CausalClass kind, std::mt19937_64& rng, double spread) {
  const std::size_t n = c.n(), m = c.m();
  const auto N = static_cast<Eigen::Index>(n + m);
  std::uniform_real_distribution<double> pos(-spread, spread);
  std::normal_distribution<double> vel(0.0, 1.0);
  GeodesicState st;
  st.position.resize(N);
  st.velocity.resize(N);
  for (Eigen::Index i = 0; i < N; ++i) st.position[i] = pos(rng);
  for (Eigen::Index i = 0; i < N; ++i) st.velocity[i] = vel(rng);

  auto sign_of = [&](Eigen::Index i) {
    const auto u = static_cast<std::size_t>(i);
    return u < n ? c.base.epsilon(u) : c.fiber.epsilon(u - n);
  };
  // g(v, v) = plus - minus, split by sign of the metric entry.
  auto parts = [&](const Vector& v) {
    double plus = 0.0, minus = 0.0;
    for (Eigen::Index i = 0; i < N; ++i) {
      Vector ei = Vector::Zero(N);
      ei[i] = v[i];
      const double q = std::abs(metric_norm(c, st.position, ei));
      (sign_of(i) > 0 ? plus : minus) += q;
    }
    return std::pair{plus, minus};
  };
  const auto [plus, minus] = parts(st.velocity);
  auto scale_negative = [&](double factor) {
    for (Eigen::Index i = 0; i < N; ++i) {
      if (sign_of(i) < 0) st.velocity[i] *= factor;
    }
  };
  if (minus > 0.0 && plus > 0.0) {
    switch (kind) {
      case CausalClass::Null: scale_negative(std::sqrt(plus / minus)); break;
      case CausalClass::Timelike: scale_negative(std::sqrt(2.0 * plus / minus)); break;
      case CausalClass::Spacelike: scale_negative(std::sqrt(0.5 * plus / minus)); break;
    }
  }
  if (kind != CausalClass::Null) {
    const double g = std::abs(metric_norm(c, st.position, st.velocity));
    if (g > 0.0) st.velocity /= std::sqrt(g);
  }
  return st;
}

std::string ProbeSummary::verdict() const {
  if (early_terminations == 0) {
    return "no finite-parameter obstruction detected up to s_max";
  }
  return "finite-parameter obstruction detected in " + std::to_string(early_terminations) + " of " +
         std::to_string(count) + " geodesics";
}

Vector gallery_1_8_fiber_closed_form(const GeodesicState& init, std::size_t n, double A, double s) {
  const Eigen::Index N = init.position.size();
  const auto ni = static_cast<Eigen::Index>(n);
  const double c1 = init.velocity[0] + init.velocity[1];
  const double ds = s - init.s;
  const double weight = c1 == 0.0 ? ds : -std::expm1(-2.0 * A * c1 * ds) / (2.0 * A * c1);
  return init.position.segment(ni, N - ni) + weight * init.velocity.segment(ni, N - ni);
}

ProbeSummary completeness_probe(const WarpedCandidate& c, const ProbeOptions& o) {
  c.validate();
  if (o.count < 1) throw ConfigError("probe count must be at least 1");
  ProbeSummary summary;
  summary.candidate = c.name;
  summary.count = o.count;
  summary.s_max = o.s_max;
  summary.seed = o.seed;
  summary.bound_checked = c.name.rfind("1.8", 0) == 0;

  std::mt19937_64 rng(o.seed);
  std::vector<GeodesicState> inits;
  for (std::size_t i = 0; i < o.count; ++i) {
    const auto kind = static_cast<CausalClass>(i % 3);
    inits.push_back(sample_initial_state(c, kind, rng, o.spread));
  }
  summary.entries.resize(o.count);

  const double k = summary.bound_checked ? c.phi(0.0) : 0.0;
  const double A = summary.bound_checked ? c.phi.eval(0.0).d1 / k : 0.0;
  const std::size_t n = c.n();

  parallel_for(o.count, [&](std::size_t i) {
    ProbeEntry& e = summary.entries[i];
    e.kind = static_cast<CausalClass>(i % 3);
    const GeodesicTrajectory tr = integrate_geodesic(c, inits[i], o.s_max, o.geodesic);
    e.causal_character = tr.causal_character;
    e.termination = tr.termination;
    e.s_forward = tr.s_forward;
    e.s_backward = tr.s_backward;
    e.max_drift = tr.max_drift;
    if (summary.bound_checked) {
      const GeodesicState& s0 = inits[i];
      double g0 = 0.0;
      for (std::size_t j = 0; j < c.m(); ++j) {
        const double vj = s0.velocity[static_cast<Eigen::Index>(n + j)];
        g0 += c.fiber.epsilon(j) * vj * vj;
      }
      const double xi0 = s0.position[0] + s0.position[1];
      e.accel_bound = std::abs(-std::pow(k, 4) * A * g0 * std::exp(4.0 * A * xi0));
      for (const auto& st : tr.samples) {
        double acc = std::numeric_limits<double>::infinity();
        try {
          acc = std::abs(geodesic_acceleration(c, st.position, st.velocity)[0]);
        } catch (const DomainError&) {
        }
        e.sup_y1_accel = std::max(e.sup_y1_accel, acc);
      }
      e.bound_holds = e.sup_y1_accel <= e.accel_bound;
    }
  });

  for (const auto& e : summary.entries) {
    if (e.termination != Termination::ReachedSMax) ++summary.early_terminations;
    summary.max_drift = std::max(summary.max_drift, e.max_drift);
    if (summary.bound_checked && !e.bound_holds) ++summary.bound_violations;
  }
  return summary;
}

}  // namespace grhs
