#include "grhs/ode.hpp"

#include <algorithm>
#include <cmath>

#include "grhs/error.hpp"

namespace grhs {

std::string_view to_string(OdeStatus status) {
  switch (status) {
    case OdeStatus::Completed: return "completed";
    case OdeStatus::StepCollapse: return "step-collapse";
    case OdeStatus::Diverged: return "diverged";
    case OdeStatus::StepLimit: return "step-limit";
  }
  return "unknown";
}

Vector DenseTrajectory::operator()(double t) const {
  if (steps_.empty()) {
    if (t == t_begin_) return initial_;
    throw DomainError("dense trajectory is empty");
  }
  const double lo = std::min(t_begin_, t_end_);
  const double hi = std::max(t_begin_, t_end_);
  if (t < lo || t > hi) throw DomainError("dense output requested outside the integrated span");

  const bool forward = t_end_ >= t_begin_;
  // First step whose far end reaches t.
  auto it = std::lower_bound(steps_.begin(), steps_.end(), t, [forward](const Step& s, double value) {
    const double end = s.t0 + s.h;
    return forward ? end < value : end > value;
  });
  if (it == steps_.end()) it = std::prev(steps_.end());
  const Step& s = *it;
  const double theta = (t - s.t0) / s.h;
  const double theta1 = 1.0 - theta;
  return s.r1 + theta * (s.r2 + theta1 * (s.r3 + theta * (s.r4 + theta1 * s.r5)));
}

std::vector<double> DenseTrajectory::knots() const {
  std::vector<double> out;
  out.reserve(steps_.size() + 1);
  out.push_back(t_begin_);
  for (const Step& s : steps_) out.push_back(s.t0 + s.h);
  return out;
}

class DormandPrince {
 public:
  static OdeResult run(const OdeRhs& rhs, double t0, const Vector& y0, double t1,
                       const OdeOptions& opt);
};

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

bool finite(const Vector& v) { return v.allFinite(); }

double error_norm(const Vector& err, const Vector& y0, const Vector& y1, const OdeOptions& opt) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double scale = opt.atol + opt.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / scale;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(std::max<Eigen::Index>(err.size(), 1)));
}

}  // namespace

OdeResult DormandPrince::run(const OdeRhs& rhs, double t0, const Vector& y0, double t1,
                             const OdeOptions& opt) {
  OdeResult result;
  DenseTrajectory& traj = result.trajectory;
  traj.t_begin_ = t0;
  traj.t_end_ = t0;
  traj.initial_ = y0;
  result.t_stop = t0;
  result.y_stop = y0;
  if (t1 == t0) return result;

  const double dir = t1 > t0 ? 1.0 : -1.0;
  double t = t0;
  Vector y = y0;
  Vector k1 = rhs(t, y);
  if (!finite(k1)) throw NumericalError("ODE right-hand side is not finite at the initial point");

  double h = opt.initial_step;
  if (h <= 0.0) {
    const double ny = y.lpNorm<Eigen::Infinity>();
    const double nf = k1.lpNorm<Eigen::Infinity>();
    h = (ny > 1e-5 && nf > 1e-5) ? 0.01 * ny / nf : 1e-6;
    h = std::min(h, 0.1 * std::abs(t1 - t0));
  }
  h = std::min({h, opt.max_step, std::abs(t1 - t0)});
  double fac_old = 1e-4;
  bool last_rejected = false;

  for (std::size_t n = 0;; ++n) {
    if (n >= opt.max_steps) {
      result.status = OdeStatus::StepLimit;
      break;
    }
    if (h < opt.min_step_factor * (1.0 + std::abs(t))) {
      result.status = OdeStatus::StepCollapse;
      break;
    }
    bool final_step = false;
    if (h >= std::abs(t1 - t)) {
      h = std::abs(t1 - t);
      final_step = true;
    }
    const double hs = dir * h;

    Vector y1, k2, k3, k4, k5, k6, k7, ystage;
    bool ok = true;
    try {
      ystage = y + hs * a21 * k1;
      k2 = rhs(t + c2 * hs, ystage);
      ystage = y + hs * (a31 * k1 + a32 * k2);
      k3 = rhs(t + c3 * hs, ystage);
      ystage = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
      k4 = rhs(t + c4 * hs, ystage);
      ystage = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      k5 = rhs(t + c5 * hs, ystage);
      ystage = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      k6 = rhs(t + hs, ystage);
      y1 = y + hs * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
      k7 = rhs(t + hs, y1);
      ok = finite(k2) && finite(k3) && finite(k4) && finite(k5) && finite(k6) && finite(k7) &&
           finite(y1);
    } catch (const DomainError&) {
      ok = false;
    } catch (const NumericalError&) {
      ok = false;
    }
    if (!ok) {
      ++result.rejected;
      h *= 0.25;
      last_rejected = true;
      continue;
    }

    const Vector err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = error_norm(err, y, y1, opt);
    if (!std::isfinite(en)) {
      ++result.rejected;
      h *= 0.25;
      last_rejected = true;
      continue;
    }

    // PI step-size controller (Hairer's dopri5 defaults).
    constexpr double beta = 0.04;
    constexpr double expo = 0.2 - beta * 0.75;
    double fac = std::pow(std::max(en, 1e-300), expo) / std::pow(fac_old, beta);
    fac = std::clamp(fac / 0.9, 0.1, 5.0);  // 1/fac bounds: shrink by <=5, grow by <=10
    double h_new = h / fac;

    if (en <= 1.0) {
      fac_old = std::max(en, 1e-4);
      DenseTrajectory::Step step;
      step.t0 = t;
      step.h = hs;
      const Vector ydiff = y1 - y;
      const Vector bspl = hs * k1 - ydiff;
      step.r1 = y;
      step.r2 = ydiff;
      step.r3 = bspl;
      step.r4 = ydiff - hs * k7 - bspl;
      step.r5 = hs * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      traj.steps_.push_back(std::move(step));

      t = final_step ? t1 : t + hs;
      y = y1;
      k1 = k7;
      traj.t_end_ = t;
      result.t_stop = t;
      result.y_stop = y;

      if (y.lpNorm<Eigen::Infinity>() > opt.max_norm) {
        result.status = OdeStatus::Diverged;
        break;
      }
      if (final_step) {
        result.status = OdeStatus::Completed;
        break;
      }
      if (last_rejected) h_new = std::min(h_new, h);
      last_rejected = false;
      h = std::min(h_new, opt.max_step);
    } else {
      ++result.rejected;
      h = h / std::min(5.0, std::pow(en, expo) / 0.9);
      last_rejected = true;
    }
  }
  return result;
}

OdeResult integrate_dopri5(const OdeRhs& rhs, double t0, const Vector& y0, double t1,
                           const OdeOptions& options) {
  return DormandPrince::run(rhs, t0, y0, t1, options);
}

}  // namespace grhs
