#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <functional>
#include <limits>
#include <string_view>
#include <vector>

namespace grhs {

using Vector = Eigen::VectorXd;
using OdeRhs = std::function<Vector(double, const Vector&)>;

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0 picks one from the initial slope
  double max_step = std::numeric_limits<double>::infinity();
  // Step collapse: |h| < min_step_factor * (1 + |t|).
  double min_step_factor = 1e-12;
  // Divergence: inf-norm of the state above max_norm.
  double max_norm = 1e12;
  std::size_t max_steps = 5'000'000;
};

enum class OdeStatus { Completed, StepCollapse, Diverged, StepLimit };

std::string_view to_string(OdeStatus status);

/// Piecewise quartic continuous extension of an accepted Dormand-Prince run.
class DenseTrajectory {
 public:
  double t_begin() const { return t_begin_; }
  double t_end() const { return t_end_; }
  std::size_t steps() const { return steps_.size(); }
  bool empty() const { return steps_.empty(); }

  /// State at t, which must lie between t_begin() and t_end().
  Vector operator()(double t) const;

  /// Step endpoints including t_begin(), in integration order.
  std::vector<double> knots() const;

 private:
  friend class DormandPrince;
  struct Step {
    double t0, h;
    Vector r1, r2, r3, r4, r5;
  };
  std::vector<Step> steps_;
  double t_begin_ = 0.0;
  double t_end_ = 0.0;
  Vector initial_;
};

struct OdeResult {
  DenseTrajectory trajectory;
  OdeStatus status = OdeStatus::Completed;
  double t_stop = 0.0;
  Vector y_stop;
  std::size_t rejected = 0;
};

/// Integrates y' = rhs(t, y) from t0 to t1 (either direction) with the
/// Dormand-Prince 5(4) pair and its order-4 dense output.
///
/// A right-hand side that throws DomainError or NumericalError inside a trial
/// step rejects that step; repeated rejection ends in StepCollapse.
OdeResult integrate_dopri5(const OdeRhs& rhs, double t0, const Vector& y0, double t1,
                           const OdeOptions& options = {});

}  // namespace grhs
