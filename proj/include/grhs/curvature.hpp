#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <functional>

#include "grhs/candidate.hpp"
#include "grhs/core.hpp"
#include "grhs/profile.hpp"

namespace grhs {

using Matrix = Eigen::MatrixXd;

/// A symmetric 2-tensor on B x F split into base, mixed and fiber blocks.
struct BlockMatrix {
  Matrix base;   // n x n
  Matrix mixed;  // n x m
  Matrix fiber;  // m x m

  static BlockMatrix zero(std::size_t n, std::size_t m);
  static BlockMatrix split(const Matrix& full, std::size_t n, std::size_t m);
  Matrix assemble() const;
  /// Largest absolute entry of each block.
  double max_abs_base() const;
  double max_abs_mixed() const;
  double max_abs_fiber() const;
  double max_abs() const;
};

// Closed-form operators for g = phi(xi)^-2 g0 on a semi-Euclidean factor with
// invariant coordinate xi = alpha . x. Each throws DomainError unless phi(xi) > 0.

/// Ricci tensor of phi^-2 g0 in the coordinates x.
Matrix conformal_ricci(const Profile& phi, const InvariantDirection& alpha,
                       const SemiEuclideanFactor& factor, double xi);

/// Hessian of scal(xi) under phi^-2 g0.
Matrix conformal_hessian(const Profile& scal, const Profile& phi, const InvariantDirection& alpha,
                         const SemiEuclideanFactor& factor, double xi);

/// Laplace-Beltrami operator of scal(xi) under phi^-2 g0.
double conformal_laplacian(const Profile& scal, const Profile& phi, const InvariantDirection& alpha,
                           const SemiEuclideanFactor& factor, double xi);

/// <grad a, grad b> under phi^-2 g0.
double conformal_pairing(const Profile& a, const Profile& b, const Profile& phi,
                         const InvariantDirection& alpha, const SemiEuclideanFactor& factor, double xi);

/// |grad a|^2 under phi^-2 g0.
double conformal_grad_norm_sq(const Profile& a, const Profile& phi, const InvariantDirection& alpha,
                              const SemiEuclideanFactor& factor, double xi);

/// (du (x) du)_ij = alpha_i alpha_j u'(xi)^2; independent of the metric.
Matrix gradient_outer(const Profile& u, const InvariantDirection& alpha, double xi);

/// Ricci tensor of the warped product. The fiber Ricci is the conformal
/// Ricci of tau, or mu g_F for a generic Einstein fiber.
BlockMatrix warped_ricci(const WarpedCandidate& candidate, double xi, double zeta);

/// Fiber metric g_F = tau(zeta)^-2 g0' (g0' without tau).
Matrix fiber_metric(const WarpedCandidate& candidate, double zeta);
/// Base metric g_B = phi(xi)^-2 g0.
Matrix base_metric(const WarpedCandidate& candidate, double xi);

/// Metric tensor as a function of a point of R^dim.
class MetricField {
 public:
  using Evaluator = std::function<Matrix(const Eigen::VectorXd&)>;
  MetricField(std::size_t dim, Evaluator evaluator);
  std::size_t dim() const { return dim_; }
  Matrix operator()(const Eigen::VectorXd& x) const;

 private:
  std::size_t dim_;
  Evaluator evaluator_;
};

/// g = phi^-2 g0 (+) f^2 tau^-2 g0' on R^(n+m); tau = 1 when absent.
MetricField metric_field(const WarpedCandidate& candidate);
/// phi^-2 g0 alone on R^n.
MetricField conformal_metric_field(const Profile& phi, const InvariantDirection& alpha,
                                   const SemiEuclideanFactor& factor);

/// eps^(1/4) (1 + |x|): balances truncation and cancellation for the nested stencil.
double default_fd_step(double coordinate);

/// Ricci tensor from central differences of the metric: Christoffel symbols
/// from first differences of g, Ricci from first differences of the
/// Christoffel symbols. step <= 0 uses default_fd_step per coordinate.
/// Throws NumericalError when the metric is singular at a stencil point.
Matrix fd_ricci(const MetricField& metric, const Eigen::VectorXd& point, double step = 0.0);

/// Point of R^(n+m) and its (xi, zeta).
struct ProductPoint {
  Eigen::VectorXd x;
  double xi = 0.0;
  double zeta = 0.0;
};
ProductPoint make_product_point(const WarpedCandidate& candidate, const Eigen::VectorXd& x);

}  // namespace grhs
