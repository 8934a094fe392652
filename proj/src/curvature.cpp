#include "grhs/curvature.hpp"

#include <Eigen/LU>
#include <cmath>
#include <limits>
#include <vector>

#include "grhs/error.hpp"

namespace grhs {

BlockMatrix BlockMatrix::zero(std::size_t n, std::size_t m) {
  const auto ni = static_cast<Eigen::Index>(n), mi = static_cast<Eigen::Index>(m);
  return {Matrix::Zero(ni, ni), Matrix::Zero(ni, mi), Matrix::Zero(mi, mi)};
}

BlockMatrix BlockMatrix::split(const Matrix& full, std::size_t n, std::size_t m) {
  const auto ni = static_cast<Eigen::Index>(n), mi = static_cast<Eigen::Index>(m);
  if (full.rows() != ni + mi || full.cols() != ni + mi) throw ConfigError("matrix size does not match n + m");
  return {full.topLeftCorner(ni, ni), full.topRightCorner(ni, mi), full.bottomRightCorner(mi, mi)};
}

Matrix BlockMatrix::assemble() const {
  const auto n = base.rows(), m = fiber.rows();
  Matrix out(n + m, n + m);
  out.topLeftCorner(n, n) = base;
  out.topRightCorner(n, m) = mixed;
  out.bottomLeftCorner(m, n) = mixed.transpose();
  out.bottomRightCorner(m, m) = fiber;
  return out;
}

namespace {
double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }
}  // namespace

double BlockMatrix::max_abs_base() const { return grhs::max_abs(base); }
double BlockMatrix::max_abs_mixed() const { return grhs::max_abs(mixed); }
double BlockMatrix::max_abs_fiber() const { return grhs::max_abs(fiber); }
double BlockMatrix::max_abs() const {
  return std::max({max_abs_base(), max_abs_mixed(), max_abs_fiber()});
}

namespace {

Jet positive_factor(const Profile& phi, double xi) {
  const Jet p = phi.eval(xi);
  if (!(p.value > 0.0)) throw DomainError("conformal factor must be positive");
  return p;
}

void check_dims(const InvariantDirection& alpha, const SemiEuclideanFactor& factor) {
  if (alpha.dim() != factor.dim()) throw ConfigError("direction and factor dimensions differ");
}

}  // namespace

Matrix conformal_ricci(const Profile& phi, const InvariantDirection& alpha,
                       const SemiEuclideanFactor& factor, double xi) {
  check_dims(alpha, factor);
  const Jet p = positive_factor(phi, xi);
  const auto n = static_cast<Eigen::Index>(factor.dim());
  const double dim = static_cast<double>(factor.dim());
  const double norm = alpha.norm_sq();
  const double ratio2 = p.d2 / p.value;
  Matrix ric(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ai = alpha[static_cast<std::size_t>(i)];
    ric(i, i) = ((dim - 2.0) * p.value * p.d2 * ai * ai +
                 (p.value * p.d2 - (dim - 1.0) * p.d1 * p.d1) * norm * factor.epsilon(static_cast<std::size_t>(i))) /
                (p.value * p.value);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = (dim - 2.0) * ratio2 * ai * alpha[static_cast<std::size_t>(j)];
      ric(i, j) = v;
      ric(j, i) = v;
    }
  }
  return ric;
}

Matrix conformal_hessian(const Profile& scal, const Profile& phi, const InvariantDirection& alpha,
                         const SemiEuclideanFactor& factor, double xi) {
  check_dims(alpha, factor);
  const Jet p = positive_factor(phi, xi);
  const Jet s = scal.eval(xi);
  const auto n = static_cast<Eigen::Index>(factor.dim());
  const double drift = p.d1 / p.value * s.d1;
  Matrix hess(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    for (Eigen::Index j = i; j < n; ++j) {
      const double aa = alpha[iu] * alpha[static_cast<std::size_t>(j)];
      const double delta = i == j ? factor.epsilon(iu) * alpha.norm_sq() : 0.0;
      const double v = aa * s.d2 + (2.0 * aa - delta) * drift;
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }
  return hess;
}

double conformal_laplacian(const Profile& scal, const Profile& phi, const InvariantDirection& alpha,
                           const SemiEuclideanFactor& factor, double xi) {
  check_dims(alpha, factor);
  const Jet p = positive_factor(phi, xi);
  const Jet s = scal.eval(xi);
  const double dim = static_cast<double>(factor.dim());
  return alpha.norm_sq() * p.value * p.value * (s.d2 - (dim - 2.0) * p.d1 / p.value * s.d1);
}

double conformal_pairing(const Profile& a, const Profile& b, const Profile& phi,
                         const InvariantDirection& alpha, const SemiEuclideanFactor& factor, double xi) {
  check_dims(alpha, factor);
  const Jet p = positive_factor(phi, xi);
  return alpha.norm_sq() * p.value * p.value * a.eval(xi).d1 * b.eval(xi).d1;
}

double conformal_grad_norm_sq(const Profile& a, const Profile& phi, const InvariantDirection& alpha,
                              const SemiEuclideanFactor& factor, double xi) {
  check_dims(alpha, factor);
  const Jet p = positive_factor(phi, xi);
  const double d = a.eval(xi).d1;
  return alpha.norm_sq() * p.value * p.value * d * d;
}

Matrix gradient_outer(const Profile& u, const InvariantDirection& alpha, double xi) {
  const double d = u.eval(xi).d1;
  const auto n = static_cast<Eigen::Index>(alpha.dim());
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out(i, j) = alpha[static_cast<std::size_t>(i)] * alpha[static_cast<std::size_t>(j)] * d * d;
    }
  }
  return out;
}

Matrix base_metric(const WarpedCandidate& c, double xi) {
  const Jet p = positive_factor(c.phi, xi);
  const auto n = static_cast<Eigen::Index>(c.n());
  Matrix g = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) g(i, i) = c.base.epsilon(static_cast<std::size_t>(i)) / (p.value * p.value);
  return g;
}

Matrix fiber_metric(const WarpedCandidate& c, double zeta) {
  const double t = c.tau ? positive_factor(*c.tau, zeta).value : 1.0;
  const auto m = static_cast<Eigen::Index>(c.m());
  Matrix g = Matrix::Zero(m, m);
  for (Eigen::Index j = 0; j < m; ++j) g(j, j) = c.fiber.epsilon(static_cast<std::size_t>(j)) / (t * t);
  return g;
}

BlockMatrix warped_ricci(const WarpedCandidate& c, double xi, double zeta) {
  c.validate();
  c.require_positive(xi, zeta);
  const double md = static_cast<double>(c.m());
  const double fv = c.f(xi);
  BlockMatrix out = BlockMatrix::zero(c.n(), c.m());
  out.base = conformal_ricci(c.phi, c.alpha, c.base, xi) -
             (md / fv) * conformal_hessian(c.f, c.phi, c.alpha, c.base, xi);

  const Matrix gf = fiber_metric(c, zeta);
  const Matrix ric_f = c.tau ? conformal_ricci(*c.tau, *c.beta, c.fiber, zeta) : Matrix(c.mu * gf);
  const double warp = fv * conformal_laplacian(c.f, c.phi, c.alpha, c.base, xi) +
                      (md - 1.0) * conformal_grad_norm_sq(c.f, c.phi, c.alpha, c.base, xi);
  out.fiber = ric_f - warp * gf;
  return out;
}

MetricField::MetricField(std::size_t dim, Evaluator evaluator) : dim_(dim), evaluator_(std::move(evaluator)) {}

Matrix MetricField::operator()(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != dim_) throw ConfigError("point dimension does not match the metric");
  return evaluator_(x);
}

MetricField metric_field(const WarpedCandidate& candidate) {
  candidate.validate();
  const std::size_t n = candidate.n(), m = candidate.m();
  return MetricField(n + m, [c = candidate, n, m](const Eigen::VectorXd& x) {
    const ProductPoint p = make_product_point(c, x);
    const double ph = c.phi(p.xi);
    const double fv = c.f(p.xi);
    const double t = c.tau ? (*c.tau)(p.zeta) : 1.0;
    Matrix g = Matrix::Zero(static_cast<Eigen::Index>(n + m), static_cast<Eigen::Index>(n + m));
    for (std::size_t i = 0; i < n; ++i) g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = c.base.epsilon(i) / (ph * ph);
    for (std::size_t j = 0; j < m; ++j) {
      const auto k = static_cast<Eigen::Index>(n + j);
      g(k, k) = c.fiber.epsilon(j) * fv * fv / (t * t);
    }
    return g;
  });
}

MetricField conformal_metric_field(const Profile& phi, const InvariantDirection& alpha,
                                   const SemiEuclideanFactor& factor) {
  check_dims(alpha, factor);
  return MetricField(factor.dim(), [phi, alpha, factor](const Eigen::VectorXd& x) {
    const double xi = alpha.project(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
    const double ph = phi(xi);
    const auto n = static_cast<Eigen::Index>(factor.dim());
    Matrix g = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) g(i, i) = factor.epsilon(static_cast<std::size_t>(i)) / (ph * ph);
    return g;
  });
}

double default_fd_step(double coordinate) {
  return std::pow(std::numeric_limits<double>::epsilon(), 0.25) * (1.0 + std::abs(coordinate));
}

namespace {

// Gamma^k_ij stored at k * N * N + i * N + j.
std::vector<double> christoffel_fd(const MetricField& metric, const Eigen::VectorXd& x,
                                   const std::vector<double>& steps) {
  const auto N = static_cast<Eigen::Index>(metric.dim());
  const Matrix g = metric(x);
  Eigen::FullPivLU<Matrix> lu(g);
  if (!lu.isInvertible()) throw NumericalError("metric is singular at a stencil point");
  const Matrix ginv = lu.inverse();

  std::vector<Matrix> dg(static_cast<std::size_t>(N));
  for (Eigen::Index l = 0; l < N; ++l) {
    const double h = steps[static_cast<std::size_t>(l)];
    Eigen::VectorXd xp = x, xm = x;
    xp[l] += h;
    xm[l] -= h;
    dg[static_cast<std::size_t>(l)] = (metric(xp) - metric(xm)) / (2.0 * h);
  }
  std::vector<double> gamma(static_cast<std::size_t>(N * N * N), 0.0);
  for (Eigen::Index k = 0; k < N; ++k) {
    for (Eigen::Index i = 0; i < N; ++i) {
      for (Eigen::Index j = 0; j < N; ++j) {
        double sum = 0.0;
        for (Eigen::Index l = 0; l < N; ++l) {
          sum += ginv(k, l) * (dg[static_cast<std::size_t>(i)](j, l) + dg[static_cast<std::size_t>(j)](i, l) -
                               dg[static_cast<std::size_t>(l)](i, j));
        }
        gamma[static_cast<std::size_t>(k * N * N + i * N + j)] = 0.5 * sum;
      }
    }
  }
  return gamma;
}

}  // namespace

Matrix fd_ricci(const MetricField& metric, const Eigen::VectorXd& point, double step) {
  const auto N = static_cast<Eigen::Index>(metric.dim());
  const auto n = static_cast<std::size_t>(N);
  if (static_cast<std::size_t>(point.size()) != n) throw ConfigError("point dimension does not match the metric");
  std::vector<double> steps(n);
  for (std::size_t l = 0; l < n; ++l) {
    steps[l] = step > 0.0 ? step : default_fd_step(point[static_cast<Eigen::Index>(l)]);
  }
  auto idx = [N](Eigen::Index k, Eigen::Index i, Eigen::Index j) {
    return static_cast<std::size_t>(k * N * N + i * N + j);
  };

  const std::vector<double> gamma = christoffel_fd(metric, point, steps);
  // dgamma[l][k,i,j] = d_l Gamma^k_ij
  std::vector<std::vector<double>> dgamma(n);
  for (Eigen::Index l = 0; l < N; ++l) {
    const double h = steps[static_cast<std::size_t>(l)];
    Eigen::VectorXd xp = point, xm = point;
    xp[l] += h;
    xm[l] -= h;
    const std::vector<double> gp = christoffel_fd(metric, xp, steps);
    const std::vector<double> gm = christoffel_fd(metric, xm, steps);
    std::vector<double>& d = dgamma[static_cast<std::size_t>(l)];
    d.resize(gp.size());
    for (std::size_t q = 0; q < gp.size(); ++q) d[q] = (gp[q] - gm[q]) / (2.0 * h);
  }

  Matrix ric = Matrix::Zero(N, N);
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index j = 0; j < N; ++j) {
      double r = 0.0;
      for (Eigen::Index k = 0; k < N; ++k) {
        r += dgamma[static_cast<std::size_t>(k)][idx(k, i, j)];
        r -= dgamma[static_cast<std::size_t>(j)][idx(k, i, k)];
        for (Eigen::Index l = 0; l < N; ++l) {
          r += gamma[idx(k, k, l)] * gamma[idx(l, i, j)];
          r -= gamma[idx(k, j, l)] * gamma[idx(l, i, k)];
        }
      }
      ric(i, j) = r;
    }
  }
  return ric;
}

ProductPoint make_product_point(const WarpedCandidate& c, const Eigen::VectorXd& x) {
  const std::size_t n = c.n(), m = c.m();
  if (static_cast<std::size_t>(x.size()) != n + m) throw ConfigError("point dimension does not match n + m");
  ProductPoint p;
  p.x = x;
  p.xi = c.alpha.project(std::span<const double>(x.data(), n));
  if (c.beta) p.zeta = c.beta->project(std::span<const double>(x.data() + n, m));
  return p;
}

}  // namespace grhs
