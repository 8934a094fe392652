#include <doctest.h>

#include <cmath>
#include <random>

#include "grhs/curvature.hpp"
#include "grhs/error.hpp"
#include "grhs/gallery.hpp"
#include "support.hpp"

using namespace grhs;
using doctest::Approx;

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// Hessian of scal(xi) under phi^-2 g0 from finite-difference partials and the
// Christoffel symbols of a conformally flat metric written out by hand.
Matrix hessian_by_christoffels(const Profile& scal, const Profile& phi, const InvariantDirection& alpha,
                               const SemiEuclideanFactor& g0, const Eigen::VectorXd& x, double step) {
  const std::size_t n = g0.dim();
  auto xi_at = [&](const Eigen::VectorXd& p) { return alpha.project(std::span<const double>(p.data(), n)); };
  auto s = [&](const Eigen::VectorXd& p) { return scal(xi_at(p)); };
  auto lphi = [&](const Eigen::VectorXd& p) { return std::log(phi(xi_at(p))); };
  Eigen::VectorXd ds(n), dl(n);
  Matrix dds(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[i] = step;
    ds[i] = (s(x + e) - s(x - e)) / (2 * step);
    dl[i] = (lphi(x + e) - lphi(x - e)) / (2 * step);
    for (std::size_t j = 0; j < n; ++j) {
      Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
      f[j] = step;
      dds(i, j) = (s(x + e + f) - s(x + e - f) - s(x - e + f) + s(x - e - f)) / (4 * step * step);
    }
  }
  // g = e^{-2 log phi} g0: Gamma^k_ij = -(d_i l delta_jk + d_j l delta_ik - eps_i eps_k delta_ij d_k l).
  Matrix hess = dds;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double gamma_grad = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        double gamma = 0.0;
        if (j == k) gamma -= dl[i];
        if (i == k) gamma -= dl[j];
        if (i == j) gamma += g0.epsilon(i) * g0.epsilon(k) * dl[k];
        gamma_grad += gamma * ds[k];
      }
      hess(i, j) -= gamma_grad;
    }
  }
  return hess;
}

}  // namespace

TEST_CASE("flat metric has zero curvature") {
  const SemiEuclideanFactor g0 = SemiEuclideanFactor::lorentzian(3);
  const InvariantDirection a({1.0, 0.5, 0.0}, g0);
  const Profile one = Profile::constant(1.0);
  CHECK(max_abs(conformal_ricci(one, a, g0, 0.3)) == 0.0);
  CHECK(max_abs(conformal_hessian(Profile::constant(2.0), exp(Profile::identity()), a, g0, 0.3)) == 0.0);

  const MetricField flat(4, [](const Eigen::VectorXd&) { return Matrix(Matrix::Identity(4, 4)); });
  CHECK(max_abs(fd_ricci(flat, Eigen::VectorXd::Zero(4), 1e-3)) < 1e-12);

  WarpedCandidate c;
  c.base = SemiEuclideanFactor::euclidean(2);
  c.alpha = InvariantDirection({1.0, 0.0}, c.base);
  c.fiber = SemiEuclideanFactor::euclidean(2);
  c.beta = InvariantDirection({0.0, 1.0}, c.fiber);
  c.tau = Profile::constant(1.0);
  const BlockMatrix r = warped_ricci(c, 0.4, -0.2);
  CHECK(r.max_abs() == 0.0);
}

TEST_CASE("null direction conformal Ricci is (n-2) k^2 alpha alpha") {
  const std::size_t n = 4;
  const SemiEuclideanFactor g0 = SemiEuclideanFactor::lorentzian(n);
  const InvariantDirection a({1.0, 1.0, 0.0, 0.0}, g0);
  const double k = 0.7;
  const Matrix r = conformal_ricci(exp(k * Profile::identity()), a, g0, 1.3);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(r(i, j) == Approx((n - 2.0) * k * k * a[i] * a[j]).epsilon(1e-14));
    }
  }
}

TEST_CASE("conformal Ricci matches the finite-difference oracle") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const SemiEuclideanFactor g0(test::random_signature(rng, n));
    const InvariantDirection a(test::random_coefficients(rng, n), g0);
    const Profile phi = test::random_positive(rng, 1.5);
    Eigen::VectorXd x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = test::uniform(rng, -1.0, 1.0);
    const double xi = a.project(std::span<const double>(x.data(), n));
    const Matrix closed = conformal_ricci(phi, a, g0, xi);
    const MetricField field = conformal_metric_field(phi, a, g0);
    const double e1 = max_abs(fd_ricci(field, x, 1e-3) - closed);
    const double e2 = max_abs(fd_ricci(field, x, 5e-4) - closed);
    CHECK(e1 < 1e-5);
    if (e1 > 1e-7) {
      CHECK(e1 / e2 >= 3.0);
      CHECK(e1 / e2 <= 5.0);
    }
    CHECK(max_abs(closed - closed.transpose()) == 0.0);
  }
}

TEST_CASE("phi = e^xi on the plane against the oracle") {
  const SemiEuclideanFactor g0 = SemiEuclideanFactor::euclidean(2);
  const InvariantDirection a({1.0, 0.0}, g0);
  const Profile phi = exp(Profile::identity());
  Eigen::VectorXd x(2);
  x << 0.3, -0.4;
  // n = 2: Ric = (phi phi'' - phi'^2)/phi^2 g0 = 0 for an exponential.
  const Matrix closed = conformal_ricci(phi, a, g0, 0.3);
  CHECK(max_abs(closed) < 1e-15);
  CHECK(max_abs(fd_ricci(conformal_metric_field(phi, a, g0), x)) < 1e-7);
}

TEST_CASE("conformal Hessian against hand-written Christoffel symbols") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const SemiEuclideanFactor g0(test::random_signature(rng, n));
    const InvariantDirection a(test::random_coefficients(rng, n), g0);
    const Profile phi = test::random_positive(rng, 1.5);
    const Profile scal = test::random_smooth(rng);
    Eigen::VectorXd x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = test::uniform(rng, -1.0, 1.0);
    const double xi = a.project(std::span<const double>(x.data(), n));
    const Matrix closed = conformal_hessian(scal, phi, a, g0, xi);
    const double e1 = max_abs(hessian_by_christoffels(scal, phi, a, g0, x, 1e-3) - closed);
    const double e2 = max_abs(hessian_by_christoffels(scal, phi, a, g0, x, 5e-4) - closed);
    CHECK(e1 < 1e-5);
    if (e1 > 1e-7) CHECK(e1 / e2 == Approx(4.0).epsilon(0.25));
    CHECK(max_abs(closed - closed.transpose()) == 0.0);
  }
}

TEST_CASE("Laplacian is the metric trace of the Hessian") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 4;
    const SemiEuclideanFactor g0(test::random_signature(rng, n));
    const InvariantDirection a(test::random_coefficients(rng, n), g0);
    const Profile phi = test::random_positive(rng);
    const Profile scal = test::random_smooth(rng);
    const double xi = test::uniform(rng, -1.0, 1.0);
    const Matrix hess = conformal_hessian(scal, phi, a, g0, xi);
    double trace = 0.0;
    const double p = phi(xi);
    for (std::size_t k = 0; k < n; ++k) trace += p * p * g0.epsilon(k) * hess(k, k);
    const double lap = conformal_laplacian(scal, phi, a, g0, xi);
    CHECK(lap == Approx(trace).epsilon(1e-12).scale(1.0 + std::abs(trace)));
  }
}

TEST_CASE("pairing trivial cases and gradient oracle") {
  const Profile t = Profile::identity();
  const SemiEuclideanFactor lor = SemiEuclideanFactor::lorentzian(2);
  const InvariantDirection null({1.0, 1.0}, lor);
  CHECK(conformal_pairing(t * t, exp(t), exp(t), null, lor, 0.5) == 0.0);
  CHECK(conformal_laplacian(t * t * t, exp(t), null, lor, 0.5) == 0.0);

  const SemiEuclideanFactor e2 = SemiEuclideanFactor::euclidean(2);
  const InvariantDirection unit({1.0, 0.0}, e2);
  CHECK(conformal_grad_norm_sq(t * t, Profile::constant(1.0), unit, e2, 1.5) == Approx(9.0));
  CHECK(conformal_laplacian(t * t * t, Profile::constant(1.0), unit, e2, 2.0) == Approx(12.0));

  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const SemiEuclideanFactor g0(test::random_signature(rng, n));
    const InvariantDirection a(test::random_coefficients(rng, n), g0);
    const Profile phi = test::random_positive(rng);
    const Profile p = test::random_smooth(rng), q = test::random_smooth(rng);
    Eigen::VectorXd x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = test::uniform(rng, -1.0, 1.0);
    const double xi = a.project(std::span<const double>(x.data(), n));
    const double h = 1e-5;
    double inner = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
      e[i] = h;
      auto at = [&](const Profile& f, const Eigen::VectorXd& y) {
        return f(a.project(std::span<const double>(y.data(), n)));
      };
      const double dp = (at(p, x + e) - at(p, x - e)) / (2 * h);
      const double dq = (at(q, x + e) - at(q, x - e)) / (2 * h);
      inner += phi(xi) * phi(xi) * g0.epsilon(i) * dp * dq;
    }
    CHECK(conformal_pairing(p, q, phi, a, g0, xi) == Approx(inner).epsilon(1e-7).scale(1.0));
  }
}

TEST_CASE("non-positive conformal factor is a domain error") {
  const SemiEuclideanFactor g0 = SemiEuclideanFactor::euclidean(2);
  const InvariantDirection a({1.0, 0.0}, g0);
  const Profile phi = Profile::identity();
  CHECK_THROWS_AS(conformal_ricci(phi, a, g0, -1.0), DomainError);
  CHECK_THROWS_AS(conformal_hessian(phi, phi, a, g0, 0.0), DomainError);
  CHECK_THROWS_AS(conformal_laplacian(phi, phi, a, g0, -0.5), DomainError);
}

TEST_CASE("warped Ricci of gallery 1.5 at the origin") {
  const WarpedCandidate c = gallery("1.5").with_explicit_fiber();
  const BlockMatrix r = warped_ricci(c, 0.0, 0.0);
  CHECK(r.max_abs_fiber() == 0.0);
  CHECK(r.max_abs_mixed() == 0.0);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(c.n() + c.m()));
  x[0] = 0.2;
  x[1] = -0.2;
  const BlockMatrix fd = BlockMatrix::split(fd_ricci(metric_field(c), x, 1e-3), c.n(), c.m());
  CHECK((fd.base - r.base).cwiseAbs().maxCoeff() < 1e-5);
  CHECK(fd.fiber.cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("warped Ricci matches the oracle on random candidates") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 12; ++trial) {
    WarpedCandidate raw = test::random_candidate(rng, trial % 2 == 0, Placement::Base, 1.0);
    if (!raw.tau) raw.mu = 0.0;
    // The oracle needs a concrete fiber metric; without tau the fiber is flat.
    WarpedCandidate c = raw.with_explicit_fiber();
    const Eigen::VectorXd x = test::random_point(rng, c);
    const ProductPoint pt = make_product_point(c, x);
    const BlockMatrix closed = warped_ricci(c, pt.xi, pt.zeta);
    CHECK(closed.max_abs_mixed() == 0.0);
    CHECK(max_abs(closed.base - closed.base.transpose()) == 0.0);
    CHECK(max_abs(closed.fiber - closed.fiber.transpose()) == 0.0);
    const MetricField g = metric_field(c);
    const BlockMatrix fd1 = BlockMatrix::split(fd_ricci(g, x, 1e-3), c.n(), c.m());
    const BlockMatrix fd2 = BlockMatrix::split(fd_ricci(g, x, 5e-4), c.n(), c.m());
    auto err = [&](const BlockMatrix& fd) {
      return std::max({max_abs(fd.base - closed.base), max_abs(fd.mixed - closed.mixed),
                       max_abs(fd.fiber - closed.fiber)});
    };
    const double e1 = err(fd1), e2 = err(fd2);
    CHECK(e1 < 1e-5);
    if (e1 > 1e-7) {
      CHECK(e1 / e2 >= 3.0);
      CHECK(e1 / e2 <= 5.0);
    }
  }
}

TEST_CASE("Einstein fiber without tau uses mu g_F") {
  std::mt19937_64 rng(37);
  WarpedCandidate c = test::random_candidate(rng, false, Placement::Base);
  c.mu = 2.5;
  const BlockMatrix r = warped_ricci(c, 0.1, 0.0);
  WarpedCandidate zero = c;
  zero.mu = 0.0;
  const BlockMatrix r0 = warped_ricci(zero, 0.1, 0.0);
  const Matrix gF = fiber_metric(c, 0.0);
  CHECK(max_abs(r.fiber - r0.fiber - 2.5 * gF) < 1e-14);
}

TEST_CASE("singular metric is reported") {
  const MetricField bad(2, [](const Eigen::VectorXd& x) {
    Matrix g = Matrix::Identity(2, 2);
    g(0, 0) = x[0];
    return g;
  });
  CHECK_THROWS_AS(fd_ricci(bad, Eigen::VectorXd::Zero(2), 1e-3), NumericalError);
}

TEST_CASE("default step scales with the coordinate") {
  CHECK(default_fd_step(0.0) == Approx(std::pow(2.220446049250313e-16, 0.25)));
  CHECK(default_fd_step(-3.0) == Approx(4.0 * default_fd_step(0.0)));
}
