#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "grhs/core.hpp"
#include "grhs/error.hpp"
#include "grhs/gallery.hpp"
#include "grhs/ode.hpp"
#include "grhs/profile.hpp"
#include "grhs/quadrature.hpp"
#include "support.hpp"

using namespace grhs;
using doctest::Approx;

TEST_CASE("pseudo norm") {
  const SemiEuclideanFactor lor2({-1, 1});
  CHECK(pseudo_norm_sq(std::vector<double>{1.0, 1.0}, lor2) == 0.0);
  const SemiEuclideanFactor e3 = SemiEuclideanFactor::euclidean(3);
  CHECK(pseudo_norm_sq(std::vector<double>{1.0, 0.0, 0.0}, e3) == 1.0);
  const SemiEuclideanFactor lor3 = SemiEuclideanFactor::lorentzian(3);
  CHECK(pseudo_norm_sq(std::vector<double>{2.0, 1.0, 0.0}, lor3) == -3.0);
  const InvariantDirection d({2.0, 1.0, 0.0}, lor3);
  CHECK(d.norm_sq() == -3.0);
  CHECK(d.project(std::vector<double>{1.0, 2.0, 3.0}) == 4.0);
}

TEST_CASE("pseudo norm is permutation invariant") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t dim = 1 + trial % 6;
    auto sig = test::random_signature(rng, dim);
    auto a = test::random_coefficients(rng, dim);
    std::vector<std::size_t> perm(dim);
    for (std::size_t i = 0; i < dim; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> sig_p(dim);
    std::vector<double> a_p(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      sig_p[i] = sig[perm[i]];
      a_p[i] = a[perm[i]];
    }
    CHECK(pseudo_norm_sq(a, SemiEuclideanFactor(sig)) ==
          Approx(pseudo_norm_sq(a_p, SemiEuclideanFactor(sig_p))).epsilon(1e-15));
  }
}

TEST_CASE("factor and direction validation") {
  CHECK_THROWS_AS(SemiEuclideanFactor({}), ConfigError);
  CHECK_THROWS_AS(SemiEuclideanFactor({1, 0}), ConfigError);
  CHECK_THROWS_AS(InvariantDirection({0.0, 0.0}, SemiEuclideanFactor::euclidean(2)), ConfigError);
  CHECK_THROWS_AS(InvariantDirection({1.0}, SemiEuclideanFactor::euclidean(2)), ConfigError);
}

TEST_CASE("jets of elementary profiles") {
  const Profile t = Profile::identity();
  const Jet e = exp(2.0 * t).eval(0.0);
  CHECK(e.value == 1.0);
  CHECK(e.d1 == 2.0);
  CHECK(e.d2 == 4.0);

  const Jet p = pow(t, 1.0 / (2.0 - 3.0)).eval(4.0);
  CHECK(p.value == Approx(0.25).epsilon(1e-15));
  CHECK(p.d1 == Approx(-0.0625).epsilon(1e-15));
  CHECK(p.d2 == Approx(0.03125).epsilon(1e-15));

  const Jet l = log(t).eval(2.0);
  CHECK(l.value == Approx(std::log(2.0)));
  CHECK(l.d1 == 0.5);
  CHECK(l.d2 == -0.25);
}

TEST_CASE("gallery 1.5 potential satisfies its linear ODE") {
  const WarpedCandidate c = gallery("1.5");
  const double k = 1.0, n = 3.0, m = 2.0, theta = 1.0;
  const Jet h = c.h.eval(0.0);
  CHECK(h.value == Approx(-0.5));
  CHECK(h.d1 == Approx(k / 2.0 * (2.0 - n + 3.0 * m + theta) + 1.0));
  for (double xi : {-2.0, 0.0, 1.5}) {
    const Jet j = c.h.eval(xi);
    CHECK(j.d2 + 2.0 * k * j.d1 == Approx(k * k * (2.0 - n + 3.0 * m + theta)).epsilon(1e-13));
  }
}

TEST_CASE("domain errors are raised, never silent") {
  const Profile t = Profile::identity();
  CHECK_THROWS_AS(log(t).eval(-1.0), DomainError);
  CHECK_THROWS_AS(pow(t, 0.5).eval(-1.0), DomainError);
  CHECK_THROWS_AS((1.0 / t).eval(0.0), DomainError);
  CHECK_THROWS_AS(t.restricted(Interval::open(0.0, 1.0)).eval(2.0), DomainError);
  CHECK(pow(t, 2.0).eval(-3.0).value == 9.0);
  CHECK(exp(t).restricted(Interval::open(0.0, 1.0)).domain() == Interval::open(0.0, 1.0));
}

TEST_CASE("constants fold") {
  const Profile c = exp(Profile::constant(0.0)) * 3.0 + 1.0;
  REQUIRE(c.constant_value().has_value());
  CHECK(*c.constant_value() == 4.0);
  CHECK(c.derivative().constant_value().value_or(-1.0) == 0.0);
  CHECK(c.node_count() == 1);
}

namespace {

// Random expression tree that stays finite on [-1, 1].
Profile random_tree(std::mt19937_64& rng, int depth) {
  const Profile t = Profile::identity();
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 6);
  switch (pick(rng)) {
    case 0: return Profile::constant(test::uniform(rng, -2.0, 2.0));
    case 1: return test::uniform(rng, 0.5, 1.5) * t + test::uniform(rng, -0.5, 0.5);
    case 2: return random_tree(rng, depth - 1) + random_tree(rng, depth - 1);
    case 3: return random_tree(rng, depth - 1) * random_tree(rng, depth - 1);
    case 4: return exp(0.3 * random_tree(rng, depth - 1));
    case 5: return log(exp(0.2 * random_tree(rng, depth - 1)) + 0.5);
    default: return pow(exp(0.2 * random_tree(rng, depth - 1)) + 0.5, test::uniform(rng, -2.5, 2.5));
  }
}

}  // namespace

TEST_CASE("structural derivatives match finite differences on random trees") {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int tree = 0; tree < 100; ++tree) {
    const Profile p = random_tree(rng, 4);
    const Profile dp = p.derivative();
    for (int k = 0; k < 10; ++k) {
      const double x = test::uniform(rng, -1.0, 1.0);
      const Jet j = p.eval(x);
      const double scale = 1.0 + std::abs(j.value) + std::abs(j.d1) + std::abs(j.d2);
      // O(h^2) truncation at h = 1e-3 plus cancellation.
      CHECK(std::abs(j.d1 - test::fd_d1(p, x, 1e-4)) <= 1e-6 * scale);
      CHECK(std::abs(j.d2 - test::fd_d2(p, x, 1e-3)) <= 1e-4 * scale);
      // The derivative tree agrees with the propagated jet.
      const Jet dj = dp.eval(x);
      CHECK(dj.value == Approx(j.d1).epsilon(1e-12).scale(scale));
      CHECK(dj.d1 == Approx(j.d2).epsilon(1e-12).scale(scale));
      ++checked;
    }
  }
  CHECK(checked == 1000);
}

TEST_CASE("antiderivative leaf: exact derivatives, quadrature value") {
  const Profile t = Profile::identity();
  const Profile g = exp(-t * t);
  const Profile F = Profile::antiderivative(g, 0.0, 2.0, 1e-13);
  const Jet j = F.eval(1.0);
  CHECK(j.value == Approx(2.0 + std::sqrt(M_PI) / 2.0 * std::erf(1.0)).epsilon(1e-13));
  CHECK(j.d1 == Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(j.d2 == Approx(-2.0 * std::exp(-1.0)).epsilon(1e-15));
  CHECK(F.is_numerical());
  CHECK_FALSE(g.is_numerical());
  CHECK_THROWS_AS(Profile::antiderivative(log(t), -1.0), DomainError);
}

TEST_CASE("adaptive quadrature") {
  const auto r = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-13);
  CHECK(r.value == Approx(2.0).epsilon(1e-13));
  const auto back = integrate_adaptive([](double x) { return x * x; }, 1.0, 0.0);
  CHECK(back.value == Approx(-1.0 / 3.0).epsilon(1e-14));
  const auto peaked = integrate_adaptive([](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0, 1e-10);
  CHECK(peaked.value == Approx(2.0 * std::atan(100.0) / 1e-2).epsilon(1e-10));
  CHECK_THROWS_AS(integrate_adaptive([](double) { return std::nan(""); }, 0.0, 1.0), NumericalError);
}

TEST_CASE("Dormand-Prince on a harmonic oscillator") {
  const OdeRhs rhs = [](double, const Vector& y) {
    Vector d(2);
    d << y[1], -y[0];
    return d;
  };
  Vector y0(2);
  y0 << 1.0, 0.0;
  const OdeResult r = integrate_dopri5(rhs, 0.0, y0, 10.0);
  REQUIRE(r.status == OdeStatus::Completed);
  CHECK(r.y_stop[0] == Approx(std::cos(10.0)).epsilon(1e-8));
  for (double t : {0.3, 2.7, 9.99}) {
    CHECK(std::abs(r.trajectory(t)[0] - std::cos(t)) < 1e-8);
  }
  const OdeResult back = integrate_dopri5(rhs, 0.0, y0, -3.0);
  CHECK(back.y_stop[1] == Approx(std::sin(3.0)).epsilon(1e-8));
  CHECK_THROWS_AS(r.trajectory(11.0), DomainError);
}

TEST_CASE("Dormand-Prince reports finite-time blow-up") {
  const OdeRhs rhs = [](double, const Vector& y) {
    Vector d(1);
    d << y[0] * y[0];
    return d;
  };
  Vector y0(1);
  y0 << 1.0;
  const OdeResult r = integrate_dopri5(rhs, 0.0, y0, 2.0);
  CHECK(r.status != OdeStatus::Completed);
  CHECK(r.t_stop < 1.0);
  CHECK(r.t_stop > 0.99);
}
