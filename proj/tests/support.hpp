#pragma once

#include <Eigen/Core>
#include <cmath>
#include <random>
#include <vector>

#include "grhs/candidate.hpp"
#include "grhs/profile.hpp"

namespace grhs::test {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::vector<int> random_signature(std::mt19937_64& rng, std::size_t dim) {
  std::vector<int> s(dim);
  for (auto& e : s) e = uniform(rng, 0.0, 1.0) < 0.3 ? -1 : 1;
  return s;
}

inline std::vector<double> random_coefficients(std::mt19937_64& rng, std::size_t dim) {
  std::vector<double> a(dim);
  for (auto& e : a) e = uniform(rng, -1.0, 1.0);
  return a;
}

// Positive and bounded away from zero on [-3, 3] for the coefficient ranges used.
// Oracle tests pass a larger rate so truncation error dominates round-off.
inline Profile random_positive(std::mt19937_64& rng, double rate = 0.4) {
  const Profile t = Profile::identity();
  return uniform(rng, 0.5, 1.5) * exp(uniform(rng, -rate, rate) * t + uniform(rng, -0.05, 0.05) * t * t) +
         uniform(rng, 0.2, 0.6);
}

inline Profile random_smooth(std::mt19937_64& rng) {
  const Profile t = Profile::identity();
  return uniform(rng, -1.0, 1.0) * t + uniform(rng, -0.3, 0.3) * t * t +
         uniform(rng, -0.5, 0.5) * exp(uniform(rng, -0.5, 0.5) * t);
}

// Smooth candidate with no soliton structure, for operator-level oracles.
inline WarpedCandidate random_candidate(std::mt19937_64& rng, bool with_tau, Placement placement,
                                        double rate = 0.4) {
  WarpedCandidate c;
  c.name = "random";
  const std::size_t n = 2 + static_cast<std::size_t>(uniform(rng, 0.0, 2.0));
  const std::size_t m = 2 + static_cast<std::size_t>(uniform(rng, 0.0, 2.0));
  c.base = SemiEuclideanFactor(random_signature(rng, n));
  c.alpha = InvariantDirection(random_coefficients(rng, n), c.base);
  c.fiber = SemiEuclideanFactor(random_signature(rng, m));
  c.phi = random_positive(rng, rate);
  c.f = random_positive(rng, rate);
  c.h = random_smooth(rng);
  c.u = random_smooth(rng);
  c.theta = uniform(rng, 0.0, 2.0);
  c.lambda = uniform(rng, -1.0, 1.0);
  c.mu = uniform(rng, -1.0, 1.0);
  if (with_tau) {
    c.beta = InvariantDirection(random_coefficients(rng, m), c.fiber);
    c.tau = random_positive(rng, rate);
  }
  c.u_placement = with_tau ? placement : Placement::Base;
  return c;
}

// Point of R^(n+m) with coordinates in [-r, r].
inline Eigen::VectorXd random_point(std::mt19937_64& rng, const WarpedCandidate& c, double r = 1.0) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(c.n() + c.m()));
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = uniform(rng, -r, r);
  return x;
}

// Central-difference first and second derivatives.
inline double fd_d1(const Profile& p, double t, double h) { return (p(t + h) - p(t - h)) / (2.0 * h); }
inline double fd_d2(const Profile& p, double t, double h) {
  return (p(t + h) - 2.0 * p(t) + p(t - h)) / (h * h);
}

}  // namespace grhs::test
