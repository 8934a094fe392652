#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "grhs/quadrature.hpp"

namespace grhs {

/// Value and first two derivatives of a one-variable function at a point.
struct Jet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Real interval; endpoints are excluded unless flagged closed.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_closed = false;
  bool hi_closed = false;

  static Interval all() { return {}; }
  static Interval open(double lo, double hi) { return {lo, hi, false, false}; }
  static Interval closed(double lo, double hi) { return {lo, hi, true, true}; }

  bool contains(double t) const {
    const bool above = lo_closed ? t >= lo : t > lo;
    const bool below = hi_closed ? t <= hi : t < hi;
    return above && below;
  }
  bool is_all() const { return lo == -std::numeric_limits<double>::infinity() &&
                               hi == std::numeric_limits<double>::infinity(); }
  Interval intersect(const Interval& other) const;
  bool operator==(const Interval&) const = default;
};

/// Autonomous ODE solution exposed to profiles: the state along a span and
/// the right-hand side used to produce it. Leaves of type ode_state read a
/// component of state(t); their derivatives come from rate() and from
/// rate_derivative() = J(y) rate(y), never from the interpolant.
class StateSource {
 public:
  virtual ~StateSource() = default;
  virtual Interval span() const = 0;
  virtual Eigen::VectorXd state(double t) const = 0;
  virtual Eigen::VectorXd rate(const Eigen::VectorXd& y) const = 0;
  virtual Eigen::VectorXd rate_derivative(const Eigen::VectorXd& y) const = 0;
  /// Kind tag and defining parameters; enough to rebuild the source.
  virtual std::string kind() const = 0;
  virtual std::string describe_json() const = 0;
};

namespace detail {
struct Node;
}

/// Exactly differentiable scalar function of one variable, stored as an
/// immutable expression tree over constant, identity, sum, product,
/// negation, real power, exp, log, plus two numerical leaves: an
/// antiderivative (adaptive quadrature for the value, exact d1/d2 from the
/// integrand) and an ODE state component.
///
/// eval() propagates second-order jets through the tree. derivative()
/// builds the derivative as a new tree. Constants are folded on construction.
class Profile {
 public:
  /// The zero constant.
  Profile();

  static Profile constant(double c);
  static Profile identity();
  /// offset + integral from ref to t of integrand. ref must lie in the
  /// integrand's domain.
  static Profile antiderivative(const Profile& integrand, double ref, double offset = 0.0,
                                double tol = kDefaultQuadratureTolerance);
  static Profile ode_state(std::shared_ptr<const StateSource> source, std::size_t component);

  /// Throws DomainError outside domain() or on an inadmissible intermediate
  /// (log of a non-positive value, fractional power of a negative value,
  /// any non-finite result).
  Jet eval(double t) const;
  double operator()(double t) const;

  Profile derivative() const;

  const Interval& domain() const { return domain_; }
  /// Same expression on domain() intersected with d.
  Profile restricted(const Interval& d) const;

  std::optional<double> constant_value() const;
  /// True when the tree holds a quadrature or ODE leaf.
  bool is_numerical() const;
  std::size_t node_count() const;
  std::string to_string() const;

  const detail::Node& root() const { return *root_; }
  static Profile from_root(std::shared_ptr<const detail::Node> root, Interval domain);

  friend Profile operator+(const Profile& a, const Profile& b);
  friend Profile operator*(const Profile& a, const Profile& b);
  friend Profile operator-(const Profile& a);
  friend Profile pow(const Profile& base, double exponent);
  friend Profile exp(const Profile& a);
  friend Profile log(const Profile& a);

 private:
  Profile(std::shared_ptr<const detail::Node> root, Interval domain);
  std::shared_ptr<const detail::Node> root_;
  Interval domain_;
};

Profile operator-(const Profile& a, const Profile& b);
Profile operator/(const Profile& a, const Profile& b);
Profile operator+(const Profile& a, double c);
Profile operator+(double c, const Profile& a);
Profile operator-(const Profile& a, double c);
Profile operator-(double c, const Profile& a);
Profile operator*(double c, const Profile& a);
Profile operator*(const Profile& a, double c);
Profile operator/(const Profile& a, double c);
Profile operator/(double c, const Profile& a);
Profile sqrt(const Profile& a);

namespace detail {

enum class Op { Constant, Identity, Sum, Product, Negate, Power, Exp, Log, Antiderivative, OdeState };

struct Node {
  Op op = Op::Constant;
  // Constant value, Power exponent, or Antiderivative offset.
  double value = 0.0;
  // Antiderivative reference point and quadrature tolerance.
  double ref = 0.0;
  double tol = 0.0;
  std::vector<std::shared_ptr<const Node>> args;
  // Antiderivative: domain of the integrand.
  Interval integrand_domain;
  std::shared_ptr<const StateSource> source;
  std::size_t component = 0;
};

const char* op_name(Op op);

}  // namespace detail
}  // namespace grhs
