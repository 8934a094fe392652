#include "grhs/profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "grhs/error.hpp"

namespace grhs {

using detail::Node;
using detail::Op;
using NodePtr = std::shared_ptr<const Node>;

Interval Interval::intersect(const Interval& other) const {
  Interval out = *this;
  if (other.lo > out.lo || (other.lo == out.lo && !other.lo_closed)) {
    out.lo = other.lo;
    out.lo_closed = other.lo_closed;
  }
  if (other.hi < out.hi || (other.hi == out.hi && !other.hi_closed)) {
    out.hi = other.hi;
    out.hi_closed = other.hi_closed;
  }
  return out;
}

namespace detail {

const char* op_name(Op op) {
  switch (op) {
    case Op::Constant: return "const";
    case Op::Identity: return "id";
    case Op::Sum: return "sum";
    case Op::Product: return "product";
    case Op::Negate: return "neg";
    case Op::Power: return "pow";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Antiderivative: return "antiderivative";
    case Op::OdeState: return "ode_state";
  }
  return "?";
}

}  // namespace detail

namespace {

NodePtr make_constant(double c) {
  auto n = std::make_shared<Node>();
  n->op = Op::Constant;
  n->value = c;
  return n;
}

std::optional<double> as_constant(const Node& n) {
  if (n.op == Op::Constant) return n.value;
  return std::nullopt;
}

bool is_integer(double p) { return std::floor(p) == p; }

// slope * t + intercept, when the subtree is affine in t.
std::optional<std::pair<double, double>> affine_form(const Node& n) {
  switch (n.op) {
    case Op::Constant: return std::pair{0.0, n.value};
    case Op::Identity: return std::pair{1.0, 0.0};
    case Op::Negate: {
      auto a = affine_form(*n.args[0]);
      if (!a) return std::nullopt;
      return std::pair{-a->first, -a->second};
    }
    case Op::Sum: {
      double s = 0.0, c = 0.0;
      for (const auto& arg : n.args) {
        auto a = affine_form(*arg);
        if (!a) return std::nullopt;
        s += a->first;
        c += a->second;
      }
      return std::pair{s, c};
    }
    case Op::Product: {
      double factor = 1.0;
      std::optional<std::pair<double, double>> variable;
      for (const auto& arg : n.args) {
        if (auto c = as_constant(*arg)) {
          factor *= *c;
          continue;
        }
        if (variable) return std::nullopt;
        variable = affine_form(*arg);
        if (!variable) return std::nullopt;
      }
      if (!variable) return std::pair{0.0, factor};
      return std::pair{factor * variable->first, factor * variable->second};
    }
    default: return std::nullopt;
  }
}

// Where the argument of a log or fractional power stays positive.
Interval positivity_domain(const Node& arg) {
  auto a = affine_form(arg);
  if (!a || a->first == 0.0) return Interval::all();
  const double root = -a->second / a->first;
  if (a->first > 0.0) return Interval::open(root, std::numeric_limits<double>::infinity());
  return Interval::open(-std::numeric_limits<double>::infinity(), root);
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

[[noreturn]] void throw_domain(const char* what, double t) {
  throw DomainError(std::string(what) + " at t = " + format_number(t));
}

Jet finite_or_throw(Jet j, Op op, double t) {
  if (!std::isfinite(j.value) || !std::isfinite(j.d1) || !std::isfinite(j.d2)) {
    throw DomainError(std::string("non-finite intermediate in ") + detail::op_name(op) +
                      " at t = " + format_number(t));
  }
  return j;
}

Jet eval_node(const Node& n, double t, int order);

double eval_value(const Node& n, double t) { return eval_node(n, t, 0).value; }

Jet eval_node(const Node& n, double t, int order) {
  switch (n.op) {
    case Op::Constant: return {n.value, 0.0, 0.0};
    case Op::Identity: return {t, 1.0, 0.0};
    case Op::Sum: {
      Jet out;
      for (const auto& arg : n.args) {
        const Jet a = eval_node(*arg, t, order);
        out.value += a.value;
        out.d1 += a.d1;
        out.d2 += a.d2;
      }
      return out;
    }
    case Op::Negate: {
      const Jet a = eval_node(*n.args[0], t, order);
      return {-a.value, -a.d1, -a.d2};
    }
    case Op::Product: {
      Jet out{1.0, 0.0, 0.0};
      for (const auto& arg : n.args) {
        const Jet a = eval_node(*arg, t, order);
        out = {out.value * a.value, out.d1 * a.value + out.value * a.d1,
               out.d2 * a.value + 2.0 * out.d1 * a.d1 + out.value * a.d2};
      }
      return finite_or_throw(out, n.op, t);
    }
    case Op::Power: {
      const Jet a = eval_node(*n.args[0], t, order);
      const double p = n.value;
      if (a.value < 0.0 && !is_integer(p)) throw_domain("fractional power of a negative value", t);
      if (a.value == 0.0 && p < 0.0) throw_domain("negative power of zero", t);
      Jet out;
      out.value = std::pow(a.value, p);
      if (order >= 1) {
        const double pm1 = std::pow(a.value, p - 1.0);
        out.d1 = a.d1 == 0.0 ? 0.0 : p * pm1 * a.d1;
        if (order >= 2) {
          const double quad = a.d1 == 0.0 ? 0.0 : p * (p - 1.0) * std::pow(a.value, p - 2.0) * a.d1 * a.d1;
          const double lin = a.d2 == 0.0 ? 0.0 : p * pm1 * a.d2;
          out.d2 = quad + lin;
        }
      }
      return finite_or_throw(out, n.op, t);
    }
    case Op::Exp: {
      const Jet a = eval_node(*n.args[0], t, order);
      const double e = std::exp(a.value);
      return finite_or_throw({e, e * a.d1, e * (a.d2 + a.d1 * a.d1)}, n.op, t);
    }
    case Op::Log: {
      const Jet a = eval_node(*n.args[0], t, order);
      if (!(a.value > 0.0)) throw_domain("log of a non-positive value", t);
      const double r = a.d1 / a.value;
      return finite_or_throw({std::log(a.value), r, a.d2 / a.value - r * r}, n.op, t);
    }
    case Op::Antiderivative: {
      if (!n.integrand_domain.contains(t) || !n.integrand_domain.contains(n.ref)) {
        throw_domain("antiderivative evaluated outside its integrand's domain", t);
      }
      const Node& integrand = *n.args[0];
      Jet out;
      const QuadratureResult q = integrate_adaptive(
          [&integrand](double x) { return eval_value(integrand, x); }, n.ref, t, n.tol);
      out.value = n.value + q.value;
      if (order >= 1) {
        const Jet g = eval_node(integrand, t, order - 1);
        out.d1 = g.value;
        out.d2 = g.d1;
      }
      return finite_or_throw(out, n.op, t);
    }
    case Op::OdeState: {
      if (!n.source->span().contains(t)) throw_domain("ODE state evaluated outside its span", t);
      const Eigen::VectorXd y = n.source->state(t);
      const auto c = static_cast<Eigen::Index>(n.component);
      Jet out{y[c], 0.0, 0.0};
      if (order >= 1) out.d1 = n.source->rate(y)[c];
      if (order >= 2) out.d2 = n.source->rate_derivative(y)[c];
      return finite_or_throw(out, n.op, t);
    }
  }
  throw std::logic_error("unhandled profile node");
}

void count_nodes(const Node& n, std::size_t& count) {
  ++count;
  for (const auto& a : n.args) count_nodes(*a, count);
}

bool has_numerical_leaf(const Node& n) {
  if (n.op == Op::Antiderivative || n.op == Op::OdeState) return true;
  return std::any_of(n.args.begin(), n.args.end(), [](const NodePtr& a) { return has_numerical_leaf(*a); });
}

void print(const Node& n, std::ostream& os) {
  switch (n.op) {
    case Op::Constant: os << format_number(n.value); return;
    case Op::Identity: os << "t"; return;
    case Op::Sum:
    case Op::Product: {
      os << "(";
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) os << (n.op == Op::Sum ? " + " : " * ");
        print(*n.args[i], os);
      }
      os << ")";
      return;
    }
    case Op::Negate: os << "-"; print(*n.args[0], os); return;
    case Op::Power: os << "pow("; print(*n.args[0], os); os << ", " << format_number(n.value) << ")"; return;
    case Op::Exp: os << "exp("; print(*n.args[0], os); os << ")"; return;
    case Op::Log: os << "log("; print(*n.args[0], os); os << ")"; return;
    case Op::Antiderivative:
      os << "int[" << format_number(n.ref) << ",t](";
      print(*n.args[0], os);
      os << ") + " << format_number(n.value);
      return;
    case Op::OdeState: os << "ode[" << n.source->kind() << "][" << n.component << "]"; return;
  }
}

}  // namespace

Profile::Profile() : Profile(make_constant(0.0), Interval::all()) {}

Profile::Profile(std::shared_ptr<const Node> root, Interval domain)
    : root_(std::move(root)), domain_(domain) {}

Profile Profile::from_root(std::shared_ptr<const Node> root, Interval domain) {
  return Profile(std::move(root), domain);
}

Profile Profile::constant(double c) {
  if (!std::isfinite(c)) throw DomainError("profile constant must be finite");
  return Profile(make_constant(c), Interval::all());
}

Profile Profile::identity() {
  auto n = std::make_shared<Node>();
  n->op = Op::Identity;
  return Profile(n, Interval::all());
}

Profile Profile::antiderivative(const Profile& integrand, double ref, double offset, double tol) {
  if (!integrand.domain().contains(ref)) {
    throw DomainError("antiderivative reference point " + format_number(ref) +
                      " lies outside the integrand's domain");
  }
  if (auto c = integrand.constant_value()) {
    if (*c == 0.0) return constant(offset).restricted(integrand.domain());
    return (*c * (identity() - ref) + offset).restricted(integrand.domain());
  }
  auto n = std::make_shared<Node>();
  n->op = Op::Antiderivative;
  n->value = offset;
  n->ref = ref;
  n->tol = tol;
  n->integrand_domain = integrand.domain();
  n->args = {integrand.root_};
  return Profile(n, integrand.domain());
}

Profile Profile::ode_state(std::shared_ptr<const StateSource> source, std::size_t component) {
  if (!source) throw ConfigError("ode_state needs a state source");
  const Interval span = source->span();
  auto n = std::make_shared<Node>();
  n->op = Op::OdeState;
  n->source = std::move(source);
  n->component = component;
  return Profile(n, span);
}

Jet Profile::eval(double t) const {
  if (!domain_.contains(t)) throw_domain("profile evaluated outside its domain", t);
  return finite_or_throw(eval_node(*root_, t, 2), root_->op, t);
}

double Profile::operator()(double t) const {
  if (!domain_.contains(t)) throw_domain("profile evaluated outside its domain", t);
  return finite_or_throw(eval_node(*root_, t, 0), root_->op, t).value;
}

Profile Profile::restricted(const Interval& d) const { return Profile(root_, domain_.intersect(d)); }

std::optional<double> Profile::constant_value() const { return as_constant(*root_); }

bool Profile::is_numerical() const { return has_numerical_leaf(*root_); }

std::size_t Profile::node_count() const {
  std::size_t count = 0;
  count_nodes(*root_, count);
  return count;
}

std::string Profile::to_string() const {
  std::ostringstream os;
  print(*root_, os);
  return os.str();
}

Profile operator+(const Profile& a, const Profile& b) {
  std::vector<NodePtr> terms;
  double c = 0.0;
  for (const Profile* p : {&a, &b}) {
    const Node& n = *p->root_;
    if (n.op == Op::Sum) {
      for (const auto& arg : n.args) {
        if (auto k = as_constant(*arg)) c += *k;
        else terms.push_back(arg);
      }
    } else if (auto k = as_constant(n)) {
      c += *k;
    } else {
      terms.push_back(p->root_);
    }
  }
  const Interval d = a.domain_.intersect(b.domain_);
  if (c != 0.0) terms.push_back(make_constant(c));
  if (terms.empty()) return Profile(make_constant(0.0), d);
  if (terms.size() == 1) return Profile(terms.front(), d);
  auto n = std::make_shared<Node>();
  n->op = Op::Sum;
  n->args = std::move(terms);
  return Profile(n, d);
}

Profile operator*(const Profile& a, const Profile& b) {
  std::vector<NodePtr> factors;
  double c = 1.0;
  for (const Profile* p : {&a, &b}) {
    const Node& n = *p->root_;
    if (n.op == Op::Product) {
      for (const auto& arg : n.args) {
        if (auto k = as_constant(*arg)) c *= *k;
        else factors.push_back(arg);
      }
    } else if (auto k = as_constant(n)) {
      c *= *k;
    } else {
      factors.push_back(p->root_);
    }
  }
  const Interval d = a.domain_.intersect(b.domain_);
  if (c == 0.0 || factors.empty()) return Profile(make_constant(c), d);
  if (c == -1.0 && factors.size() == 1) return -Profile(factors.front(), d);
  if (c != 1.0) factors.insert(factors.begin(), make_constant(c));
  if (factors.size() == 1) return Profile(factors.front(), d);
  auto n = std::make_shared<Node>();
  n->op = Op::Product;
  n->args = std::move(factors);
  return Profile(n, d);
}

Profile operator-(const Profile& a) {
  const Node& n = *a.root_;
  if (auto k = as_constant(n)) return Profile(make_constant(-*k), a.domain_);
  if (n.op == Op::Negate) return Profile(n.args[0], a.domain_);
  auto out = std::make_shared<Node>();
  out->op = Op::Negate;
  out->args = {a.root_};
  return Profile(out, a.domain_);
}

Profile pow(const Profile& base, double exponent) {
  if (!std::isfinite(exponent)) throw DomainError("power exponent must be finite");
  if (exponent == 0.0) return Profile(make_constant(1.0), base.domain_);
  if (exponent == 1.0) return base;
  if (auto k = as_constant(*base.root_)) {
    if (*k < 0.0 && !is_integer(exponent)) throw DomainError("fractional power of a negative constant");
    if (*k == 0.0 && exponent < 0.0) throw DomainError("negative power of zero");
    return Profile(make_constant(std::pow(*k, exponent)), base.domain_);
  }
  Interval d = base.domain_;
  if (!is_integer(exponent)) d = d.intersect(positivity_domain(*base.root_));
  auto n = std::make_shared<Node>();
  n->op = Op::Power;
  n->value = exponent;
  n->args = {base.root_};
  return Profile(n, d);
}

Profile exp(const Profile& a) {
  if (auto k = as_constant(*a.root_)) return Profile(make_constant(std::exp(*k)), a.domain_);
  auto n = std::make_shared<Node>();
  n->op = Op::Exp;
  n->args = {a.root_};
  return Profile(n, a.domain_);
}

Profile log(const Profile& a) {
  if (auto k = as_constant(*a.root_)) {
    if (!(*k > 0.0)) throw DomainError("log of a non-positive constant");
    return Profile(make_constant(std::log(*k)), a.domain_);
  }
  auto n = std::make_shared<Node>();
  n->op = Op::Log;
  n->args = {a.root_};
  return Profile(n, a.domain_.intersect(positivity_domain(*a.root_)));
}

Profile operator-(const Profile& a, const Profile& b) { return a + (-b); }
Profile operator/(const Profile& a, const Profile& b) { return a * pow(b, -1.0); }
Profile operator+(const Profile& a, double c) { return a + Profile::constant(c); }
Profile operator+(double c, const Profile& a) { return Profile::constant(c) + a; }
Profile operator-(const Profile& a, double c) { return a + Profile::constant(-c); }
Profile operator-(double c, const Profile& a) { return Profile::constant(c) + (-a); }
Profile operator*(double c, const Profile& a) { return Profile::constant(c) * a; }
Profile operator*(const Profile& a, double c) { return a * Profile::constant(c); }
Profile operator/(const Profile& a, double c) { return a * Profile::constant(1.0 / c); }
Profile operator/(double c, const Profile& a) { return Profile::constant(c) * pow(a, -1.0); }
Profile sqrt(const Profile& a) { return pow(a, 0.5); }

Profile Profile::derivative() const {
  const Node& n = *root_;
  const Interval d = domain_;
  auto wrap = [&d](NodePtr p) { return Profile(std::move(p), d); };
  switch (n.op) {
    case Op::Constant: return Profile(make_constant(0.0), d);
    case Op::Identity: return Profile(make_constant(1.0), d);
    case Op::Sum: {
      Profile out(make_constant(0.0), d);
      for (const auto& arg : n.args) out = out + wrap(arg).derivative();
      return out;
    }
    case Op::Negate: return -wrap(n.args[0]).derivative();
    case Op::Product: {
      Profile out(make_constant(0.0), d);
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        Profile term = wrap(n.args[i]).derivative();
        for (std::size_t j = 0; j < n.args.size(); ++j) {
          if (j != i) term = term * wrap(n.args[j]);
        }
        out = out + term;
      }
      return out;
    }
    case Op::Power: {
      const Profile base = wrap(n.args[0]);
      return n.value * pow(base, n.value - 1.0) * base.derivative();
    }
    case Op::Exp: return wrap(root_) * wrap(n.args[0]).derivative();
    case Op::Log: {
      const Profile a = wrap(n.args[0]);
      return a.derivative() * pow(a, -1.0);
    }
    case Op::Antiderivative: return Profile(n.args[0], n.integrand_domain).restricted(d);
    case Op::OdeState:
      throw std::logic_error("ode_state leaves expose exact derivatives through eval() only");
  }
  throw std::logic_error("unhandled profile node");
}

}  // namespace grhs
