#include "grhs/gallery.hpp"

#include <cmath>

#include "grhs/error.hpp"

namespace grhs {

namespace {

std::size_t dim_param(double v, const char* name) {
  if (!(v >= 1.0) || v != std::floor(v)) throw ConfigError(std::string(name) + " must be a positive integer");
  return static_cast<std::size_t>(v);
}

std::vector<double> null_direction(std::size_t dim) {
  if (dim < 2) throw ConfigError("a null direction needs dimension >= 2");
  std::vector<double> a(dim, 0.0);
  a[0] = 1.0;
  a[1] = 1.0;
  return a;
}

std::map<std::string, double> merged(std::string_view id, const GalleryOptions& options) {
  std::map<std::string, double> p = gallery_defaults(id);
  for (const auto& [key, value] : options.overrides) {
    auto it = p.find(key);
    if (it == p.end()) throw ConfigError("gallery " + std::string(id) + " has no parameter \"" + key + "\"");
    if (!std::isfinite(value)) throw ConfigError("gallery parameter \"" + key + "\" must be finite");
    it->second = value;
  }
  return p;
}

std::string variant_of(std::string_view id, const GalleryOptions& options) {
  const auto variants = gallery_variants(id);
  if (options.variant.empty()) return variants.front();
  for (const auto& v : variants) {
    if (v == options.variant) return v;
  }
  throw ConfigError("gallery " + std::string(id) + " has no variant \"" + options.variant + "\"");
}

WarpedCandidate example_1_5(const std::map<std::string, double>& p) {
  const double k = p.at("k"), theta = p.at("theta"), k1 = p.at("k1"), k2 = p.at("k2");
  const std::size_t n = dim_param(p.at("n"), "n"), m = dim_param(p.at("m"), "m");
  if (k == 0.0) throw ConfigError("k must be non-zero");
  const double nd = static_cast<double>(n), md = static_cast<double>(m);
  WarpedCandidate c;
  c.name = "1.5";
  c.base = SemiEuclideanFactor::lorentzian(n);
  c.alpha = InvariantDirection(null_direction(n), c.base);
  c.fiber = SemiEuclideanFactor::euclidean(m);
  const Profile t = Profile::identity();
  c.phi = exp(k * t);
  c.f = exp(k * t);
  c.u = k * t;
  c.h = (k / 2.0) * (2.0 - nd + 3.0 * md + theta) * t - (k1 / (2.0 * k)) * exp(-2.0 * k * t) + k2;
  c.u_placement = Placement::Base;
  c.theta = theta;
  return c;
}

WarpedCandidate example_1_8(const std::map<std::string, double>& p, const std::string& variant) {
  const double A = p.at("A"), k = p.at("k"), theta = p.at("theta");
  const double c7 = p.at("c7"), c8 = p.at("c8"), c9 = p.at("c9");
  const std::size_t n = dim_param(p.at("n"), "n"), m = dim_param(p.at("m"), "m");
  if (A == 0.0 || !(k > 0.0)) throw ConfigError("gallery 1.8 needs A != 0 and k > 0");
  if (m < 2 || !(theta > 0.0)) throw ConfigError("gallery 1.8 needs m >= 2 and theta > 0");
  const double nd = static_cast<double>(n), md = static_cast<double>(m);
  WarpedCandidate c;
  c.name = "1.8";
  c.base = SemiEuclideanFactor::lorentzian(n);
  c.alpha = InvariantDirection(null_direction(n), c.base);
  c.fiber = SemiEuclideanFactor::lorentzian(m);
  c.beta = InvariantDirection(null_direction(m), c.fiber);
  const Profile t = Profile::identity();
  c.phi = k * exp(A * t);
  c.f = k * exp(A * t);
  c.tau = t * t + 1.0;
  const double linear = 2.0 - nd + 3.0 * md + (variant == "printed" ? theta : 0.0);
  c.h = linear * (A / 2.0) * t - (c7 / (2.0 * A * k * k)) * exp(-2.0 * A * t) + c8;
  c.u = -std::sqrt(2.0 * (md - 2.0) / theta) * log(t + pow(t * t + 1.0, 0.5)) + c9;
  c.u_placement = Placement::Fiber;
  c.theta = theta;
  return c;
}

WarpedCandidate example_1_9(const std::map<std::string, double>& p) {
  const double k = p.at("k"), theta = p.at("theta");
  const std::size_t n = dim_param(p.at("n"), "n"), m = dim_param(p.at("m"), "m");
  const double nd = static_cast<double>(n), md = static_cast<double>(m);
  const double radicand = theta * k * k / (-k * k * (nd - 2.0) - md);
  if (!(radicand >= 0.0) || !std::isfinite(radicand)) {
    throw ConfigError("gallery 1.9 needs theta k^2 / (-k^2 (n-2) - m) >= 0");
  }
  WarpedCandidate c;
  c.name = "1.9";
  c.base = SemiEuclideanFactor::euclidean(n);
  std::vector<double> e1(n, 0.0);
  e1[0] = 1.0;
  c.alpha = InvariantDirection(e1, c.base);
  c.fiber = SemiEuclideanFactor::euclidean(m);
  const Profile t = Profile::identity();
  c.f = exp(std::sqrt(radicand) * t);
  c.phi = pow(c.f, k);
  c.h = (md - k * (nd - 2.0)) * log(c.f);
  c.u = k * t;
  c.u_placement = Placement::Base;
  c.theta = theta;
  return c;
}

WarpedCandidate example_1_10(const std::map<std::string, double>& p) {
  const double b = p.at("b"), c4 = p.at("c4"), c5 = p.at("c5"), theta = p.at("theta");
  if (!(c4 > 0.0) || !(c5 > 0.0) || !(theta > 0.0)) throw ConfigError("gallery 1.10 needs c4, c5, theta > 0");
  WarpedCandidate c;
  c.name = "1.10";
  c.base = SemiEuclideanFactor::euclidean(2);
  c.alpha = InvariantDirection({1.0, 0.0}, c.base);
  c.fiber = SemiEuclideanFactor::lorentzian(3);
  c.beta = InvariantDirection({1.0, 1.0, 0.0}, c.fiber);
  const Profile t = Profile::identity();
  c.phi = c5 / (t + b);
  c.f = c4 / (t + b);
  c.h = -4.0 * log(t + b);
  c.tau = exp(c4 * t);
  c.u = (c4 / std::sqrt(theta)) * t;
  c.u_placement = Placement::Fiber;
  c.theta = theta;
  return c;
}

}  // namespace

std::vector<std::string> gallery_ids() { return {"1.5", "1.8", "1.9", "1.10"}; }

std::vector<std::string> gallery_variants(std::string_view id) {
  if (id == "1.8") return {"printed", "theta-free"};
  if (id == "1.5" || id == "1.9" || id == "1.10") return {"printed"};
  throw ConfigError("unknown gallery id \"" + std::string(id) + "\"");
}

std::map<std::string, double> gallery_defaults(std::string_view id) {
  if (id == "1.5") return {{"k", 1.0}, {"n", 3.0}, {"m", 2.0}, {"theta", 1.0}, {"k1", 1.0}, {"k2", 0.0}};
  if (id == "1.8") {
    return {{"A", 1.0}, {"k", 1.0}, {"n", 3.0}, {"m", 3.0}, {"theta", 1.0},
            {"c7", 1.0}, {"c8", 0.0}, {"c9", 0.0}};
  }
  if (id == "1.9") return {{"k", 2.0}, {"n", 1.0}, {"m", 1.0}, {"theta", 1.0}};
  if (id == "1.10") return {{"b", 1.0}, {"c4", 1.0}, {"c5", 1.0}, {"theta", 1.0}};
  throw ConfigError("unknown gallery id \"" + std::string(id) + "\"");
}

WarpedCandidate gallery(std::string_view id, const GalleryOptions& options) {
  const std::string variant = variant_of(id, options);
  const auto p = merged(id, options);
  WarpedCandidate c;
  if (id == "1.5") c = example_1_5(p);
  else if (id == "1.8") c = example_1_8(p, variant);
  else if (id == "1.9") c = example_1_9(p);
  else c = example_1_10(p);
  if (variant != "printed") c.name += ":" + variant;
  c.validate();
  return c;
}

GridSpec gallery_grid(std::string_view id, const GalleryOptions& options) {
  const auto p = merged(id, options);
  GridSpec g;
  if (id == "1.9") {
    g.xi = Interval::closed(-1.0, 1.0);
    g.zeta = Interval::closed(-1.0, 1.0);
  } else if (id == "1.10") {
    const double b = p.at("b");
    g.xi = Interval::open(-b + 0.1, -b + 10.0);
    g.zeta = Interval::closed(-2.0, 2.0);
  }
  return g;
}

}  // namespace grhs
