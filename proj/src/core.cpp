#include "grhs/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "grhs/error.hpp"

namespace grhs {

SemiEuclideanFactor::SemiEuclideanFactor(std::vector<int> signature)
    : signature_(std::move(signature)) {
  if (signature_.empty()) throw ConfigError("semi-Euclidean factor needs dim >= 1");
  for (int e : signature_) {
    if (e != 1 && e != -1) {
      throw ConfigError("signature entries must be -1 or +1, got " + std::to_string(e));
    }
  }
}

SemiEuclideanFactor SemiEuclideanFactor::euclidean(std::size_t dim) {
  return SemiEuclideanFactor(std::vector<int>(dim, 1));
}

SemiEuclideanFactor SemiEuclideanFactor::lorentzian(std::size_t dim) {
  std::vector<int> sig(dim, 1);
  if (!sig.empty()) sig[0] = -1;
  return SemiEuclideanFactor(std::move(sig));
}

double pseudo_norm_sq(std::span<const double> coefficients, const SemiEuclideanFactor& factor) {
  if (coefficients.size() != factor.dim()) {
    throw ConfigError("direction has " + std::to_string(coefficients.size()) +
                      " entries but the factor has dim " + std::to_string(factor.dim()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    sum += factor.epsilon(i) * coefficients[i] * coefficients[i];
  }
  return sum;
}

InvariantDirection::InvariantDirection(std::vector<double> coefficients,
                                       const SemiEuclideanFactor& factor)
    : coefficients_(std::move(coefficients)), norm_sq_(pseudo_norm_sq(coefficients_, factor)) {
  if (std::all_of(coefficients_.begin(), coefficients_.end(), [](double a) { return a == 0.0; })) {
    throw ConfigError("invariant direction must be non-zero");
  }
  for (double a : coefficients_) {
    if (!std::isfinite(a)) throw ConfigError("invariant direction has a non-finite entry");
  }
}

double InvariantDirection::project(std::span<const double> x) const {
  double xi = 0.0;
  for (std::size_t i = 0; i < coefficients_.size(); ++i) xi += coefficients_[i] * x[i];
  return xi;
}

double pseudo_norm_sq(const InvariantDirection& direction, const SemiEuclideanFactor& factor) {
  return pseudo_norm_sq(direction.coefficients(), factor);
}

}  // namespace grhs
