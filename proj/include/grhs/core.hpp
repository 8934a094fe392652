#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace grhs {

/// One factor of the product: R^dim with the flat metric diag(signature).
class SemiEuclideanFactor {
 public:
  explicit SemiEuclideanFactor(std::vector<int> signature);

  /// All entries +1.
  static SemiEuclideanFactor euclidean(std::size_t dim);
  /// First entry -1, the rest +1.
  static SemiEuclideanFactor lorentzian(std::size_t dim);

  std::size_t dim() const { return signature_.size(); }
  int epsilon(std::size_t i) const { return signature_[i]; }
  std::span<const int> signature() const { return signature_; }

  bool operator==(const SemiEuclideanFactor&) const = default;

 private:
  std::vector<int> signature_;
};

/// Sum of eps_i * a_i^2.
double pseudo_norm_sq(std::span<const double> coefficients, const SemiEuclideanFactor& factor);

/// The vector defining the invariant coordinate xi = sum_i a_i x_i on a factor.
/// The pseudo-norm is cached at construction.
class InvariantDirection {
 public:
  InvariantDirection(std::vector<double> coefficients, const SemiEuclideanFactor& factor);

  std::size_t dim() const { return coefficients_.size(); }
  double operator[](std::size_t i) const { return coefficients_[i]; }
  std::span<const double> coefficients() const { return coefficients_; }
  double norm_sq() const { return norm_sq_; }

  /// xi at a point of the factor.
  double project(std::span<const double> x) const;

 private:
  std::vector<double> coefficients_;
  double norm_sq_;
};

double pseudo_norm_sq(const InvariantDirection& direction, const SemiEuclideanFactor& factor);

}  // namespace grhs
