#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grhs/candidate.hpp"
#include "grhs/ode.hpp"
#include "grhs/profile.hpp"

namespace grhs {

enum class ZMode { Constant, Variable };

/// Which exponents to use in the psi-z system. Printed is the verbatim
/// statement; Corrected is the first integral of the reduced equations
/// (the Q exponents of psi and z' exchanged).
enum class PsiForm { Corrected, Printed };

std::string_view to_string(ZMode mode);
std::string_view to_string(PsiForm form);
ZMode z_mode_from_string(std::string_view s);
PsiForm psi_form_from_string(std::string_view s);

/// Inputs for the four steady cases (lambda = 0, rho = 0, m >= 3).
struct CaseParams {
  int case_id = 1;
  std::size_t n = 3;
  std::size_t m = 3;
  // Defaults: Lorentzian with direction (1, 1, 0, ...) where a null
  // direction is needed, Euclidean with e_1 where a unit one is.
  std::optional<std::vector<int>> base_signature;
  std::optional<std::vector<int>> fiber_signature;
  std::optional<std::vector<double>> alpha;
  std::optional<std::vector<double>> beta;
  double theta = 1.0;
  // c[1]..c[9]; c[0] unused.
  std::array<double, 10> c{0.0, 1.0, 1.0, 0.0, 1.0, 1.0, 0.1, 0.0, 0.0, 0.0};
  double k = 1.0;
  double b = 1.0;
  // Integration constants of the potential quadrature.
  double h_c1 = 0.0;
  double h_c2 = 0.0;
  int u_sign = 1;
  int n_branch = 1;
  ZMode z_mode = ZMode::Constant;
  double z0 = 3.0;
  double xi0 = 0.0;
  double xi_span = 5.0;
  PsiForm psi_form = PsiForm::Corrected;
  Interval xi_interval = Interval::closed(-5.0, 5.0);
  Interval zeta_interval = Interval::closed(-5.0, 5.0);
  double quad_tol = 1e-12;
  // Free profiles: phi and f for cases 1 and 2, tau for cases 1 and 3.
  std::optional<Profile> phi;
  std::optional<Profile> f;
  std::optional<Profile> tau;

  /// Throws ConfigError on inconsistent dimensions, constants or missing profiles.
  void validate() const;
};

/// sqrt(m + k^2 (n - 1)).
double case3_root(std::size_t n, std::size_t m, double k);
/// N = -k + branch * case3_root.
double case3_n(std::size_t n, std::size_t m, double k, int branch);

/// State (z, log(f/c5), h) of the psi-z system.
class PsiZSource final : public StateSource {
 public:
  struct Params {
    std::size_t n = 2;
    std::size_t m = 3;
    double k = 1.0;
    double c6 = 0.1;
    double z0 = 3.0;
    double xi0 = 0.0;
    double span = 5.0;
    double h0 = 0.0;
    PsiForm form = PsiForm::Corrected;
    double rtol = 1e-10;
    double atol = 1e-12;
  };

  /// Integrates over [xi0, xi0 + span]. Throws DomainError (with the offending
  /// xi) when a power base turns non-positive, NumericalError on step collapse.
  static std::shared_ptr<const PsiZSource> integrate(const Params& params);

  const Params& params() const { return params_; }
  double psi(double z) const;
  double z_rate(double z) const;

  Interval span() const override;
  Eigen::VectorXd state(double t) const override;
  Eigen::VectorXd rate(const Eigen::VectorXd& y) const override;
  Eigen::VectorXd rate_derivative(const Eigen::VectorXd& y) const override;
  std::string kind() const override { return "psi-z"; }
  std::string describe_json() const override;

  /// Integrates psi_path' = z psi_path^2 from psi(z0) alongside z and returns
  /// max |psi_path - psi(z)| over count samples; infinity if that path blows up.
  double redundant_path_spread(std::size_t count = 201) const;

 private:
  explicit PsiZSource(const Params& params);
  double psi_exponent_q() const;
  double z_exponent_q() const;
  Params params_;
  double root_ = 0.0;
  double a_ = 0.0;
  DenseTrajectory trajectory_;
};

/// Rebuilds a source from describe_json() output.
std::shared_ptr<const StateSource> state_source_from_json(const std::string& json);

/// Runnable defaults: phi = f = e^xi and tau = zeta^2 + 1 (the gallery 1.8 data)
/// for the null-base cases; n = 2, tau = e^zeta on a null Lorentzian fiber
/// for case 3; n = 2 for case 4.
CaseParams default_case_params(int case_id);

WarpedCandidate construct_case1(const CaseParams& params);
WarpedCandidate construct_case2(const CaseParams& params);
WarpedCandidate construct_case3_constant_z(const CaseParams& params);
WarpedCandidate construct_case3_variable_z(const CaseParams& params);
WarpedCandidate construct_case4(const CaseParams& params);
/// Dispatches on case_id (and z_mode for cases 3 and 4).
WarpedCandidate construct(const CaseParams& params);

/// h = int phi^-2 [int (m f''/f phi^2 + 2m phi phi' f'/f - (n-2) phi phi'') + c1] + c2
/// as two nested antiderivatives referenced at the midpoint of xi_interval.
Profile potential_from_quadrature(const Profile& phi, const Profile& f, std::size_t n, std::size_t m,
                                  double c1, double c2, const Interval& xi_interval, double tol);

/// u = sign int sqrt((m-2)/theta tau''/tau) + c3 referenced at the midpoint of
/// zeta_interval. Throws DomainError if the radicand is negative on the interval.
Profile harmonic_from_tau(const Profile& tau, std::size_t m, double theta, int sign, double c3,
                          const Interval& zeta_interval, double tol);

}  // namespace grhs
