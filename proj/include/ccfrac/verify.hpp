#pragma once

#include <Eigen/Core>

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ccfrac/fractional_program.hpp"
#include "ccfrac/sos.hpp"

namespace ccfrac {

/// f(x) + r g(x). Zero at an optimal pair (x*, r*).
double dinkelbach_residual(const FractionalProgram& fp, const Eigen::VectorXd& x, double r);

struct KktResidual {
  double stationarity = 0.0;
  double complementarity = 0.0;
};

/// KKT residuals of
///   min t f(s/t)  s.t.  t^k_i h_i(s/t) <= 0,  t^k_g g(s/t) + t^(k_g - 1) <= 0,
/// with k = max(1, degree): the perspective constraints with the powers of t
/// in the denominators cleared. `multipliers` has m + 1 entries, the last for
/// the denominator constraint. Throws std::domain_error if t <= 0.
KktResidual kkt_residual_pcct(const FractionalProgram& fp, const CctPoint& p, const Eigen::VectorXd& multipliers);

/// Values and (s, t)-gradients of the cleared constraints at p; entry m is
/// the denominator constraint.
std::vector<std::pair<double, Eigen::VectorXd>> pcct_constraints(const FractionalProgram& fp, const CctPoint& p);

class EmptyFeasibleGrid : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridResult {
  double value = 0.0;
  Eigen::VectorXd argmin;
  std::size_t feasible_count = 0;
};

/// Minimum of f / (-g) over grid points in the box with h_i <= 0 and g < 0.
/// `box` holds one (lo, hi) pair per variable; n <= 3 and steps >= 2.
GridResult grid_oracle(const FractionalProgram& fp, const std::vector<std::pair<double, double>>& box, int steps);

/// [-B, B]^n with B = 1 + 2 max(1, |x|_inf), or B = 10 without a point.
std::vector<std::pair<double, double>> default_oracle_box(std::size_t n, const std::optional<Eigen::VectorXd>& x);
int default_oracle_steps(std::size_t n);

/// max_alpha |<B_alpha, Q> - p_alpha|, expanded directly from the basis.
double gram_residual(const Polynomiald& p, const GramCertificate& cert);

bool weak_duality_check(double value_D, double value_Q, double tol);

struct VerificationReport {
  double feasibility_residual = 0.0;
  double dinkelbach_residual = 0.0;
  double kkt_stationarity_norm = 0.0;
  double kkt_complementarity_norm = 0.0;
  std::optional<double> oracle_value;
  std::optional<double> oracle_gap;
  std::vector<std::pair<double, double>> oracle_box;
  int oracle_steps = 0;
  double gram_residual = 0.0;
  double gram_min_eigenvalue = 0.0;
};

}  // namespace ccfrac
