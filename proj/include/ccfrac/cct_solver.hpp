#pragma once

#include <Eigen/Core>

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccfrac/cone_program.hpp"
#include "ccfrac/fractional_program.hpp"
#include "ccfrac/sos.hpp"
#include "ccfrac/verify.hpp"

namespace ccfrac {

/// Raised when the data break a standing assumption at a concrete point,
/// e.g. g(x) >= 0 where a positive denominator is required.
class AssumptionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

CctPoint cct_map(const Eigen::VectorXd& x, const FractionalProgram& fp);

/// max gamma  s.t.  f + sum_i lambda_i h_i + gamma g = <B_alpha, Q>,
/// lambda, gamma >= 0, Q PSD of size s(n, d).
struct DualProgram {
  sdp::ConeProgram program;
  std::vector<std::size_t> lambda;
  std::size_t gamma = 0;
  std::size_t gram_block = 0;
  LocatorFamily family;
};

DualProgram assemble_D(const FractionalProgram& fp);

/// min L_y(f)  s.t.  1 + L_y(g) <= 0,  L_y(h_i) <= 0,  M_d(y) PSD,
/// y in R^{s(n, 2d)} free. The moment matrix is a PSD block tied to y by
/// one equality per upper-triangular entry.
struct MomentProgram {
  sdp::ConeProgram program;
  /// Scalar variable index of y_alpha, in graded-lex order of moments.
  std::vector<std::size_t> y;
  std::size_t moment_block = 0;
  MonomialBasis moments;
  MonomialBasis half;
};

MomentProgram assemble_Q(const FractionalProgram& fp);

/// y_{e_i} / y_0, or nullopt when y_0 < attainment_tol.
std::optional<Eigen::VectorXd> extract_solution(const MomentVector& y, double attainment_tol = 1e-6);

struct ConvexMinResult {
  sdp::SolveStatus status = sdp::SolveStatus::NumericalTrouble;
  /// -inf when the relaxation is unbounded below.
  double value = std::numeric_limits<double>::quiet_NaN();
  std::optional<Eigen::VectorXd> point;
  bool unbounded() const { return status == sdp::SolveStatus::DualInfeasible; }
  bool infeasible() const { return status == sdp::SolveStatus::PrimalInfeasible; }
};

/// min p over {h_i <= 0} through the order-d moment relaxation with y_0 = 1.
ConvexMinResult min_convex_poly(const Polynomiald& objective, const std::vector<Polynomiald>& constraints,
                                std::size_t n, int d, const sdp::SolverSettings& settings = {});

enum class SlaterVerdict { Yes, No, Indeterminate };

std::string to_string(SlaterVerdict v);

struct SlaterResult {
  SlaterVerdict verdict = SlaterVerdict::Indeterminate;
  /// Phase-1 optimum tau* of min tau s.t. h_i(x) <= tau, tau >= -1.
  double tau = std::numeric_limits<double>::quiet_NaN();
  std::optional<Eigen::VectorXd> witness;
  /// max_i h_i at the witness, evaluated directly.
  double max_constraint = std::numeric_limits<double>::quiet_NaN();
  std::string detail;
};

SlaterResult slater_check(const FractionalProgram& fp, double margin = 1e-6, const sdp::SolverSettings& settings = {});

enum class SolveOutcome { Solved, SolvedValueOnly, Infeasible, Unbounded, AssumptionViolated, NumericalTrouble };

std::string to_string(SolveOutcome s);

struct SolveConfig {
  SosTolerances sos;
  sdp::SolverSettings sdp;
  /// Allowed |value(D) - value(Q)|.
  double gap_tol = 1e-5;
  /// Allowed value(D) - value(Q).
  double weak_duality_tol = 1e-6;
  double attainment_tol = 1e-6;
  /// Allowed max_i h_i(x_bar).
  double feasibility_tol = 1e-6;
  double slater_margin = 1e-6;
  bool screen_sos_convexity = true;
  /// Run the grid oracle when n <= 3.
  bool grid_oracle = true;
};

struct ScreeningEntry {
  std::string name;
  SosVerdict verdict = SosVerdict::Indeterminate;
};

struct SolveReport {
  SolveOutcome status = SolveOutcome::NumericalTrouble;
  double value = std::numeric_limits<double>::quiet_NaN();
  double value_D = std::numeric_limits<double>::quiet_NaN();
  double value_Q = std::numeric_limits<double>::quiet_NaN();
  sdp::SolveStatus status_D = sdp::SolveStatus::NumericalTrouble;
  sdp::SolveStatus status_Q = sdp::SolveStatus::NumericalTrouble;
  std::optional<Eigen::VectorXd> x_bar;
  double y0 = std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXd moments;
  Eigen::VectorXd lambda;
  double gamma = std::numeric_limits<double>::quiet_NaN();
  /// Multipliers of the cleared (P_CCT) constraints at cct_map(x_bar).
  Eigen::VectorXd kkt_multipliers;
  std::optional<GramCertificate> certificate;
  std::vector<ScreeningEntry> screening;
  SlaterResult slater;
  /// min g over K; -inf means sup_K (-g) is unbounded.
  std::optional<double> min_g;
  bool denominator_unbounded = false;
  std::vector<std::string> notes;
  std::optional<VerificationReport> verification;
};

SolveReport solve_fractional(const FractionalProgram& fp, const SolveConfig& config = {});

/// Multipliers for kkt_residual_pcct from the (D) multipliers at (s, t):
/// mu_i = lambda_i / t^(k_i - 1), k_i = max(1, deg h_i); last entry from gamma and g.
Eigen::VectorXd pcct_multipliers(const FractionalProgram& fp, const Eigen::VectorXd& lambda, double gamma, double t);

}  // namespace ccfrac
