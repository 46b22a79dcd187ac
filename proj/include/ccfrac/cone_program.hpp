#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace ccfrac::sdp {

enum class Sense { Minimize, Maximize };
enum class Relation { Equal, LessEqual, GreaterEqual };

/// value * X_block(row, col); X is symmetric, so (row, col) and (col, row) name
/// the same variable. Stored with row <= col.
struct BlockEntry {
  std::size_t block;
  std::size_t row;
  std::size_t col;
  double value;
};

/// Linear form over scalar variables and entries of PSD block variables.
struct LinearExpr {
  std::vector<std::pair<std::size_t, double>> scalars;
  std::vector<BlockEntry> entries;

  LinearExpr& add_scalar(std::size_t var, double c);
  LinearExpr& add_entry(std::size_t block, std::size_t row, std::size_t col, double c);
  /// Adds <C, X_block> for a dense symmetric C.
  LinearExpr& add_inner(std::size_t block, const Eigen::MatrixXd& c);
  bool empty() const { return scalars.empty() && entries.empty(); }
};

struct Constraint {
  LinearExpr expr;
  Relation relation;
  double rhs;
};

/// Backend-neutral conic program: scalar variables (free or nonnegative), PSD
/// matrix variables, linear equality/inequality constraints, linear objective.
class ConeProgram {
 public:
  std::size_t add_scalar(bool nonnegative = false);
  std::size_t add_psd_block(std::size_t size);
  std::size_t add_constraint(LinearExpr expr, Relation rel, double rhs);
  void set_objective(LinearExpr expr, Sense sense);

  std::size_t num_scalars() const { return nonneg_.size(); }
  bool is_nonnegative(std::size_t var) const { return nonneg_.at(var); }
  const std::vector<std::size_t>& block_sizes() const { return blocks_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const LinearExpr& objective() const { return objective_; }
  Sense sense() const { return sense_; }

  /// Throws std::invalid_argument when a reference is out of range.
  void validate() const;

  /// Value of a linear form at the given point.
  double evaluate(const LinearExpr& e, const Eigen::VectorXd& scalars,
                  const std::vector<Eigen::MatrixXd>& blocks) const;

 private:
  void check(const LinearExpr& e) const;

  std::vector<bool> nonneg_;
  std::vector<std::size_t> blocks_;
  std::vector<Constraint> constraints_;
  LinearExpr objective_;
  Sense sense_ = Sense::Minimize;
};

enum class SolveStatus { Optimal, NearOptimal, PrimalInfeasible, DualInfeasible, NumericalTrouble };

std::string to_string(SolveStatus s);

struct SolverSettings {
  double feasibility_tol = 1e-8;
  double duality_gap_tol = 1e-7;
  /// Iterate until relative residuals and gap fall below this.
  double stop_tol = 1e-11;
  double infeasibility_tol = 1e-8;
  int max_iterations = 200;
  double step_fraction = 0.98;
  bool equilibrate = true;
  /// Solve programs whose PSD blocks are affine in the scalars in the
  /// dual orientation when that gives fewer equality rows.
  bool dualize = true;
  /// Print one line per iteration to stderr.
  bool verbose = false;
};

struct SolveResult {
  SolveStatus status = SolveStatus::NumericalTrouble;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  /// Relative residuals and gap of the final iterate.
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double relative_gap = 0.0;
  int iterations = 0;
  /// Max constraint violation recomputed from the returned values.
  double recheck_residual = 0.0;

  Eigen::VectorXd scalars;
  std::vector<Eigen::MatrixXd> blocks;
  /// Multipliers y of the Lagrangian objective - sum_i y_i (a_i(v) - rhs_i).
  Eigen::VectorXd constraint_duals;
  std::vector<Eigen::MatrixXd> block_duals;

  bool ok() const { return status == SolveStatus::Optimal || status == SolveStatus::NearOptimal; }
};

/// Primal-dual interior-point solve (HKM direction, Mehrotra predictor-corrector).
SolveResult solve(const ConeProgram& cp, const SolverSettings& settings = {});

/// Max violation of the constraints and variable bounds, computed directly
/// from the program data.
double constraint_residual(const ConeProgram& cp, const Eigen::VectorXd& scalars,
                           const std::vector<Eigen::MatrixXd>& blocks);

/// Writes the program in SDPA sparse format (.dat-s).
void write_sdpa(const ConeProgram& cp, std::ostream& os);

}  // namespace ccfrac::sdp
