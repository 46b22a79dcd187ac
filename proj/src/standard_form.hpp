#pragma once

// Internal: the lowered form the interior-point method works on.
//
//   min  cf'u + cl'xl + sum_b <C_b, X_b>
//   s.t. Af u + Al xl + sum_b A_b(X_b) = b,   xl >= 0,  X_b PSD,  u free
//
// with dual  max b'y  s.t.  Af'y = cf,  cl - Al'y >= 0,  C_b - A_b^*(y) PSD.

#include <Eigen/Core>

#include <optional>
#include <vector>

#include "ccfrac/cone_program.hpp"

namespace ccfrac::sdp::detail {

struct Triplet {
  int row;
  int col;
  double value;
};

/// Constraint i's coefficient matrix restricted to one PSD block (full
/// symmetric storage: off-diagonal value v appears as (r,c,v/2) and (c,r,v/2)).
struct BlockRow {
  int constraint;
  std::vector<Triplet> triplets;
};

struct StandardForm {
  int m = 0;
  Eigen::MatrixXd Af;  // m x nf
  Eigen::MatrixXd Al;  // m x nl
  std::vector<int> block_sizes;
  std::vector<std::vector<BlockRow>> rows;  // rows[b]: constraints touching block b
  Eigen::VectorXd b;
  Eigen::VectorXd cf;
  Eigen::VectorXd cl;
  std::vector<Eigen::MatrixXd> C;

  int nf() const { return static_cast<int>(Af.cols()); }
  int nl() const { return static_cast<int>(Al.cols()); }
};

/// Where each original scalar variable lives after lowering.
struct ScalarSlot {
  bool free;
  int index;
};

struct Lowering {
  StandardForm form;
  std::vector<ScalarSlot> scalar_slots;
  /// +1 for minimization, -1 when the original objective was maximized.
  double sign = 1.0;
};

Lowering lower(const ConeProgram& cp);

}  // namespace ccfrac::sdp::detail

namespace ccfrac::sdp::detail {

/// Role of an original constraint in the dual-form lowering.
struct DualRole {
  enum Kind { Entry, Equality, Inequality } kind;
  /// Entry: the block entry the constraint defines. Equality: free column.
  /// Inequality: nonnegative column, with `orientation` -1 for >=.
  std::size_t block = 0;
  int row = 0;
  int col = 0;
  double coef = 0.0;
  int index = 0;
  double orientation = 1.0;
};

/// Lowering for programs whose PSD blocks are affine images of the scalars,
/// X_b(i,j) = (rhs - a'v) / coef, one equality per upper entry. The scalars
/// become the multipliers y of the standard form:
///
///   max -c'v  s.t.  F_b(v) PSD,  inequalities as slacks,  equalities free.
struct DualLowering {
  StandardForm form;
  std::vector<DualRole> roles;
  double sign = 1.0;
};

/// nullopt when the program does not have that shape.
std::optional<DualLowering> lower_dual(const ConeProgram& cp);

/// X_b recovered from the defining equalities at the given scalars.
std::vector<Eigen::MatrixXd> dual_blocks(const ConeProgram& cp, const DualLowering& low,
                                         const Eigen::VectorXd& scalars);

}  // namespace ccfrac::sdp::detail
