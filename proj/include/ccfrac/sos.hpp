#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ccfrac/cone_program.hpp"
#include "ccfrac/monomial_basis.hpp"
#include "ccfrac/polynomial.hpp"

namespace ccfrac {

struct SosTolerances {
  /// Allowed negative slack on the Gram matrix's smallest eigenvalue.
  double psd_tol = 1e-8;
  /// Allowed max |<B_alpha, Q> - p_alpha|.
  double gram_tol = 1e-7;
};

/// The 0/1 matrices B_alpha over a Gram basis: (B_alpha)(i, j) = 1 iff
/// basis[i] + basis[j] = alpha. Stored as position lists; `products` lists
/// every alpha reachable as a sum of two basis entries.
class LocatorFamily {
 public:
  explicit LocatorFamily(MonomialBasis basis);

  const MonomialBasis& basis() const { return basis_; }
  const MonomialBasis& products() const { return products_; }
  std::size_t size() const { return positions_.size(); }
  /// Positions (i, j), both orders included, whose exponents sum to products()[k].
  const std::vector<std::pair<int, int>>& positions(std::size_t k) const { return positions_[k]; }
  Eigen::MatrixXd matrix(std::size_t k) const;
  /// <B_alpha, Q> for every alpha in products(), in products() order.
  Eigen::VectorXd apply(const Eigen::MatrixXd& q) const;

 private:
  MonomialBasis basis_;
  MonomialBasis products_;
  std::vector<std::vector<std::pair<int, int>>> positions_;
};

/// B_alpha for the canonical basis of degree d; products() is then the
/// canonical basis of degree 2d.
LocatorFamily coefficient_locator_matrices(std::size_t n, int d);

/// Pseudo-moment vector y = (y_alpha), alpha in N^n_{2d}, graded-lex indexed.
class MomentVector {
 public:
  MomentVector(std::size_t n, int d, Eigen::VectorXd y);

  std::size_t num_vars() const { return n_; }
  int order() const { return d_; }
  const Eigen::VectorXd& values() const { return y_; }
  const MonomialBasis& basis() const { return basis_; }
  double operator[](const MultiIndex& alpha) const;
  double mass() const { return y_(0); }

 private:
  std::size_t n_;
  int d_;
  Eigen::VectorXd y_;
  MonomialBasis basis_;
};

/// M_d(y)(alpha, beta) = y_{alpha + beta}.
Eigen::MatrixXd moment_matrix(const MomentVector& mv);

/// L_y(p) = sum_alpha p_alpha y_alpha. Throws DimensionError if deg p > 2d.
double linear_functional(const MomentVector& mv, const Polynomiald& p);

struct GramCertificate {
  MonomialBasis basis;
  Eigen::MatrixXd Q;
  double min_eigenvalue = 0.0;
  double coefficient_residual = 0.0;
  bool valid = false;
};

/// Snaps Q onto the affine space <B_alpha, Q> = p_alpha by spreading each
/// coefficient mismatch evenly over its positions, then measures it.
GramCertificate make_certificate(const Polynomiald& p, const LocatorFamily& family, Eigen::MatrixXd q,
                                 const SosTolerances& tol);

enum class SosVerdict { Certified, Refuted, Indeterminate };

std::string to_string(SosVerdict v);

struct SosResult {
  SosVerdict verdict = SosVerdict::Indeterminate;
  std::optional<GramCertificate> certificate;
  /// Largest t with p - t * sum_b (x^b)^2 SOS over the basis, for the
  /// coefficient-normalized p. Negative means not SOS.
  double margin = 0.0;
  sdp::SolveStatus backend_status = sdp::SolveStatus::NumericalTrouble;
  std::string detail;
};

/// SOS test over an explicit Gram basis.
SosResult is_sos(const Polynomiald& p, const MonomialBasis& basis, const SosTolerances& tol = {});
/// SOS test over the canonical basis of degree deg(p) / 2.
SosResult is_sos(const Polynomiald& p, const SosTolerances& tol = {});

/// w' Hess p(x) w in 2n variables (x first, then w).
Polynomiald hessian_form(const Polynomiald& p);

/// SOS-convexity: w' Hess p(x) w is SOS over monomials x^b w_i.
SosResult is_sos_convex(const Polynomiald& p, const SosTolerances& tol = {});

}  // namespace ccfrac
