#include "ccfrac/sos.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace ccfrac {

LocatorFamily::LocatorFamily(MonomialBasis basis) : basis_(std::move(basis)) {
  std::set<MultiIndex> sums;
  for (const MultiIndex& a : basis_)
    for (const MultiIndex& b : basis_) sums.insert(a + b);
  products_ = MonomialBasis::from_entries(basis_.num_vars(), std::vector<MultiIndex>(sums.begin(), sums.end()));
  positions_.resize(products_.size());
  const int n = static_cast<int>(basis_.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) positions_[*products_.index_of(basis_[i] + basis_[j])].emplace_back(i, j);
}

Eigen::MatrixXd LocatorFamily::matrix(std::size_t k) const {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(basis_.size(), basis_.size());
  for (const auto& [i, j] : positions_.at(k)) b(i, j) = 1.0;
  return b;
}

Eigen::VectorXd LocatorFamily::apply(const Eigen::MatrixXd& q) const {
  if (q.rows() != static_cast<Eigen::Index>(basis_.size()) || q.cols() != q.rows())
    throw DimensionError("LocatorFamily::apply: Gram matrix size differs from basis size");
  Eigen::VectorXd out(positions_.size());
  for (std::size_t k = 0; k < positions_.size(); ++k) {
    double s = 0.0;
    for (const auto& [i, j] : positions_[k]) s += q(i, j);
    out(k) = s;
  }
  return out;
}

LocatorFamily coefficient_locator_matrices(std::size_t n, int d) { return LocatorFamily(monomial_basis(n, d)); }

MomentVector::MomentVector(std::size_t n, int d, Eigen::VectorXd y)
    : n_(n), d_(d), y_(std::move(y)), basis_(monomial_basis(n, 2 * d)) {
  if (static_cast<std::size_t>(y_.size()) != basis_.size())
    throw DimensionError("MomentVector: length must be C(n + 2d, n)");
}

double MomentVector::operator[](const MultiIndex& alpha) const {
  auto k = basis_.index_of(alpha);
  if (!k) throw DimensionError("MomentVector: exponent outside N^n_2d");
  return y_(*k);
}

Eigen::MatrixXd moment_matrix(const MomentVector& mv) {
  const MonomialBasis half = monomial_basis(mv.num_vars(), mv.order());
  const Eigen::Index s = static_cast<Eigen::Index>(half.size());
  Eigen::MatrixXd m(s, s);
  for (Eigen::Index i = 0; i < s; ++i)
    for (Eigen::Index j = 0; j < s; ++j) m(i, j) = mv[half[i] + half[j]];
  return m;
}

double linear_functional(const MomentVector& mv, const Polynomiald& p) {
  if (p.num_vars() != mv.num_vars()) throw DimensionError("linear_functional: variable count mismatch");
  if (p.degree() > 2 * mv.order()) throw DimensionError("linear_functional: polynomial degree exceeds 2d");
  double s = 0.0;
  for (const auto& [alpha, c] : p.terms()) s += c * mv[alpha];
  return s;
}

namespace {

double coefficient_mismatch(const Polynomiald& p, const LocatorFamily& family, const Eigen::MatrixXd& q) {
  const Eigen::VectorXd fixed = family.apply(q);
  const MonomialBasis& prods = family.products();
  double res = 0.0;
  for (std::size_t k = 0; k < prods.size(); ++k) res = std::max(res, std::abs(fixed(k) - p.coeff(prods[k])));
  for (const auto& [alpha, c] : p.terms())
    if (!prods.index_of(alpha)) res = std::max(res, std::abs(c));
  return res;
}

Eigen::VectorXd coefficient_gap(const Polynomiald& p, const LocatorFamily& family, const Eigen::MatrixXd& q) {
  const Eigen::VectorXd lhs = family.apply(q);
  Eigen::VectorXd r(lhs.size());
  for (Eigen::Index k = 0; k < lhs.size(); ++k) r(k) = p.coeff(family.products()[k]) - lhs(k);
  return r;
}

// Spread each coefficient mismatch evenly over the positions of B_alpha.
Eigen::MatrixXd spread_correction(const Polynomiald& p, const LocatorFamily& family, Eigen::MatrixXd q) {
  const Eigen::VectorXd r = coefficient_gap(p, family, q);
  for (std::size_t k = 0; k < family.size(); ++k) {
    const auto& pos = family.positions(k);
    for (const auto& [i, j] : pos) q(i, j) += r(k) / static_cast<double>(pos.size());
  }
  return q;
}

// Q = V R V' with V the top-r eigenvectors of q; R is moved by the least-norm
// symmetric correction that zeroes the coefficient mismatch.
Eigen::MatrixXd face_correction(const Polynomiald& p, const LocatorFamily& family, const Eigen::MatrixXd& v,
                                const Eigen::VectorXd& lambda) {
  const Eigen::Index r = v.cols();
  Eigen::MatrixXd rr = lambda.asDiagonal();
  const Eigen::VectorXd gap = coefficient_gap(p, family, v * rr * v.transpose());
  Eigen::MatrixXd g(static_cast<Eigen::Index>(family.size()), r * (r + 1) / 2);
  Eigen::Index col = 0;
  for (Eigen::Index a = 0; a < r; ++a) {
    for (Eigen::Index b = a; b < r; ++b) {
      Eigen::MatrixXd e = v.col(a) * v.col(b).transpose();
      if (a != b) e += v.col(b) * v.col(a).transpose();
      g.col(col++) = family.apply(e);
    }
  }
  const Eigen::VectorXd delta = g.completeOrthogonalDecomposition().solve(gap);
  col = 0;
  for (Eigen::Index a = 0; a < r; ++a) {
    for (Eigen::Index b = a; b < r; ++b) {
      rr(a, b) += delta(col);
      if (a != b) rr(b, a) += delta(col);
      ++col;
    }
  }
  return v * rr * v.transpose();
}

GramCertificate measure(const Polynomiald& p, const LocatorFamily& family, Eigen::MatrixXd q,
                        const SosTolerances& tol) {
  GramCertificate cert;
  cert.basis = family.basis();
  cert.Q = 0.5 * (q + q.transpose());
  cert.min_eigenvalue =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(cert.Q, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  cert.coefficient_residual = coefficient_mismatch(p, family, cert.Q);
  cert.valid = cert.min_eigenvalue >= -tol.psd_tol && cert.coefficient_residual <= tol.gram_tol;
  return cert;
}

}  // namespace

GramCertificate make_certificate(const Polynomiald& p, const LocatorFamily& family, Eigen::MatrixXd q,
                                 const SosTolerances& tol) {
  q = 0.5 * (q + q.transpose());
  GramCertificate best = measure(p, family, spread_correction(p, family, q), tol);
  if (best.valid || q.rows() == 0) return best;

  // Near-singular q: retry on the faces cut out by the largest eigenvalue gaps.
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
  const Eigen::VectorXd ev = es.eigenvalues();
  const Eigen::Index s = ev.size();
  const double floor = 1e-15 * std::max(std::abs(ev(s - 1)), 1e-300);
  std::vector<std::pair<double, Eigen::Index>> cuts;
  for (Eigen::Index k = 1; k < s; ++k) {
    if (ev(k) <= floor) continue;
    const double ratio = ev(k) / std::max(ev(k - 1), floor);
    if (ratio >= 10.0) cuts.emplace_back(ratio, k);
  }
  std::sort(cuts.begin(), cuts.end(), std::greater<>());
  if (cuts.size() > 6) cuts.resize(6);
  for (const auto& [ratio, k] : cuts) {
    const Eigen::Index r = s - k;
    GramCertificate c = measure(p, family, face_correction(p, family, es.eigenvectors().rightCols(r), ev.tail(r)), tol);
    if (c.valid) return c;
  }
  return best;
}

std::string to_string(SosVerdict v) {
  switch (v) {
    case SosVerdict::Certified: return "Certified";
    case SosVerdict::Refuted: return "Refuted";
    case SosVerdict::Indeterminate: return "Indeterminate";
  }
  return "Unknown";
}

namespace {

// Drops basis entries b whose square x^{2b} arises only as b * b and has a
// zero coefficient in p: any PSD Gram matrix has a zero row there. Repeats
// until nothing changes.
std::vector<std::size_t> prune_zero_rows(const Polynomiald& p, const MonomialBasis& basis) {
  std::vector<std::size_t> keep(basis.size());
  for (std::size_t i = 0; i < keep.size(); ++i) keep[i] = i;
  for (bool changed = true; changed;) {
    changed = false;
    std::map<MultiIndex, int> reps;
    for (std::size_t a : keep)
      for (std::size_t b : keep) ++reps[basis[a] + basis[b]];
    for (auto it = keep.begin(); it != keep.end();) {
      const MultiIndex sq = basis[*it] + basis[*it];
      if (reps[sq] == 1 && p.coeff(sq) == 0.0) {
        it = keep.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  return keep;
}

}  // namespace

SosResult is_sos(const Polynomiald& p, const MonomialBasis& basis, const SosTolerances& tol) {
  SosResult out;
  const LocatorFamily family(basis);
  for (const auto& [alpha, c] : p.terms()) {
    if (!family.products().index_of(alpha)) {
      out.verdict = SosVerdict::Refuted;
      out.detail = "term outside the span of the Gram basis products";
      return out;
    }
  }

  const std::vector<std::size_t> keep = prune_zero_rows(p, basis);
  std::vector<MultiIndex> kept;
  for (std::size_t i : keep) kept.push_back(basis[i]);
  const LocatorFamily reduced(MonomialBasis::from_entries(basis.num_vars(), std::move(kept)));
  const MonomialBasis& prods = reduced.products();
  for (const auto& [alpha, c] : p.terms()) {
    if (!prods.index_of(alpha)) {
      out.verdict = SosVerdict::Refuted;
      out.detail = "term forced to zero by the zero rows of every Gram matrix";
      return out;
    }
  }

  // Work on p / scale so the thresholds are relative to the coefficient size.
  double scale = 0.0;
  for (const auto& [alpha, c] : p.terms()) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) scale = 1.0;

  // max t  s.t.  <B_alpha, Q'> + t <B_alpha, I> = p_alpha / scale,  Q' PSD.
  sdp::ConeProgram cp;
  const std::size_t t = cp.add_scalar(false);
  const std::size_t blk = cp.add_psd_block(keep.size());
  for (std::size_t k = 0; k < prods.size(); ++k) {
    sdp::LinearExpr e;
    int diag = 0;
    for (const auto& [i, j] : reduced.positions(k)) {
      if (i > j) continue;
      e.add_entry(blk, i, j, i == j ? 1.0 : 2.0);
      if (i == j) ++diag;
    }
    e.add_scalar(t, diag);
    cp.add_constraint(std::move(e), sdp::Relation::Equal, p.coeff(prods[k]) / scale);
  }
  cp.set_objective(sdp::LinearExpr{}.add_scalar(t, 1.0), sdp::Sense::Maximize);

  sdp::SolverSettings st;
  const sdp::SolveResult r = sdp::solve(cp, st);
  out.backend_status = r.status;
  if (!r.ok()) {
    out.verdict = SosVerdict::Indeterminate;
    out.detail = "SDP backend returned " + sdp::to_string(r.status);
    return out;
  }
  out.margin = r.scalars(t);
  if (out.margin < -tol.psd_tol) {
    out.verdict = SosVerdict::Refuted;
    out.detail = "no PSD Gram matrix: best eigenvalue margin is negative";
    return out;
  }
  const Eigen::Index s = static_cast<Eigen::Index>(keep.size());
  const Eigen::MatrixXd qr = scale * (r.blocks[blk] + out.margin * Eigen::MatrixXd::Identity(s, s));
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(basis.size(), basis.size());
  for (Eigen::Index i = 0; i < s; ++i)
    for (Eigen::Index j = 0; j < s; ++j) q(keep[i], keep[j]) = qr(i, j);
  GramCertificate cert = make_certificate(p, family, std::move(q), tol);
  out.verdict = cert.valid ? SosVerdict::Certified : SosVerdict::Indeterminate;
  if (!cert.valid) out.detail = "Gram matrix found but failed the tolerance re-check";
  out.certificate = std::move(cert);
  return out;
}

SosResult is_sos(const Polynomiald& p, const SosTolerances& tol) {
  if (p.degree() % 2 != 0) {
    SosResult out;
    out.verdict = SosVerdict::Refuted;
    out.detail = "odd degree";
    return out;
  }
  return is_sos(p, monomial_basis(p.num_vars(), p.degree() / 2), tol);
}

Polynomiald hessian_form(const Polynomiald& p) {
  const std::size_t n = p.num_vars();
  const auto h = hessian(p);
  Polynomiald q(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      MultiIndex ww(2 * n);
      ww = ww.with(n + i, 1);
      ww = ww.with(n + j, ww[n + j] + 1);
      const Polynomiald wij = Polynomiald::monomial(ww);
      q += h[i][j].lifted(2 * n) * wij;
    }
  }
  return q;
}

SosResult is_sos_convex(const Polynomiald& p, const SosTolerances& tol) {
  const std::size_t n = p.num_vars();
  const Polynomiald q = hessian_form(p);
  // Basis: x^b w_i with |b| <= ceil((deg p - 2) / 2).
  const int dx = std::max(0, (p.degree() - 1) / 2);
  std::vector<MultiIndex> entries;
  for (const MultiIndex& b : monomial_basis(n, dx))
    for (std::size_t i = 0; i < n; ++i) entries.push_back(b.padded(2 * n).with(n + i, 1));
  std::sort(entries.begin(), entries.end());
  const MonomialBasis basis = MonomialBasis::from_entries(2 * n, std::move(entries));

  if (q.is_zero()) {
    SosResult out;
    out.verdict = SosVerdict::Certified;
    out.backend_status = sdp::SolveStatus::Optimal;
    out.detail = "zero Hessian";
    const Eigen::Index s = static_cast<Eigen::Index>(basis.size());
    out.certificate = make_certificate(q, LocatorFamily(basis), Eigen::MatrixXd::Zero(s, s), tol);
    return out;
  }
  return is_sos(q, basis, tol);
}

}  // namespace ccfrac
