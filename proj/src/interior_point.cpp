#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <optional>

#include "ccfrac/cone_program.hpp"
#include "standard_form.hpp"

namespace ccfrac::sdp {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using detail::BlockRow;
using detail::StandardForm;
using detail::Triplet;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Iterate {
  VectorXd u, xl, y, zl;
  std::vector<MatrixXd> X, Z;
};

struct Direction {
  VectorXd du, dxl, dy, dzl;
  std::vector<MatrixXd> dX, dZ;
};

double inner(const std::vector<Triplet>& a, const MatrixXd& x) {
  double s = 0.0;
  for (const Triplet& t : a) s += t.value * x(t.row, t.col);
  return s;
}

MatrixXd sym(const MatrixXd& a) { return 0.5 * (a + a.transpose()); }

// Row/objective scaling applied before the solve and undone afterwards.
struct Scaling {
  VectorXd row;  // row i of the constraints multiplied by row(i)
  double primal = 1.0;
  double dual = 1.0;
};

Scaling equilibrate(StandardForm& sf, bool enabled) {
  Scaling s;
  s.row = VectorXd::Ones(sf.m);
  if (!enabled) return s;
  VectorXd rowmax = VectorXd::Zero(sf.m);
  if (sf.nf() > 0) rowmax = rowmax.cwiseMax(sf.Af.cwiseAbs().rowwise().maxCoeff());
  if (sf.nl() > 0) rowmax = rowmax.cwiseMax(sf.Al.cwiseAbs().rowwise().maxCoeff());
  for (const auto& rows : sf.rows)
    for (const BlockRow& r : rows)
      for (const Triplet& t : r.triplets) rowmax(r.constraint) = std::max(rowmax(r.constraint), std::abs(t.value));
  for (int i = 0; i < sf.m; ++i) s.row(i) = rowmax(i) > 0.0 ? 1.0 / rowmax(i) : 1.0;

  sf.Af = s.row.asDiagonal() * sf.Af;
  sf.Al = s.row.asDiagonal() * sf.Al;
  for (auto& rows : sf.rows)
    for (BlockRow& r : rows)
      for (Triplet& t : r.triplets) t.value *= s.row(r.constraint);
  sf.b = sf.b.cwiseProduct(s.row);

  double bmax = sf.b.size() ? sf.b.cwiseAbs().maxCoeff() : 0.0;
  double cmax = 0.0;
  if (sf.cf.size()) cmax = std::max(cmax, sf.cf.cwiseAbs().maxCoeff());
  if (sf.cl.size()) cmax = std::max(cmax, sf.cl.cwiseAbs().maxCoeff());
  for (const MatrixXd& c : sf.C)
    if (c.size()) cmax = std::max(cmax, c.cwiseAbs().maxCoeff());
  s.primal = std::max(1.0, bmax);
  s.dual = std::max(1.0, cmax);
  sf.b /= s.primal;
  sf.cf /= s.dual;
  sf.cl /= s.dual;
  for (MatrixXd& c : sf.C) c /= s.dual;
  return s;
}

class InteriorPoint {
 public:
  InteriorPoint(const StandardForm& sf, const SolverSettings& st) : sf_(sf), st_(st) {
    nb_ = sf_.block_sizes.size();
    cone_dim_ = sf_.nl();
    for (int k : sf_.block_sizes) cone_dim_ += k;
    bnorm_ = sf_.b.norm();
    double c2 = sf_.cf.squaredNorm() + sf_.cl.squaredNorm();
    for (const MatrixXd& c : sf_.C) c2 += c.squaredNorm();
    cnorm_ = std::sqrt(c2);

    // Gram matrix of the constraint rows, used to snap primal directions back
    // onto A(dx) = rp when the Schur solve loses accuracy.
    MatrixXd gram = MatrixXd::Zero(sf_.m, sf_.m);
    if (sf_.nf()) gram += sf_.Af * sf_.Af.transpose();
    if (sf_.nl()) gram += sf_.Al * sf_.Al.transpose();
    for (std::size_t b = 0; b < nb_; ++b) {
      const int k = sf_.block_sizes[b];
      const auto& rows = sf_.rows[b];
      MatrixXd t = MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), k * k);
      for (std::size_t r = 0; r < rows.size(); ++r)
        for (const Triplet& tr : rows[r].triplets) t(r, tr.row * k + tr.col) += tr.value;
      const MatrixXd tt = t * t.transpose();
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.size(); ++j) gram(rows[i].constraint, rows[j].constraint) += tt(i, j);
    }
    if (sf_.m > 0) gram_.compute(gram);
  }

  SolveStatus run(Iterate& out, int& iterations, double& pinf, double& dinf, double& gap) {
    Iterate it = initial_point();
    Iterate best = it;
    double best_merit = kInf;
    double best_p = kInf, best_d = kInf, best_g = kInf;
    int stall = 0;
    int since_best = 0;
    SolveStatus status = SolveStatus::NumericalTrouble;
    bool converged = false;

    for (iterations = 0; iterations <= st_.max_iterations; ++iterations) {
      Measures ms = measure(it);
      const double merit = std::max({ms.pinf, ms.dinf, ms.gap});
      if (st_.verbose)
        std::fprintf(stderr, "%3d  pobj % .10e  dobj % .10e  pinf %.2e  dinf %.2e  gap %.2e  mu %.2e\n", iterations,
                     ms.pobj, ms.dobj, ms.pinf, ms.dinf, ms.gap, ms.mu);
      // Objectives running off to infinity hint at an infeasibility ray; keep
      // iterating until the certificate test below can fire.
      const bool diverging = ms.dobj > 1e2 * (1.0 + cnorm_) || -ms.pobj > 1e2 * (1.0 + bnorm_);
      if (merit < 0.9 * best_merit || diverging) since_best = 0;
      else ++since_best;
      if (merit < best_merit) {
        best_merit = merit;
        best = it;
        best_p = ms.pinf;
        best_d = ms.dinf;
        best_g = ms.gap;
      }
      if (ms.pinf <= st_.stop_tol && ms.dinf <= st_.stop_tol && ms.gap <= st_.stop_tol) {
        converged = true;
        break;
      }
      if (auto inf = infeasibility(it, ms)) {
        status = *inf;
        out = it;
        pinf = ms.pinf;
        dinf = ms.dinf;
        gap = ms.gap;
        return status;
      }
      if (iterations == st_.max_iterations || since_best >= 15) break;

      double ap = 0.0, ad = 0.0;
      if (!step(it, ms, ap, ad)) break;
      if (st_.verbose) std::fprintf(stderr, "     step p %.3f d %.3f\n", ap, ad);
      const bool solved = best_p <= st_.feasibility_tol && best_d <= st_.feasibility_tol && best_g <= st_.duality_gap_tol;
      if (std::max(ap, ad) < (solved ? 1e-2 : 1e-10)) {
        if (++stall >= 3) break;
      } else {
        stall = 0;
      }
    }
    (void)converged;
    out = best;
    pinf = best_p;
    dinf = best_d;
    gap = best_g;
    if (pinf <= st_.feasibility_tol && dinf <= st_.feasibility_tol && gap <= st_.duality_gap_tol)
      return SolveStatus::Optimal;
    if (pinf <= 1e3 * st_.feasibility_tol && dinf <= 1e3 * st_.feasibility_tol && gap <= 1e2 * st_.duality_gap_tol)
      return SolveStatus::NearOptimal;
    return SolveStatus::NumericalTrouble;
  }

  double primal_objective(const Iterate& it) const {
    double v = sf_.cf.dot(it.u) + sf_.cl.dot(it.xl);
    for (std::size_t b = 0; b < nb_; ++b) v += sf_.C[b].cwiseProduct(it.X[b]).sum();
    return v;
  }
  double dual_objective(const Iterate& it) const { return sf_.b.dot(it.y); }

 private:
  struct Measures {
    VectorXd rp, rf, rl;
    std::vector<MatrixXd> Rd;
    double pobj, dobj, mu, pinf, dinf, gap;
  };

  VectorXd apply_A(const VectorXd& u, const VectorXd& xl, const std::vector<MatrixXd>& X) const {
    VectorXd r = VectorXd::Zero(sf_.m);
    if (sf_.nf()) r += sf_.Af * u;
    if (sf_.nl()) r += sf_.Al * xl;
    for (std::size_t b = 0; b < nb_; ++b)
      for (const BlockRow& row : sf_.rows[b]) r(row.constraint) += inner(row.triplets, X[b]);
    return r;
  }

  MatrixXd apply_At_block(std::size_t b, const VectorXd& y) const {
    MatrixXd s = MatrixXd::Zero(sf_.block_sizes[b], sf_.block_sizes[b]);
    for (const BlockRow& row : sf_.rows[b]) {
      const double yi = y(row.constraint);
      if (yi == 0.0) continue;
      for (const Triplet& t : row.triplets) s(t.row, t.col) += yi * t.value;
    }
    return s;
  }

  Iterate initial_point() const {
    Iterate it;
    it.u = VectorXd::Zero(sf_.nf());
    it.y = VectorXd::Zero(sf_.m);
    const double scale_b = 1.0 + (sf_.b.size() ? sf_.b.cwiseAbs().maxCoeff() : 0.0);
    it.xl = VectorXd::Constant(sf_.nl(), std::max(10.0, scale_b));
    it.zl = VectorXd::Constant(sf_.nl(), std::max(10.0, 1.0 + cnorm_));
    for (std::size_t b = 0; b < nb_; ++b) {
      const int k = sf_.block_sizes[b];
      double max_anorm = 0.0, xi = std::max(10.0, std::sqrt(double(k)));
      for (const BlockRow& row : sf_.rows[b]) {
        double a2 = 0.0;
        for (const Triplet& t : row.triplets) a2 += t.value * t.value;
        const double an = std::sqrt(a2);
        max_anorm = std::max(max_anorm, an);
        xi = std::max(xi, k * (1.0 + std::abs(sf_.b(row.constraint))) / (1.0 + an));
      }
      const double eta = std::max({10.0, std::sqrt(double(k)), max_anorm, sf_.C[b].norm()});
      it.X.push_back(xi * MatrixXd::Identity(k, k));
      it.Z.push_back(eta * MatrixXd::Identity(k, k));
    }
    return it;
  }

  Measures measure(const Iterate& it) const {
    Measures ms;
    ms.rp = sf_.b - apply_A(it.u, it.xl, it.X);
    ms.rf = sf_.cf - sf_.Af.transpose() * it.y;
    ms.rl = sf_.cl - sf_.Al.transpose() * it.y - it.zl;
    double d2 = ms.rf.squaredNorm() + ms.rl.squaredNorm();
    double compl_sum = it.xl.dot(it.zl);
    for (std::size_t b = 0; b < nb_; ++b) {
      ms.Rd.push_back(sf_.C[b] - apply_At_block(b, it.y) - it.Z[b]);
      d2 += ms.Rd.back().squaredNorm();
      compl_sum += it.X[b].cwiseProduct(it.Z[b]).sum();
    }
    ms.pobj = primal_objective(it);
    ms.dobj = dual_objective(it);
    ms.mu = cone_dim_ > 0 ? compl_sum / cone_dim_ : 0.0;
    ms.pinf = ms.rp.norm() / (1.0 + bnorm_);
    ms.dinf = std::sqrt(d2) / (1.0 + cnorm_);
    const double denom = 1.0 + std::abs(ms.pobj) + std::abs(ms.dobj);
    ms.gap = std::max(std::abs(ms.pobj - ms.dobj), std::abs(compl_sum)) / denom;
    return ms;
  }

  // Certificates of infeasibility read off a diverging iterate.
  std::optional<SolveStatus> infeasibility(const Iterate& it, const Measures& ms) const {
    const double tol = st_.infeasibility_tol;
    if (ms.dobj > 1e2 * (1.0 + cnorm_)) {
      // A^*(y) + Z = C - Rd must vanish relative to b'y.
      double r2 = (sf_.cf - ms.rf).squaredNorm() + (sf_.cl - ms.rl).squaredNorm();
      for (std::size_t b = 0; b < nb_; ++b) r2 += (sf_.C[b] - ms.Rd[b]).squaredNorm();
      if (std::sqrt(r2) / ms.dobj <= tol) return SolveStatus::PrimalInfeasible;
    }
    if (-ms.pobj > 1e2 * (1.0 + bnorm_)) {
      // A(x) = b - rp must vanish relative to -c'x.
      if ((sf_.b - ms.rp).norm() / (-ms.pobj) <= tol) return SolveStatus::DualInfeasible;
    }
    (void)it;
    return std::nullopt;
  }

  static double max_step_psd(const Eigen::LLT<MatrixXd>& chol, const MatrixXd& d) {
    const MatrixXd& l = chol.matrixL();
    MatrixXd t = l.triangularView<Eigen::Lower>().solve(d);
    MatrixXd s = l.triangularView<Eigen::Lower>().solve(t.transpose());
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym(s), Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    return lmin < 0.0 ? -1.0 / lmin : kInf;
  }

  static double max_step_lp(const VectorXd& x, const VectorXd& dx) {
    double a = kInf;
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (dx(i) < 0.0) a = std::min(a, -x(i) / dx(i));
    return a;
  }

  bool step(Iterate& it, const Measures& ms, double& ap, double& ad) {
    const int m = sf_.m, nf = sf_.nf();
    std::vector<MatrixXd> Zinv(nb_);
    std::vector<Eigen::LLT<MatrixXd>> cholX(nb_), cholZ(nb_);
    for (std::size_t b = 0; b < nb_; ++b) {
      cholX[b].compute(it.X[b]);
      cholZ[b].compute(it.Z[b]);
      if (cholX[b].info() != Eigen::Success || cholZ[b].info() != Eigen::Success) return false;
      Zinv[b] = sym(cholZ[b].solve(MatrixXd::Identity(sf_.block_sizes[b], sf_.block_sizes[b])));
    }
    const VectorXd D = it.xl.cwiseQuotient(it.zl);

    // Schur complement M_ij = <A_i, X A_j Z^-1> + (Al D Al')_ij.
    MatrixXd M = MatrixXd::Zero(m, m);
    if (sf_.nl()) M += sf_.Al * D.asDiagonal() * sf_.Al.transpose();
    for (std::size_t b = 0; b < nb_; ++b) {
      const int k = sf_.block_sizes[b];
      const auto& rows = sf_.rows[b];
      for (const BlockRow& rj : rows) {
        MatrixXd W = MatrixXd::Zero(k, k);
        for (const Triplet& t : rj.triplets) W.noalias() += t.value * it.X[b].col(t.row) * Zinv[b].row(t.col);
        for (const BlockRow& ri : rows) {
          double s = 0.0;
          for (const Triplet& t : ri.triplets) s += t.value * W(t.col, t.row);
          M(ri.constraint, rj.constraint) += s;
        }
      }
    }
    M = sym(M);

    MatrixXd K(m + nf, m + nf);
    K.setZero();
    K.topLeftCorner(m, m) = M;
    if (nf) {
      K.topRightCorner(m, nf) = sf_.Af;
      K.bottomLeftCorner(nf, m) = sf_.Af.transpose();
    }
    Eigen::PartialPivLU<MatrixXd> lu;
    if (m + nf > 0) lu.compute(K);

    auto solve_dir = [&](double sigma_mu, const Direction* corr) {
      Direction d;
      // G terms: the part of dX not depending on dy.
      VectorXd gl(sf_.nl());
      for (Eigen::Index i = 0; i < gl.size(); ++i) {
        double c = sigma_mu - it.xl(i) * it.zl(i);
        if (corr) c -= corr->dxl(i) * corr->dzl(i);
        gl(i) = c / it.zl(i) - D(i) * ms.rl(i);
      }
      std::vector<MatrixXd> G(nb_);
      for (std::size_t b = 0; b < nb_; ++b) {
        const int k = sf_.block_sizes[b];
        MatrixXd r = sigma_mu * MatrixXd::Identity(k, k);
        if (corr) r -= corr->dX[b] * corr->dZ[b];
        G[b] = sym(r * Zinv[b]) - it.X[b] - sym(it.X[b] * ms.Rd[b] * Zinv[b]);
      }
      VectorXd rhs(m + nf);
      rhs.head(m) = ms.rp - apply_A(VectorXd::Zero(nf), gl, G);
      if (nf) rhs.tail(nf) = ms.rf;
      VectorXd sol = VectorXd::Zero(m + nf);
      if (m + nf > 0) {
        sol = lu.solve(rhs);
        // One step of iterative refinement.
        sol += lu.solve(rhs - K * sol);
      }
      d.dy = sol.head(m);
      d.du = nf ? VectorXd(sol.tail(nf)) : VectorXd();
      d.dzl = ms.rl - sf_.Al.transpose() * d.dy;
      d.dxl = gl + D.cwiseProduct(sf_.Al.transpose() * d.dy);
      for (std::size_t b = 0; b < nb_; ++b) {
        MatrixXd aty = apply_At_block(b, d.dy);
        d.dZ.push_back(sym(ms.Rd[b] - aty));
        d.dX.push_back(G[b] + sym(it.X[b] * aty * Zinv[b]));
      }
      project_primal(d, ms.rp);
      return d;
    };

    auto step_lengths = [&](const Direction& d, double& a_p, double& a_d) {
      a_p = max_step_lp(it.xl, d.dxl);
      a_d = max_step_lp(it.zl, d.dzl);
      for (std::size_t b = 0; b < nb_; ++b) {
        a_p = std::min(a_p, max_step_psd(cholX[b], d.dX[b]));
        a_d = std::min(a_d, max_step_psd(cholZ[b], d.dZ[b]));
      }
    };

    // Predictor.
    Direction pred = solve_dir(0.0, nullptr);
    double amp, amd;
    step_lengths(pred, amp, amd);
    const double pa = std::min(1.0, amp), da = std::min(1.0, amd);
    double mu_aff = (it.xl + pa * pred.dxl).dot(it.zl + da * pred.dzl);
    for (std::size_t b = 0; b < nb_; ++b)
      mu_aff += (it.X[b] + pa * pred.dX[b]).cwiseProduct(it.Z[b] + da * pred.dZ[b]).sum();
    mu_aff /= std::max(1, cone_dim_);
    double sigma = ms.mu > 0.0 ? std::pow(std::max(0.0, mu_aff) / ms.mu, 3) : 0.0;
    sigma = std::clamp(sigma, 0.0, 1.0);
    // Keep some centering when the predictor step is short.
    if (std::min(pa, da) < 0.1) sigma = std::max(sigma, 0.5);

    // Corrector.
    Direction d = solve_dir(sigma * ms.mu, &pred);
    double mp, md;
    step_lengths(d, mp, md);
    ap = std::min(1.0, st_.step_fraction * mp);
    ad = std::min(1.0, st_.step_fraction * md);

    Iterate next = it;
    for (int attempt = 0; attempt < 8; ++attempt) {
      next.u = it.u + ap * d.du;
      next.xl = it.xl + ap * d.dxl;
      next.y = it.y + ad * d.dy;
      next.zl = it.zl + ad * d.dzl;
      bool pd = true;
      for (std::size_t b = 0; b < nb_ && pd; ++b) {
        next.X[b] = sym(it.X[b] + ap * d.dX[b]);
        next.Z[b] = sym(it.Z[b] + ad * d.dZ[b]);
        pd = Eigen::LLT<MatrixXd>(next.X[b]).info() == Eigen::Success &&
             Eigen::LLT<MatrixXd>(next.Z[b]).info() == Eigen::Success;
      }
      if (pd && (next.xl.size() == 0 || next.xl.minCoeff() > 0.0) && (next.zl.size() == 0 || next.zl.minCoeff() > 0.0)) {
        it = std::move(next);
        return true;
      }
      ap *= 0.8;
      ad *= 0.8;
    }
    return false;
  }

  // Least-norm change of (du, dxl, dX) that makes A(d) equal rp exactly.
  void project_primal(Direction& d, const VectorXd& rp) const {
    if (sf_.m == 0) return;
    VectorXd e = rp - apply_A(d.du, d.dxl, d.dX);
    const VectorXd w = gram_.solve(e);
    if (sf_.nf()) d.du += sf_.Af.transpose() * w;
    if (sf_.nl()) d.dxl += sf_.Al.transpose() * w;
    for (std::size_t b = 0; b < nb_; ++b) d.dX[b] += apply_At_block(b, w);
  }

  const StandardForm& sf_;
  const SolverSettings& st_;
  Eigen::CompleteOrthogonalDecomposition<MatrixXd> gram_;
  std::size_t nb_ = 0;
  int cone_dim_ = 0;
  double bnorm_ = 0.0;
  double cnorm_ = 0.0;
};

}  // namespace

namespace {

SolveStatus swap_roles(SolveStatus s) {
  if (s == SolveStatus::PrimalInfeasible) return SolveStatus::DualInfeasible;
  if (s == SolveStatus::DualInfeasible) return SolveStatus::PrimalInfeasible;
  return s;
}

void recheck(const ConeProgram& cp, const SolverSettings& settings, SolveResult& res) {
  if (!res.ok()) return;
  res.recheck_residual = constraint_residual(cp, res.scalars, res.blocks);
  double scale = 1.0;
  for (const Constraint& c : cp.constraints()) scale = std::max(scale, 1.0 + std::abs(c.rhs));
  if (res.status == SolveStatus::Optimal && res.recheck_residual > 10.0 * settings.feasibility_tol * scale)
    res.status = SolveStatus::NearOptimal;
}

SolveResult solve_dual_form(const ConeProgram& cp, detail::DualLowering& low, const SolverSettings& settings) {
  StandardForm& sf = low.form;
  const Scaling sc = equilibrate(sf, settings.equilibrate);

  SolveResult res;
  Iterate it;
  InteriorPoint ipm(sf, settings);
  const SolveStatus st = ipm.run(it, res.iterations, res.dual_residual, res.primal_residual, res.relative_gap);
  res.status = swap_roles(st);

  const double obj_scale = sc.primal * sc.dual;
  res.primal_objective = -low.sign * obj_scale * ipm.dual_objective(it);
  res.dual_objective = -low.sign * obj_scale * ipm.primal_objective(it);

  res.scalars = sc.dual * it.y.cwiseProduct(sc.row);
  res.blocks = detail::dual_blocks(cp, low, res.scalars);
  for (const MatrixXd& x : it.X) res.block_duals.push_back(low.sign * sc.primal * x);

  res.constraint_duals.resize(cp.constraints().size());
  for (std::size_t ci = 0; ci < low.roles.size(); ++ci) {
    const detail::DualRole& r = low.roles[ci];
    double w = 0.0;
    switch (r.kind) {
      case detail::DualRole::Equality: w = -sc.primal * it.u(r.index); break;
      case detail::DualRole::Inequality: w = -r.orientation * sc.primal * it.xl(r.index); break;
      case detail::DualRole::Entry: {
        const double z = sc.primal * it.X[r.block](r.row, r.col);
        w = -(r.row == r.col ? 1.0 : 2.0) * z / r.coef;
        break;
      }
    }
    res.constraint_duals(ci) = low.sign * w;
  }
  recheck(cp, settings, res);
  return res;
}

}  // namespace

SolveResult solve(const ConeProgram& cp, const SolverSettings& settings) {
  if (settings.dualize && cp.num_scalars() < cp.constraints().size())
    if (std::optional<detail::DualLowering> dl = detail::lower_dual(cp)) return solve_dual_form(cp, *dl, settings);

  detail::Lowering low = detail::lower(cp);
  StandardForm& sf = low.form;
  const Scaling sc = equilibrate(sf, settings.equilibrate);

  SolveResult res;
  Iterate it;
  InteriorPoint ipm(sf, settings);
  res.status = ipm.run(it, res.iterations, res.primal_residual, res.dual_residual, res.relative_gap);

  // Undo scaling: x = primal * x~, y = dual * row .* y~, Z = dual * Z~.
  const double obj_scale = sc.primal * sc.dual;
  res.primal_objective = low.sign * obj_scale * ipm.primal_objective(it);
  res.dual_objective = low.sign * obj_scale * ipm.dual_objective(it);

  res.scalars.resize(cp.num_scalars());
  for (std::size_t i = 0; i < cp.num_scalars(); ++i) {
    const detail::ScalarSlot s = low.scalar_slots[i];
    res.scalars(i) = sc.primal * (s.free ? it.u(s.index) : it.xl(s.index));
  }
  for (std::size_t b = 0; b < it.X.size(); ++b) {
    res.blocks.push_back(sc.primal * it.X[b]);
    res.block_duals.push_back(low.sign * sc.dual * it.Z[b]);
  }
  res.constraint_duals = low.sign * sc.dual * it.y.cwiseProduct(sc.row);

  recheck(cp, settings, res);
  return res;
}

}  // namespace ccfrac::sdp
