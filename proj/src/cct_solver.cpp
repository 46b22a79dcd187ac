#include "ccfrac/cct_solver.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace ccfrac {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Adds the free moment variables y_alpha, the PSD block M and the equalities
// M(i, j) = y_{b_i + b_j} for i <= j. Returns the y indices.
std::vector<std::size_t> add_moment_block(sdp::ConeProgram& cp, const MonomialBasis& moments,
                                          const MonomialBasis& half, std::size_t& block) {
  std::vector<std::size_t> y(moments.size());
  for (std::size_t& v : y) v = cp.add_scalar(false);
  block = cp.add_psd_block(half.size());
  for (std::size_t i = 0; i < half.size(); ++i) {
    for (std::size_t j = i; j < half.size(); ++j) {
      sdp::LinearExpr e;
      e.add_entry(block, i, j, 1.0);
      e.add_scalar(y[*moments.index_of(half[i] + half[j])], -1.0);
      cp.add_constraint(std::move(e), sdp::Relation::Equal, 0.0);
    }
  }
  return y;
}

sdp::LinearExpr riesz(const Polynomiald& p, const MonomialBasis& moments, const std::vector<std::size_t>& y) {
  sdp::LinearExpr e;
  for (const auto& [alpha, c] : p.terms()) e.add_scalar(y[*moments.index_of(alpha)], c);
  return e;
}

int clearing_power(const Polynomiald& p) { return std::max(1, p.degree()); }

}  // namespace

CctPoint cct_map(const Eigen::VectorXd& x, const FractionalProgram& fp) {
  if (static_cast<std::size_t>(x.size()) != fp.num_vars()) throw DimensionError("cct_map: point has wrong dimension");
  const double gx = fp.g().evaluate(x);
  if (!(gx < 0.0)) throw AssumptionError("cct_map: g(x) >= 0, the denominator -g must be positive");
  CctPoint p;
  p.t = 1.0 / -gx;
  p.s = p.t * x;
  return p;
}

DualProgram assemble_D(const FractionalProgram& fp) {
  DualProgram dp{{}, {}, 0, 0, coefficient_locator_matrices(fp.num_vars(), fp.order())};
  sdp::ConeProgram& cp = dp.program;
  for (std::size_t i = 0; i < fp.num_constraints(); ++i) dp.lambda.push_back(cp.add_scalar(true));
  dp.gamma = cp.add_scalar(true);
  dp.gram_block = cp.add_psd_block(dp.family.basis().size());

  const MonomialBasis& prods = dp.family.products();
  for (std::size_t k = 0; k < prods.size(); ++k) {
    const MultiIndex& alpha = prods[k];
    sdp::LinearExpr e;
    for (const auto& [i, j] : dp.family.positions(k))
      if (i <= j) e.add_entry(dp.gram_block, i, j, i == j ? 1.0 : 2.0);
    for (std::size_t i = 0; i < fp.num_constraints(); ++i) {
      const double c = fp.h()[i].coeff(alpha);
      if (c != 0.0) e.add_scalar(dp.lambda[i], -c);
    }
    if (const double c = fp.g().coeff(alpha); c != 0.0) e.add_scalar(dp.gamma, -c);
    cp.add_constraint(std::move(e), sdp::Relation::Equal, fp.f().coeff(alpha));
  }
  cp.set_objective(sdp::LinearExpr{}.add_scalar(dp.gamma, 1.0), sdp::Sense::Maximize);
  return dp;
}

MomentProgram assemble_Q(const FractionalProgram& fp) {
  MomentProgram mp;
  mp.moments = monomial_basis(fp.num_vars(), 2 * fp.order());
  mp.half = monomial_basis(fp.num_vars(), fp.order());
  sdp::ConeProgram& cp = mp.program;
  mp.y = add_moment_block(cp, mp.moments, mp.half, mp.moment_block);
  cp.add_constraint(riesz(fp.g(), mp.moments, mp.y), sdp::Relation::LessEqual, -1.0);
  for (const Polynomiald& h : fp.h()) cp.add_constraint(riesz(h, mp.moments, mp.y), sdp::Relation::LessEqual, 0.0);
  cp.set_objective(riesz(fp.f(), mp.moments, mp.y), sdp::Sense::Minimize);
  return mp;
}

std::optional<Eigen::VectorXd> extract_solution(const MomentVector& y, double attainment_tol) {
  const double y0 = y.mass();
  if (!(y0 >= attainment_tol)) return std::nullopt;
  const std::size_t n = y.num_vars();
  Eigen::VectorXd x(n);
  for (std::size_t i = 0; i < n; ++i) x(i) = y[MultiIndex::unit(n, i)] / y0;
  return x;
}

ConvexMinResult min_convex_poly(const Polynomiald& objective, const std::vector<Polynomiald>& constraints,
                                std::size_t n, int d, const sdp::SolverSettings& settings) {
  if (objective.num_vars() != n) throw DimensionError("min_convex_poly: objective has wrong variable count");
  if (objective.degree() > 2 * d) throw DimensionError("min_convex_poly: objective degree exceeds 2d");
  for (const Polynomiald& h : constraints) {
    if (h.num_vars() != n) throw DimensionError("min_convex_poly: constraint has wrong variable count");
    if (h.degree() > 2 * d) throw DimensionError("min_convex_poly: constraint degree exceeds 2d");
  }
  const MonomialBasis moments = monomial_basis(n, 2 * d);
  const MonomialBasis half = monomial_basis(n, d);
  sdp::ConeProgram cp;
  std::size_t block = 0;
  const std::vector<std::size_t> y = add_moment_block(cp, moments, half, block);
  cp.add_constraint(sdp::LinearExpr{}.add_scalar(y[0], 1.0), sdp::Relation::Equal, 1.0);
  for (const Polynomiald& h : constraints) cp.add_constraint(riesz(h, moments, y), sdp::Relation::LessEqual, 0.0);
  cp.set_objective(riesz(objective, moments, y), sdp::Sense::Minimize);

  const sdp::SolveResult r = sdp::solve(cp, settings);
  ConvexMinResult out;
  out.status = r.status;
  if (r.status == sdp::SolveStatus::DualInfeasible) {
    out.value = -kInf;
  } else if (r.status == sdp::SolveStatus::PrimalInfeasible) {
    out.value = kInf;
  } else if (r.ok()) {
    out.value = r.primal_objective;
    Eigen::VectorXd x(n);
    for (std::size_t i = 0; i < n; ++i) x(i) = r.scalars(y[*moments.index_of(MultiIndex::unit(n, i))]);
    out.point = x;
  }
  return out;
}

std::string to_string(SlaterVerdict v) {
  switch (v) {
    case SlaterVerdict::Yes: return "yes";
    case SlaterVerdict::No: return "no";
    case SlaterVerdict::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

namespace {

// Phase 1 in (x, tau): min tau + eps |x|^2  s.t.  p(x) - tau <= 0 for p in ps,
// tau >= -1. The small proximal term keeps the moment solution bounded when
// the minimizing set is unbounded.
struct PhaseOne {
  ConvexMinResult result;
  double tau = std::numeric_limits<double>::quiet_NaN();
  std::optional<Eigen::VectorXd> x;
};

PhaseOne phase_one(const std::vector<Polynomiald>& ps, std::size_t n, int d, const sdp::SolverSettings& st) {
  constexpr double kProximal = 1e-4;
  const std::size_t nt = n + 1;
  const Polynomiald tau = Polynomiald::variable(nt, n);
  Polynomiald obj = tau;
  for (std::size_t i = 0; i < n; ++i) {
    const Polynomiald xi = Polynomiald::variable(nt, i);
    obj += kProximal * (xi * xi);
  }
  std::vector<Polynomiald> cons;
  for (const Polynomiald& p : ps) cons.push_back(p.lifted(nt) - tau);
  cons.push_back(-tau - Polynomiald::constant(nt, 1.0));

  PhaseOne out;
  out.result = min_convex_poly(obj, cons, nt, std::max(d, 1), st);
  if (out.result.point) {
    out.tau = (*out.result.point)(n);
    out.x = out.result.point->head(n);
  }
  return out;
}

double max_value(const std::vector<Polynomiald>& ps, const Eigen::VectorXd& x) {
  double m = -kInf;
  for (const Polynomiald& p : ps) m = std::max(m, p.evaluate(x));
  return m;
}

}  // namespace

SlaterResult slater_check(const FractionalProgram& fp, double margin, const sdp::SolverSettings& settings) {
  SlaterResult out;
  const std::size_t n = fp.num_vars();
  PhaseOne p1 = phase_one(fp.h(), n, fp.order(), settings);
  if (p1.result.infeasible()) {
    out.verdict = SlaterVerdict::No;
    out.tau = kInf;
    out.detail = "phase-1 relaxation infeasible";
    return out;
  }
  if (!p1.x) {
    out.detail = "phase-1 solve failed: " + sdp::to_string(p1.result.status);
    return out;
  }
  out.tau = p1.tau;
  if (out.tau > -margin) {
    out.verdict = SlaterVerdict::No;
    out.detail = "no strictly feasible point: phase-1 optimum is not below -margin";
    return out;
  }
  auto accept = [&](const Eigen::VectorXd& x) {
    out.witness = x;
    out.max_constraint = max_value(fp.h(), x);
    return out.max_constraint < -margin && fp.g().evaluate(x) < 0.0;
  };
  if (accept(*p1.x)) {
    out.verdict = SlaterVerdict::Yes;
    return out;
  }
  // The witness may sit where g >= 0; look for a point with g < 0 as well.
  std::vector<Polynomiald> with_g = fp.h();
  with_g.push_back(fp.g());
  PhaseOne p2 = phase_one(with_g, n, fp.order(), settings);
  if (p2.x && p2.tau < -margin && accept(*p2.x)) {
    out.verdict = SlaterVerdict::Yes;
    return out;
  }
  out.verdict = SlaterVerdict::Indeterminate;
  out.detail = "phase-1 witness failed the direct check";
  return out;
}

std::string to_string(SolveOutcome s) {
  switch (s) {
    case SolveOutcome::Solved: return "Solved";
    case SolveOutcome::SolvedValueOnly: return "SolvedValueOnly";
    case SolveOutcome::Infeasible: return "Infeasible";
    case SolveOutcome::Unbounded: return "Unbounded";
    case SolveOutcome::AssumptionViolated: return "AssumptionViolated";
    case SolveOutcome::NumericalTrouble: return "NumericalTrouble";
  }
  return "Unknown";
}

Eigen::VectorXd pcct_multipliers(const FractionalProgram& fp, const Eigen::VectorXd& lambda, double gamma, double t) {
  const std::size_t m = fp.num_constraints();
  if (static_cast<std::size_t>(lambda.size()) != m) throw DimensionError("pcct_multipliers: need one lambda per constraint");
  Eigen::VectorXd mu(m + 1);
  for (std::size_t i = 0; i < m; ++i) mu(i) = lambda(i) / std::pow(t, clearing_power(fp.h()[i]) - 1);
  mu(m) = gamma / std::pow(t, clearing_power(fp.g()) - 1);
  return mu;
}

SolveReport solve_fractional(const FractionalProgram& fp, const SolveConfig& config) {
  SolveReport rep;
  const std::size_t n = fp.num_vars();
  const std::size_t m = fp.num_constraints();

  // 1. SOS-convexity screening.
  if (config.screen_sos_convexity) {
    auto screen = [&](const std::string& name, const Polynomiald& p) {
      rep.screening.push_back({name, is_sos_convex(p, config.sos).verdict});
    };
    screen("f", fp.f());
    screen("g", fp.g());
    if (!fp.has_sentinel_constraint())
      for (std::size_t i = 0; i < m; ++i) screen("h" + std::to_string(i + 1), fp.h()[i]);
    for (const ScreeningEntry& e : rep.screening) {
      if (e.verdict == SosVerdict::Refuted) {
        rep.status = SolveOutcome::AssumptionViolated;
        rep.notes.push_back(e.name + " is not SOS-convex");
      } else if (e.verdict == SosVerdict::Indeterminate) {
        rep.notes.push_back("SOS-convexity of " + e.name + " could not be decided");
      }
    }
    if (rep.status == SolveOutcome::AssumptionViolated) return rep;
  }

  // 2. Strict feasibility.
  rep.slater = slater_check(fp, config.slater_margin, config.sdp);
  if (rep.slater.verdict == SlaterVerdict::No) {
    if (rep.slater.tau > config.slater_margin) {
      rep.status = SolveOutcome::Infeasible;
      rep.notes.push_back("the feasible set is empty");
      return rep;
    }
    rep.notes.push_back("Slater condition fails: strong duality is not guaranteed");
  } else if (rep.slater.verdict == SlaterVerdict::Indeterminate) {
    rep.notes.push_back("Slater condition undecided: " + rep.slater.detail);
  }

  // 3. The moment problem (Q) and the SOS problem (D).
  const MomentProgram qp = assemble_Q(fp);
  const sdp::SolveResult rq = sdp::solve(qp.program, config.sdp);
  const DualProgram dp = assemble_D(fp);
  const sdp::SolveResult rd = sdp::solve(dp.program, config.sdp);
  rep.status_Q = rq.status;
  rep.status_D = rd.status;

  if (rq.status == sdp::SolveStatus::PrimalInfeasible) {
    rep.status = SolveOutcome::Infeasible;
    rep.notes.push_back("(Q) is infeasible: no feasible point with g < 0");
    return rep;
  }
  if (rq.status == sdp::SolveStatus::DualInfeasible || rd.status == sdp::SolveStatus::PrimalInfeasible) {
    // A nonnegative numerator keeps the ratio >= 0, so check f over K first.
    const ConvexMinResult fmin = min_convex_poly(fp.f(), fp.h(), n, fp.order(), config.sdp);
    if (fmin.unbounded() || (fmin.point && fmin.value < -config.feasibility_tol)) {
      rep.status = SolveOutcome::AssumptionViolated;
      rep.notes.push_back("f takes negative values on the feasible set");
      return rep;
    }
    rep.status = SolveOutcome::Unbounded;
    rep.value = -kInf;
    rep.notes.push_back("the ratio is unbounded below on the feasible set");
    return rep;
  }
  if (!rq.ok() || !rd.ok()) {
    rep.status = SolveOutcome::NumericalTrouble;
    rep.notes.push_back("SDP backend: (Q) " + sdp::to_string(rq.status) + ", (D) " + sdp::to_string(rd.status));
    return rep;
  }

  rep.value_Q = rq.primal_objective;
  rep.value_D = rd.primal_objective;
  rep.value = rep.value_Q;
  rep.moments.resize(static_cast<Eigen::Index>(qp.y.size()));
  for (std::size_t k = 0; k < qp.y.size(); ++k) rep.moments(k) = rq.scalars(qp.y[k]);
  rep.lambda.resize(m);
  for (std::size_t i = 0; i < m; ++i) rep.lambda(i) = rd.scalars(dp.lambda[i]);
  rep.gamma = rd.scalars(dp.gamma);

  // Certificate for f + sum lambda_i h_i + gamma g.
  Polynomiald sos = fp.f() + rep.gamma * fp.g();
  for (std::size_t i = 0; i < m; ++i) sos += rep.lambda(i) * fp.h()[i];
  GramCertificate cert = make_certificate(sos, dp.family, rd.blocks[dp.gram_block], config.sos);
  if (!cert.valid) {
    const SosResult again = is_sos(sos, dp.family.basis(), config.sos);
    if (again.certificate && again.certificate->valid) cert = *again.certificate;
  }
  if (cert.valid)
    rep.certificate = std::move(cert);
  else
    rep.notes.push_back("Gram certificate of (D) failed the tolerance re-check");

  // 4. Value chain.
  bool chain_ok = true;
  if (!weak_duality_check(rep.value_D, rep.value_Q, config.weak_duality_tol)) {
    rep.notes.push_back("weak duality violated: value(D) > value(Q)");
    chain_ok = false;
  }
  if (std::abs(rep.value_D - rep.value_Q) > config.gap_tol) {
    rep.notes.push_back("duality gap between (D) and (Q) exceeds the tolerance");
    chain_ok = false;
  }

  // 7. Boundedness of the denominator over K (run before extraction so the
  // non-attainment branch can report it).
  const ConvexMinResult gmin = min_convex_poly(fp.g(), fp.h(), n, fp.order(), config.sdp);
  if (gmin.unbounded()) {
    rep.min_g = -kInf;
    rep.denominator_unbounded = true;
    rep.notes.push_back("sup of -g over K is +inf: attainment is not guaranteed");
  } else if (gmin.point) {
    rep.min_g = gmin.value;
  }

  if (!chain_ok) {
    rep.status = SolveOutcome::NumericalTrouble;
    return rep;
  }

  // 5. Extraction.
  const MomentVector mv(n, fp.order(), rep.moments);
  rep.y0 = mv.mass();
  rep.x_bar = extract_solution(mv, config.attainment_tol);
  if (!rep.x_bar) {
    rep.status = SolveOutcome::SolvedValueOnly;
    rep.notes.push_back("y0 below the attainment tolerance: the infimum is not attained");
    return rep;
  }
  const Eigen::VectorXd& x = *rep.x_bar;

  // 6. Verification at the extracted point.
  VerificationReport vr;
  vr.feasibility_residual = std::max(0.0, max_value(fp.h(), x));
  vr.dinkelbach_residual = std::abs(dinkelbach_residual(fp, x, rep.value));
  if (rep.certificate) {
    vr.gram_residual = gram_residual(sos, *rep.certificate);
    vr.gram_min_eigenvalue = rep.certificate->min_eigenvalue;
  }
  const double gx = fp.g().evaluate(x);
  const double fx = fp.f().evaluate(x);
  if (!(gx < 0.0)) {
    rep.status = SolveOutcome::AssumptionViolated;
    rep.notes.push_back("g(x_bar) >= 0");
    rep.verification = vr;
    return rep;
  }
  if (fx < -config.feasibility_tol) {
    rep.status = SolveOutcome::AssumptionViolated;
    rep.notes.push_back("f(x_bar) < 0");
    rep.verification = vr;
    return rep;
  }
  const CctPoint cp = cct_map(x, fp);
  rep.kkt_multipliers = pcct_multipliers(fp, rep.lambda, rep.gamma, cp.t);
  const KktResidual kkt = kkt_residual_pcct(fp, cp, rep.kkt_multipliers);
  vr.kkt_stationarity_norm = kkt.stationarity;
  vr.kkt_complementarity_norm = kkt.complementarity;
  if (config.grid_oracle && n <= 3) {
    vr.oracle_box = default_oracle_box(n, rep.x_bar);
    vr.oracle_steps = default_oracle_steps(n);
    try {
      const GridResult g = grid_oracle(fp, vr.oracle_box, vr.oracle_steps);
      vr.oracle_value = g.value;
      vr.oracle_gap = g.value - rep.value;
    } catch (const EmptyFeasibleGrid&) {
      rep.notes.push_back("grid oracle found no feasible grid point");
    }
  }
  rep.verification = vr;

  if (vr.oracle_value && *vr.oracle_value < -config.feasibility_tol) {
    rep.status = SolveOutcome::AssumptionViolated;
    rep.notes.push_back("f < 0 at a feasible grid point");
    return rep;
  }
  if (vr.feasibility_residual > config.feasibility_tol) {
    rep.status = SolveOutcome::NumericalTrouble;
    rep.notes.push_back("extracted point violates the constraints");
    return rep;
  }
  if (std::abs(fx / -gx - rep.value) > config.gap_tol * (1.0 + std::abs(rep.value))) {
    rep.status = SolveOutcome::NumericalTrouble;
    rep.notes.push_back("f(x_bar) / -g(x_bar) does not match the optimal value");
    return rep;
  }
  rep.status = SolveOutcome::Solved;
  return rep;
}

}  // namespace ccfrac
