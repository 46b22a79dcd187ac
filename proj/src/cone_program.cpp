#include "ccfrac/cone_program.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "standard_form.hpp"

namespace ccfrac::sdp {

LinearExpr& LinearExpr::add_scalar(std::size_t var, double c) {
  if (c != 0.0) scalars.emplace_back(var, c);
  return *this;
}

LinearExpr& LinearExpr::add_entry(std::size_t block, std::size_t row, std::size_t col, double c) {
  if (c != 0.0) entries.push_back({block, std::min(row, col), std::max(row, col), c});
  return *this;
}

LinearExpr& LinearExpr::add_inner(std::size_t block, const Eigen::MatrixXd& c) {
  for (Eigen::Index j = 0; j < c.cols(); ++j) {
    add_entry(block, j, j, c(j, j));
    for (Eigen::Index i = 0; i < j; ++i) add_entry(block, i, j, c(i, j) + c(j, i));
  }
  return *this;
}

std::size_t ConeProgram::add_scalar(bool nonnegative) {
  nonneg_.push_back(nonnegative);
  return nonneg_.size() - 1;
}

std::size_t ConeProgram::add_psd_block(std::size_t size) {
  if (size == 0) throw std::invalid_argument("ConeProgram: PSD block size must be positive");
  blocks_.push_back(size);
  return blocks_.size() - 1;
}

std::size_t ConeProgram::add_constraint(LinearExpr expr, Relation rel, double rhs) {
  check(expr);
  constraints_.push_back({std::move(expr), rel, rhs});
  return constraints_.size() - 1;
}

void ConeProgram::set_objective(LinearExpr expr, Sense sense) {
  check(expr);
  objective_ = std::move(expr);
  sense_ = sense;
}

void ConeProgram::check(const LinearExpr& e) const {
  for (const auto& [var, c] : e.scalars) {
    if (var >= nonneg_.size()) throw std::invalid_argument("ConeProgram: reference to undeclared scalar variable");
    if (!std::isfinite(c)) throw std::invalid_argument("ConeProgram: non-finite coefficient");
  }
  for (const BlockEntry& en : e.entries) {
    if (en.block >= blocks_.size()) throw std::invalid_argument("ConeProgram: reference to undeclared PSD block");
    if (en.col >= blocks_[en.block]) throw std::invalid_argument("ConeProgram: block entry out of range");
    if (!std::isfinite(en.value)) throw std::invalid_argument("ConeProgram: non-finite coefficient");
  }
}

void ConeProgram::validate() const {
  check(objective_);
  for (const Constraint& c : constraints_) {
    check(c.expr);
    if (!std::isfinite(c.rhs)) throw std::invalid_argument("ConeProgram: non-finite right-hand side");
  }
}

double ConeProgram::evaluate(const LinearExpr& e, const Eigen::VectorXd& scalars,
                             const std::vector<Eigen::MatrixXd>& blocks) const {
  double v = 0.0;
  for (const auto& [var, c] : e.scalars) v += c * scalars(var);
  for (const BlockEntry& en : e.entries) v += en.value * blocks[en.block](en.row, en.col);
  return v;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::NearOptimal: return "NearOptimal";
    case SolveStatus::PrimalInfeasible: return "PrimalInfeasible";
    case SolveStatus::DualInfeasible: return "DualInfeasible";
    case SolveStatus::NumericalTrouble: return "NumericalTrouble";
  }
  return "Unknown";
}

double constraint_residual(const ConeProgram& cp, const Eigen::VectorXd& scalars,
                           const std::vector<Eigen::MatrixXd>& blocks) {
  if (scalars.size() != static_cast<Eigen::Index>(cp.num_scalars()) || blocks.size() != cp.block_sizes().size())
    throw std::invalid_argument("constraint_residual: value shapes do not match the program");
  double worst = 0.0;
  for (std::size_t i = 0; i < cp.num_scalars(); ++i)
    if (cp.is_nonnegative(i)) worst = std::max(worst, -scalars(i));
  for (const Eigen::MatrixXd& x : blocks) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x, Eigen::EigenvaluesOnly);
    worst = std::max(worst, -es.eigenvalues().minCoeff());
    worst = std::max(worst, (x - x.transpose()).cwiseAbs().maxCoeff());
  }
  for (const Constraint& c : cp.constraints()) {
    const double lhs = cp.evaluate(c.expr, scalars, blocks);
    switch (c.relation) {
      case Relation::Equal: worst = std::max(worst, std::abs(lhs - c.rhs)); break;
      case Relation::LessEqual: worst = std::max(worst, lhs - c.rhs); break;
      case Relation::GreaterEqual: worst = std::max(worst, c.rhs - lhs); break;
    }
  }
  return worst;
}

namespace detail {

Lowering lower(const ConeProgram& cp) {
  cp.validate();
  Lowering out;
  out.sign = cp.sense() == Sense::Maximize ? -1.0 : 1.0;

  int nf = 0, nl = 0;
  for (std::size_t i = 0; i < cp.num_scalars(); ++i)
    out.scalar_slots.push_back(cp.is_nonnegative(i) ? ScalarSlot{false, nl++} : ScalarSlot{true, nf++});
  const int n_scalar_lp = nl;
  for (const Constraint& c : cp.constraints())
    if (c.relation != Relation::Equal) ++nl;  // slack

  StandardForm& sf = out.form;
  sf.m = static_cast<int>(cp.constraints().size());
  sf.Af = Eigen::MatrixXd::Zero(sf.m, nf);
  sf.Al = Eigen::MatrixXd::Zero(sf.m, nl);
  sf.b.resize(sf.m);
  sf.cf = Eigen::VectorXd::Zero(nf);
  sf.cl = Eigen::VectorXd::Zero(nl);
  for (std::size_t s : cp.block_sizes()) {
    sf.block_sizes.push_back(static_cast<int>(s));
    sf.C.push_back(Eigen::MatrixXd::Zero(s, s));
  }
  sf.rows.resize(sf.block_sizes.size());

  auto add_block_terms = [](const std::vector<BlockEntry>& entries, auto&& sink) {
    for (const BlockEntry& e : entries) {
      const int r = static_cast<int>(e.row), c = static_cast<int>(e.col);
      if (r == c) {
        sink(e.block, r, c, e.value);
      } else {
        sink(e.block, r, c, 0.5 * e.value);
        sink(e.block, c, r, 0.5 * e.value);
      }
    }
  };

  for (const auto& [var, c] : cp.objective().scalars) {
    const ScalarSlot s = out.scalar_slots[var];
    (s.free ? sf.cf(s.index) : sf.cl(s.index)) += out.sign * c;
  }
  add_block_terms(cp.objective().entries, [&](std::size_t b, int r, int c, double v) { sf.C[b](r, c) += out.sign * v; });

  int slack = n_scalar_lp;
  for (int i = 0; i < sf.m; ++i) {
    const Constraint& con = cp.constraints()[i];
    for (const auto& [var, c] : con.expr.scalars) {
      const ScalarSlot s = out.scalar_slots[var];
      (s.free ? sf.Af(i, s.index) : sf.Al(i, s.index)) += c;
    }
    std::map<std::size_t, std::map<std::pair<int, int>, double>> per_block;
    add_block_terms(con.expr.entries, [&](std::size_t b, int r, int c, double v) { per_block[b][{r, c}] += v; });
    for (const auto& [b, trip] : per_block) {
      BlockRow row{i, {}};
      for (const auto& [rc, v] : trip)
        if (v != 0.0) row.triplets.push_back({rc.first, rc.second, v});
      if (!row.triplets.empty()) sf.rows[b].push_back(std::move(row));
    }
    if (con.relation == Relation::LessEqual) sf.Al(i, slack++) = 1.0;
    if (con.relation == Relation::GreaterEqual) sf.Al(i, slack++) = -1.0;
    sf.b(i) = con.rhs;
  }
  return out;
}


std::optional<DualLowering> lower_dual(const ConeProgram& cp) {
  cp.validate();
  if (cp.block_sizes().empty() || !cp.objective().entries.empty()) return std::nullopt;

  DualLowering out;
  out.sign = cp.sense() == Sense::Maximize ? -1.0 : 1.0;
  const int n = static_cast<int>(cp.num_scalars());

  std::vector<std::vector<int>> seen;
  for (std::size_t s : cp.block_sizes()) seen.emplace_back(s * s, 0);
  int n_eq = 0, n_ineq = 0;
  for (const Constraint& c : cp.constraints()) {
    DualRole role{};
    if (c.expr.entries.empty()) {
      if (c.relation == Relation::Equal) {
        role.kind = DualRole::Equality;
        role.index = n_eq++;
      } else {
        role.kind = DualRole::Inequality;
        role.index = n_ineq++;
        role.orientation = c.relation == Relation::LessEqual ? 1.0 : -1.0;
      }
    } else {
      std::map<std::tuple<std::size_t, std::size_t, std::size_t>, double> merged;
      for (const BlockEntry& e : c.expr.entries)
        merged[{e.block, std::min(e.row, e.col), std::max(e.row, e.col)}] += e.value;
      if (c.relation != Relation::Equal || merged.size() != 1 || merged.begin()->second == 0.0) return std::nullopt;
      const auto& [key, coef] = *merged.begin();
      const auto [b, i, j] = key;
      int& mark = seen[b][i * cp.block_sizes()[b] + j];
      if (mark++) return std::nullopt;
      role = DualRole{DualRole::Entry, b, static_cast<int>(i), static_cast<int>(j), coef, 0, 1.0};
    }
    out.roles.push_back(role);
  }
  for (std::size_t b = 0; b < seen.size(); ++b) {
    const std::size_t s = cp.block_sizes()[b];
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = i; j < s; ++j)
        if (!seen[b][i * s + j]) return std::nullopt;
  }
  int n_nonneg = 0;
  for (int k = 0; k < n; ++k) n_nonneg += cp.is_nonnegative(k) ? 1 : 0;

  StandardForm& sf = out.form;
  sf.m = n;
  sf.Af = Eigen::MatrixXd::Zero(n, n_eq);
  sf.Al = Eigen::MatrixXd::Zero(n, n_ineq + n_nonneg);
  sf.cf = Eigen::VectorXd::Zero(n_eq);
  sf.cl = Eigen::VectorXd::Zero(n_ineq + n_nonneg);
  sf.b = Eigen::VectorXd::Zero(n);
  for (const auto& [var, c] : cp.objective().scalars) sf.b(var) -= out.sign * c;
  for (std::size_t s : cp.block_sizes()) {
    sf.block_sizes.push_back(static_cast<int>(s));
    sf.C.push_back(Eigen::MatrixXd::Zero(s, s));
  }

  // rows[b][k]: triplets of -F_bk, assembled per scalar k.
  std::vector<std::map<int, std::vector<Triplet>>> rows(sf.block_sizes.size());
  for (std::size_t ci = 0; ci < cp.constraints().size(); ++ci) {
    const Constraint& c = cp.constraints()[ci];
    const DualRole& role = out.roles[ci];
    switch (role.kind) {
      case DualRole::Equality:
        for (const auto& [var, a] : c.expr.scalars) sf.Af(var, role.index) += a;
        sf.cf(role.index) = c.rhs;
        break;
      case DualRole::Inequality:
        for (const auto& [var, a] : c.expr.scalars) sf.Al(var, role.index) += role.orientation * a;
        sf.cl(role.index) = role.orientation * c.rhs;
        break;
      case DualRole::Entry: {
        Eigen::MatrixXd& c0 = sf.C[role.block];
        c0(role.row, role.col) = c0(role.col, role.row) = c.rhs / role.coef;
        for (const auto& [var, a] : c.expr.scalars) {
          auto& trip = rows[role.block][static_cast<int>(var)];
          trip.push_back({role.row, role.col, a / role.coef});
          if (role.row != role.col) trip.push_back({role.col, role.row, a / role.coef});
        }
        break;
      }
    }
  }
  int col = n_ineq;
  for (int k = 0; k < n; ++k)
    if (cp.is_nonnegative(k)) sf.Al(k, col++) = -1.0;
  sf.rows.resize(sf.block_sizes.size());
  for (std::size_t b = 0; b < rows.size(); ++b)
    for (auto& [k, trip] : rows[b]) {
      std::map<std::pair<int, int>, double> acc;
      for (const Triplet& t : trip) acc[{t.row, t.col}] += t.value;
      BlockRow row{k, {}};
      for (const auto& [rc, v] : acc)
        if (v != 0.0) row.triplets.push_back({rc.first, rc.second, v});
      if (!row.triplets.empty()) sf.rows[b].push_back(std::move(row));
    }
  return out;
}

std::vector<Eigen::MatrixXd> dual_blocks(const ConeProgram& cp, const DualLowering& low,
                                         const Eigen::VectorXd& scalars) {
  std::vector<Eigen::MatrixXd> blocks;
  for (std::size_t s : cp.block_sizes()) blocks.push_back(Eigen::MatrixXd::Zero(s, s));
  for (std::size_t ci = 0; ci < cp.constraints().size(); ++ci) {
    const DualRole& role = low.roles[ci];
    if (role.kind != DualRole::Entry) continue;
    const Constraint& c = cp.constraints()[ci];
    double v = c.rhs;
    for (const auto& [var, a] : c.expr.scalars) v -= a * scalars(var);
    Eigen::MatrixXd& x = blocks[role.block];
    x(role.row, role.col) = x(role.col, role.row) = v / role.coef;
  }
  return blocks;
}

}  // namespace detail

void write_sdpa(const ConeProgram& cp, std::ostream& os) {
  // Rendered in SDPA's LMI form over the multipliers y of the lowered equality
  // rows:  min -b'y  s.t.  C - A^*(y) PSD (LP part as a diagonal block), and the
  // free-variable equations Af'y = cf as pairs of opposite diagonal entries.
  const detail::Lowering low = detail::lower(cp);
  const detail::StandardForm& sf = low.form;
  const int nf = sf.nf(), nl = sf.nl();
  const int diag = nl + 2 * nf;

  os << "\"ccfrac cone program: " << sf.m << " rows, " << nf << " free, " << nl << " nonnegative, "
     << sf.block_sizes.size() << " PSD blocks\n";
  os << sf.m << "\n";
  const int nblocks = static_cast<int>(sf.block_sizes.size()) + (diag > 0 ? 1 : 0);
  os << nblocks << "\n";
  for (int s : sf.block_sizes) os << s << ' ';
  if (diag > 0) os << -diag;
  os << "\n";
  os << std::setprecision(17);
  for (int i = 0; i < sf.m; ++i) os << (i ? " " : "") << -sf.b(i);
  os << "\n";

  const int lp_block = static_cast<int>(sf.block_sizes.size()) + 1;
  // F0 = -C
  for (std::size_t b = 0; b < sf.C.size(); ++b)
    for (int j = 0; j < sf.block_sizes[b]; ++j)
      for (int i = 0; i <= j; ++i)
        if (sf.C[b](i, j) != 0.0) os << 0 << ' ' << b + 1 << ' ' << i + 1 << ' ' << j + 1 << ' ' << -sf.C[b](i, j) << "\n";
  for (int k = 0; k < nl; ++k)
    if (sf.cl(k) != 0.0) os << 0 << ' ' << lp_block << ' ' << k + 1 << ' ' << k + 1 << ' ' << -sf.cl(k) << "\n";
  for (int k = 0; k < nf; ++k) {
    if (sf.cf(k) == 0.0) continue;
    os << 0 << ' ' << lp_block << ' ' << nl + 2 * k + 1 << ' ' << nl + 2 * k + 1 << ' ' << sf.cf(k) << "\n";
    os << 0 << ' ' << lp_block << ' ' << nl + 2 * k + 2 << ' ' << nl + 2 * k + 2 << ' ' << -sf.cf(k) << "\n";
  }
  // F_i = -A_i on the cone blocks, +/- Af rows on the equation pairs.
  std::vector<std::vector<std::pair<std::size_t, const detail::BlockRow*>>> by_row(sf.m);
  for (std::size_t b = 0; b < sf.rows.size(); ++b)
    for (const detail::BlockRow& r : sf.rows[b]) by_row[r.constraint].emplace_back(b, &r);
  for (int i = 0; i < sf.m; ++i) {
    for (const auto& [b, row] : by_row[i])
      for (const detail::Triplet& t : row->triplets)
        if (t.row <= t.col) os << i + 1 << ' ' << b + 1 << ' ' << t.row + 1 << ' ' << t.col + 1 << ' ' << -t.value << "\n";
    for (int k = 0; k < nl; ++k)
      if (sf.Al(i, k) != 0.0) os << i + 1 << ' ' << lp_block << ' ' << k + 1 << ' ' << k + 1 << ' ' << -sf.Al(i, k) << "\n";
    for (int k = 0; k < nf; ++k) {
      if (sf.Af(i, k) == 0.0) continue;
      os << i + 1 << ' ' << lp_block << ' ' << nl + 2 * k + 1 << ' ' << nl + 2 * k + 1 << ' ' << sf.Af(i, k) << "\n";
      os << i + 1 << ' ' << lp_block << ' ' << nl + 2 * k + 2 << ' ' << nl + 2 * k + 2 << ' ' << -sf.Af(i, k) << "\n";
    }
  }
}

}  // namespace ccfrac::sdp
