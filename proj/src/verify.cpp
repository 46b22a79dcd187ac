#include "ccfrac/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace ccfrac {

double dinkelbach_residual(const FractionalProgram& fp, const Eigen::VectorXd& x, double r) {
  return fp.f().evaluate(x) + r * fp.g().evaluate(x);
}

namespace {

struct Perspective {
  double value;           // t p(x)
  Eigen::VectorXd grad;   // gradient in (s, t)
};

// t p(s/t) and its gradient: grad_s = grad p(x), d/dt = p(x) - x' grad p(x).
Perspective perspective(const Polynomiald& p, const Eigen::VectorXd& x, double t) {
  const std::size_t n = p.num_vars();
  const double px = p.evaluate(x);
  const Eigen::VectorXd gp = evaluate(gradient(p), std::span<const double>(x.data(), n));
  Perspective out{t * px, Eigen::VectorXd(n + 1)};
  out.grad.head(n) = gp;
  out.grad(n) = px - x.dot(gp);
  return out;
}

// t^(k-1) * (phi + shift) for phi = t p(s/t); returns value and gradient.
std::pair<double, Eigen::VectorXd> cleared(const Perspective& phi, double shift, int k, double t) {
  const double tk1 = std::pow(t, k - 1);
  std::pair<double, Eigen::VectorXd> out{tk1 * (phi.value + shift), tk1 * phi.grad};
  if (k > 1) out.second(out.second.size() - 1) += (k - 1) * std::pow(t, k - 2) * (phi.value + shift);
  return out;
}

}  // namespace

std::vector<std::pair<double, Eigen::VectorXd>> pcct_constraints(const FractionalProgram& fp, const CctPoint& p) {
  if (!(p.t > 0.0)) throw std::domain_error("pcct_constraints: t must be positive");
  if (static_cast<std::size_t>(p.s.size()) != fp.num_vars()) throw DimensionError("pcct_constraints: s has wrong dimension");
  const Eigen::VectorXd x = p.x();
  std::vector<std::pair<double, Eigen::VectorXd>> out;
  for (const Polynomiald& h : fp.h()) out.push_back(cleared(perspective(h, x, p.t), 0.0, std::max(1, h.degree()), p.t));
  out.push_back(cleared(perspective(fp.g(), x, p.t), 1.0, std::max(1, fp.g().degree()), p.t));
  return out;
}

KktResidual kkt_residual_pcct(const FractionalProgram& fp, const CctPoint& p, const Eigen::VectorXd& multipliers) {
  if (!(p.t > 0.0)) throw std::domain_error("kkt_residual_pcct: t must be positive");
  const auto cons = pcct_constraints(fp, p);
  if (static_cast<std::size_t>(multipliers.size()) != cons.size())
    throw DimensionError("kkt_residual_pcct: need m + 1 multipliers");
  Eigen::VectorXd r = perspective(fp.f(), p.x(), p.t).grad;
  KktResidual out;
  for (std::size_t i = 0; i < cons.size(); ++i) {
    r += multipliers(i) * cons[i].second;
    out.complementarity = std::max(out.complementarity, std::abs(multipliers(i) * cons[i].first));
  }
  out.stationarity = r.cwiseAbs().maxCoeff();
  return out;
}

GridResult grid_oracle(const FractionalProgram& fp, const std::vector<std::pair<double, double>>& box, int steps) {
  const std::size_t n = fp.num_vars();
  if (n > 3) throw std::invalid_argument("grid_oracle: at most 3 variables");
  if (steps < 2) throw std::invalid_argument("grid_oracle: need at least 2 steps per dimension");
  if (box.size() != n) throw DimensionError("grid_oracle: need one interval per variable");
  for (const auto& [lo, hi] : box)
    if (!(lo <= hi)) throw std::invalid_argument("grid_oracle: empty interval");

  GridResult out;
  out.value = std::numeric_limits<double>::infinity();
  std::vector<int> idx(n, 0);
  Eigen::VectorXd x(n);
  for (;;) {
    for (std::size_t i = 0; i < n; ++i)
      x(i) = box[i].first + (box[i].second - box[i].first) * idx[i] / static_cast<double>(steps - 1);
    const double gx = fp.g().evaluate(x);
    bool feasible = gx < 0.0;
    for (std::size_t i = 0; feasible && i < fp.num_constraints(); ++i) feasible = fp.h()[i].evaluate(x) <= 0.0;
    if (feasible) {
      ++out.feasible_count;
      const double v = fp.f().evaluate(x) / -gx;
      if (v < out.value) {
        out.value = v;
        out.argmin = x;
      }
    }
    std::size_t k = 0;
    while (k < n && ++idx[k] == steps) idx[k++] = 0;
    if (k == n) break;
  }
  if (out.feasible_count == 0) throw EmptyFeasibleGrid("grid_oracle: no grid point satisfies the constraints");
  return out;
}

std::vector<std::pair<double, double>> default_oracle_box(std::size_t n, const std::optional<Eigen::VectorXd>& x) {
  const double b = x ? 1.0 + 2.0 * std::max(1.0, x->cwiseAbs().maxCoeff()) : 10.0;
  return std::vector<std::pair<double, double>>(n, {-b, b});
}

int default_oracle_steps(std::size_t n) { return n <= 2 ? 401 : 101; }

double gram_residual(const Polynomiald& p, const GramCertificate& cert) {
  const std::size_t s = cert.basis.size();
  if (static_cast<std::size_t>(cert.Q.rows()) != s || static_cast<std::size_t>(cert.Q.cols()) != s)
    throw DimensionError("gram_residual: Gram matrix size differs from basis size");
  if (s > 0 && cert.basis.num_vars() != p.num_vars()) throw DimensionError("gram_residual: variable count mismatch");
  std::map<MultiIndex, double> expanded;
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) expanded[cert.basis[i] + cert.basis[j]] += cert.Q(i, j);
  for (const auto& [alpha, c] : p.terms()) expanded.try_emplace(alpha, 0.0);
  double r = 0.0;
  for (const auto& [alpha, c] : expanded) r = std::max(r, std::abs(c - p.coeff(alpha)));
  return r;
}

bool weak_duality_check(double value_D, double value_Q, double tol) { return value_D <= value_Q + tol; }

}  // namespace ccfrac
