#pragma once

// Random fractional programs with SOS-convex data, a compact feasible set
// with nonempty interior and a denominator bounded away from zero on it.

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <random>
#include <vector>

#include "ccfrac/fractional_program.hpp"
#include "ccfrac/polynomial.hpp"

namespace ccfrac::test {

struct GeneratedInstance {
  FractionalProgram fp;
  /// A point with every h_i < 0.
  Eigen::VectorXd interior;
};

inline Polynomiald affine(std::size_t n, const Eigen::VectorXd& a, double b) {
  Polynomiald p = Polynomiald::constant(n, b);
  for (std::size_t i = 0; i < n; ++i) p += a(i) * Polynomiald::variable(n, i);
  return p;
}

/// f = sum_j (a_j'x + b_j)^2 + sum_i w_i (x_i - o_i)^(2k_i),
/// g = x'Sx + p'x - r with -g >= 1/2 on the ball holding K,
/// h = {|x - c|^2 - R^2} plus up to two half-spaces that keep c interior.
inline GeneratedInstance generate_instance(std::mt19937& rng, std::size_t n, int max_degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto vec = [&](std::size_t k) {
    Eigen::VectorXd v(k);
    for (std::size_t i = 0; i < k; ++i) v(i) = u(rng);
    return v;
  };
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

  const Eigen::VectorXd c = vec(n);
  const double R = uniform(0.5, 2.0);
  std::vector<Polynomiald> h;
  Polynomiald ball = Polynomiald::constant(n, -R * R);
  for (std::size_t i = 0; i < n; ++i) {
    const Polynomiald d = affine(n, Eigen::VectorXd::Unit(n, i), -c(i));
    ball += d * d;
  }
  h.push_back(ball);
  const int cuts = std::uniform_int_distribution<int>(0, 2)(rng);
  for (int k = 0; k < cuts; ++k) {
    Eigen::VectorXd a = vec(n);
    if (a.norm() < 1e-3) a(0) = 1.0;
    a.normalize();
    h.push_back(affine(n, a, -(a.dot(c) + R * uniform(0.2, 0.9))));
  }

  Polynomiald f(n);
  const int squares = std::uniform_int_distribution<int>(1, static_cast<int>(n) + 1)(rng);
  for (int j = 0; j < squares; ++j) {
    const Polynomiald q = affine(n, vec(n), u(rng));
    f += q * q;
  }
  const int max_k = std::max(1, max_degree / 2);
  for (std::size_t i = 0; i < n; ++i) {
    const int k = std::uniform_int_distribution<int>(1, max_k)(rng);
    const Polynomiald d = affine(n, Eigen::VectorXd::Unit(n, i), u(rng));
    Polynomiald power = Polynomiald::constant(n, 1.0);
    for (int e = 0; e < 2 * k; ++e) power = power * d;
    f += uniform(0.1, 1.0) * power;
  }

  const Eigen::MatrixXd L = Eigen::MatrixXd(vec(n * n).reshaped(n, n));
  const Eigen::MatrixXd S = L * L.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXd p = vec(n);
  const double rho = c.norm() + R;
  const double smax = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(S).eigenvalues().maxCoeff();
  Polynomiald g = affine(n, p, -(smax * rho * rho + p.norm() * rho + uniform(0.5, 2.0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g += S(i, j) * Polynomiald::variable(n, i) * Polynomiald::variable(n, j);

  return {FractionalProgram(n, f, g, h), c};
}

}  // namespace ccfrac::test
