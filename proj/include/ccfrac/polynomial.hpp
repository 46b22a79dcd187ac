#pragma once

#include <Eigen/Core>

#include <cmath>
#include <map>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "ccfrac/multi_index.hpp"

namespace ccfrac {

/// Coefficients smaller than this in magnitude are dropped after arithmetic.
inline constexpr double kCoefficientDropTol = 1e-14;

/// Sparse real polynomial in n variables: a finite map alpha -> p_alpha, kept in
/// graded-lex order and free of (near) zero coefficients.
template <typename Scalar>
class Polynomial {
 public:
  using Terms = std::map<MultiIndex, Scalar>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Polynomial() = default;
  explicit Polynomial(std::size_t n) : n_(n) {}
  Polynomial(std::size_t n, Terms terms) : n_(n), terms_(std::move(terms)) {
    for (const auto& [alpha, c] : terms_) check_index(alpha);
    normalize();
  }

  static Polynomial constant(std::size_t n, Scalar c) {
    Polynomial p(n);
    p.add_term(MultiIndex(n), c);
    return p;
  }
  static Polynomial variable(std::size_t n, std::size_t i) {
    Polynomial p(n);
    p.add_term(MultiIndex::unit(n, i), Scalar(1));
    return p;
  }
  static Polynomial monomial(const MultiIndex& alpha, Scalar c = Scalar(1)) {
    Polynomial p(alpha.size());
    p.add_term(alpha, c);
    return p;
  }

  std::size_t num_vars() const { return n_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t num_terms() const { return terms_.size(); }

  /// Max total degree over stored terms; 0 for the zero polynomial.
  int degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first.degree(); }

  Scalar coeff(const MultiIndex& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  /// Accumulates c into the coefficient of x^alpha (merging duplicates).
  void add_term(const MultiIndex& alpha, Scalar c) {
    check_index(alpha);
    auto [it, inserted] = terms_.emplace(alpha, c);
    if (!inserted) it->second += c;
    if (std::abs(it->second) < kCoefficientDropTol) terms_.erase(it);
  }

  Scalar operator()(std::span<const Scalar> x) const { return evaluate(x); }

  Scalar evaluate(std::span<const Scalar> x) const {
    if (x.size() != n_) throw DimensionError("Polynomial::evaluate: point has wrong dimension");
    if (terms_.empty()) return Scalar(0);
    const int deg = degree();
    // powers(i, k) = x_i^k
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> powers(n_, deg + 1);
    for (std::size_t i = 0; i < n_; ++i) {
      powers(i, 0) = Scalar(1);
      for (int k = 1; k <= deg; ++k) powers(i, k) = powers(i, k - 1) * x[i];
    }
    Scalar sum(0);
    for (const auto& [alpha, c] : terms_) {
      Scalar m = c;
      for (std::size_t i = 0; i < n_; ++i)
        if (alpha[i]) m *= powers(i, alpha[i]);
      sum += m;
    }
    return sum;
  }
  Scalar evaluate(const Vector& x) const { return evaluate(std::span<const Scalar>(x.data(), x.size())); }

  /// d p / d x_i with exact coefficient arithmetic.
  Polynomial derivative(std::size_t i) const {
    if (i >= n_) throw DimensionError("Polynomial::derivative: variable index out of range");
    Polynomial out(n_);
    for (const auto& [alpha, c] : terms_)
      if (alpha[i] > 0) out.add_term(alpha.with(i, alpha[i] - 1), c * Scalar(alpha[i]));
    return out;
  }

  /// Same polynomial viewed in a ring with more variables (new ones unused).
  Polynomial lifted(std::size_t n) const {
    Polynomial out(n);
    for (const auto& [alpha, c] : terms_) out.terms_.emplace(alpha.padded(n), c);
    return out;
  }

  Polynomial& operator+=(const Polynomial& q) {
    check_same(q);
    for (const auto& [alpha, c] : q.terms_) add_term(alpha, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& q) {
    check_same(q);
    for (const auto& [alpha, c] : q.terms_) add_term(alpha, -c);
    return *this;
  }
  Polynomial& operator*=(Scalar s) {
    for (auto& [alpha, c] : terms_) c *= s;
    normalize();
    return *this;
  }

  friend Polynomial operator+(Polynomial p, const Polynomial& q) { return p += q; }
  friend Polynomial operator-(Polynomial p, const Polynomial& q) { return p -= q; }
  friend Polynomial operator-(Polynomial p) { return p *= Scalar(-1); }
  friend Polynomial operator*(Polynomial p, Scalar s) { return p *= s; }
  friend Polynomial operator*(Scalar s, Polynomial p) { return p *= s; }

  friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    p.check_same(q);
    Polynomial out(p.n_);
    for (const auto& [a, ca] : p.terms_)
      for (const auto& [b, cb] : q.terms_) out.add_term(a + b, ca * cb);
    return out;
  }

  /// Coefficient-level equality (exact).
  friend bool operator==(const Polynomial& p, const Polynomial& q) {
    return p.n_ == q.n_ && p.terms_ == q.terms_;
  }

 private:
  void check_index(const MultiIndex& alpha) const {
    if (alpha.size() != n_) throw DimensionError("Polynomial: exponent vector length differs from variable count");
  }
  void check_same(const Polynomial& q) const {
    if (q.n_ != n_) throw DimensionError("Polynomial: operands have different variable counts");
  }
  void normalize() {
    for (auto it = terms_.begin(); it != terms_.end();)
      it = std::abs(it->second) < kCoefficientDropTol ? terms_.erase(it) : std::next(it);
  }

  std::size_t n_ = 0;
  Terms terms_;
};

using Polynomiald = Polynomial<double>;

template <typename Scalar>
using PolyVector = std::vector<Polynomial<Scalar>>;

template <typename Scalar>
using PolyMatrix = std::vector<std::vector<Polynomial<Scalar>>>;

template <typename Scalar>
PolyVector<Scalar> gradient(const Polynomial<Scalar>& p) {
  PolyVector<Scalar> g;
  g.reserve(p.num_vars());
  for (std::size_t i = 0; i < p.num_vars(); ++i) g.push_back(p.derivative(i));
  return g;
}

/// Matrix of second partials; (j, i) is copied from (i, j) so symmetry is exact.
template <typename Scalar>
PolyMatrix<Scalar> hessian(const Polynomial<Scalar>& p) {
  const std::size_t n = p.num_vars();
  PolyMatrix<Scalar> h(n, PolyVector<Scalar>(n, Polynomial<Scalar>(n)));
  for (std::size_t i = 0; i < n; ++i) {
    const Polynomial<Scalar> di = p.derivative(i);
    for (std::size_t j = i; j < n; ++j) {
      h[i][j] = di.derivative(j);
      if (j != i) h[j][i] = h[i][j];
    }
  }
  return h;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> evaluate(const PolyVector<Scalar>& v,
                                                  std::type_identity_t<std::span<const Scalar>> x) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out(i) = v[i].evaluate(x);
  return out;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> evaluate(const PolyMatrix<Scalar>& m,
                                                               std::type_identity_t<std::span<const Scalar>> x) {
  const std::size_t r = m.size();
  const std::size_t c = r ? m.front().size() : 0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out(i, j) = m[i][j].evaluate(x);
  return out;
}

/// Perspective t * p(s / t) for t > 0. Rejects t below 1e-12.
template <typename Scalar>
Scalar perspective_eval(const Polynomial<Scalar>& p, std::type_identity_t<std::span<const Scalar>> s,
                        std::type_identity_t<Scalar> t) {
  if (!(t > Scalar(1e-12))) throw std::domain_error("perspective_eval: t must be positive (>= 1e-12)");
  if (s.size() != p.num_vars()) throw DimensionError("perspective_eval: s has wrong dimension");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) x(i) = s[i] / t;
  return t * p.evaluate(x);
}

template <typename Scalar>
Scalar perspective_eval(const Polynomial<Scalar>& p, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& s,
                        std::type_identity_t<Scalar> t) {
  return perspective_eval(p, std::span<const Scalar>(s.data(), s.size()), t);
}

}  // namespace ccfrac
