#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace ccfrac {

/// Thrown when operands disagree on the number of variables or matrix sizes.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exponent vector alpha in N^n. Ordered graded-lexicographically: lower total
/// degree first, and within one degree the exponent of x_1 decides first, larger
/// first, so the degree-2 block in two variables reads x1^2, x1*x2, x2^2.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t n) : exps_(n, 0) {}
  MultiIndex(std::initializer_list<int> exps);
  explicit MultiIndex(std::vector<int> exps);

  static MultiIndex unit(std::size_t n, std::size_t i);

  std::size_t size() const { return exps_.size(); }
  int degree() const { return degree_; }
  int operator[](std::size_t i) const { return exps_[i]; }
  const std::vector<int>& exponents() const { return exps_; }

  /// Returns a copy with exponent i replaced.
  MultiIndex with(std::size_t i, int value) const;
  /// Appends zero exponents up to n variables (embedding into a larger ring).
  MultiIndex padded(std::size_t n) const;

  MultiIndex& operator+=(const MultiIndex& other);
  friend MultiIndex operator+(MultiIndex a, const MultiIndex& b) { return a += b; }

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.exps_ == b.exps_; }
  friend bool operator!=(const MultiIndex& a, const MultiIndex& b) { return !(a == b); }
  friend bool operator<(const MultiIndex& a, const MultiIndex& b);

  friend std::ostream& operator<<(std::ostream& os, const MultiIndex& a);

 private:
  std::vector<int> exps_;
  int degree_ = 0;
};

struct MultiIndexHash {
  std::size_t operator()(const MultiIndex& a) const noexcept;
};

/// C(n + d, n): the number of monomials of degree at most d in n variables.
std::size_t monomial_count(std::size_t n, int d);

}  // namespace ccfrac
