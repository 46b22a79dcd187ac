#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "ccfrac/multi_index.hpp"

namespace ccfrac {

/// Ordered list of exponent vectors. The canonical basis of R[x]_d is built by
/// monomial_basis(); custom bases (e.g. for SOS-convexity tests) come from
/// from_entries().
class MonomialBasis {
 public:
  MonomialBasis() = default;

  static MonomialBasis from_entries(std::size_t n, std::vector<MultiIndex> entries);

  std::size_t num_vars() const { return n_; }
  int max_degree() const { return d_; }
  std::size_t size() const { return entries_.size(); }
  const MultiIndex& operator[](std::size_t k) const { return entries_[k]; }
  const std::vector<MultiIndex>& entries() const { return entries_; }

  std::optional<std::size_t> index_of(const MultiIndex& alpha) const;

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

 private:
  friend MonomialBasis monomial_basis(std::size_t n, int d);

  std::size_t n_ = 0;
  int d_ = 0;
  std::vector<MultiIndex> entries_;
  std::unordered_map<MultiIndex, std::size_t, MultiIndexHash> lookup_;
};

/// Graded-lex enumeration of N^n_d: (1, x1, ..., xn, x1^2, x1 x2, ..., xn^d).
/// Exactly C(n + d, n) entries.
MonomialBasis monomial_basis(std::size_t n, int d);

}  // namespace ccfrac
