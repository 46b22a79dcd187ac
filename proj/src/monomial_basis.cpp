#include "ccfrac/monomial_basis.hpp"

#include <algorithm>
#include <stdexcept>

namespace ccfrac {

namespace {

// All exponent vectors of total degree `deg`, larger leading exponents first.
void compositions(std::size_t n, int deg, std::vector<int>& prefix, std::vector<MultiIndex>& out) {
  const std::size_t pos = prefix.size();
  if (pos + 1 == n) {
    prefix.push_back(deg);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int e = deg; e >= 0; --e) {
    prefix.push_back(e);
    compositions(n, deg - e, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

MonomialBasis MonomialBasis::from_entries(std::size_t n, std::vector<MultiIndex> entries) {
  MonomialBasis b;
  b.n_ = n;
  b.entries_ = std::move(entries);
  for (std::size_t k = 0; k < b.entries_.size(); ++k) {
    const MultiIndex& e = b.entries_[k];
    if (e.size() != n) throw DimensionError("MonomialBasis: entry length differs from variable count");
    if (!b.lookup_.emplace(e, k).second) throw std::invalid_argument("MonomialBasis: duplicate entry");
    b.d_ = std::max(b.d_, e.degree());
  }
  return b;
}

std::optional<std::size_t> MonomialBasis::index_of(const MultiIndex& alpha) const {
  auto it = lookup_.find(alpha);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

MonomialBasis monomial_basis(std::size_t n, int d) {
  if (n < 1) throw std::invalid_argument("monomial_basis: need at least one variable");
  if (d < 0) throw std::invalid_argument("monomial_basis: negative degree");
  std::vector<MultiIndex> entries;
  entries.reserve(monomial_count(n, d));
  std::vector<int> prefix;
  for (int deg = 0; deg <= d; ++deg) compositions(n, deg, prefix, entries);
  MonomialBasis b = MonomialBasis::from_entries(n, std::move(entries));
  b.d_ = d;
  return b;
}

}  // namespace ccfrac
