#include "ccfrac/multi_index.hpp"

#include <numeric>

namespace ccfrac {

MultiIndex::MultiIndex(std::initializer_list<int> exps) : MultiIndex(std::vector<int>(exps)) {}

MultiIndex::MultiIndex(std::vector<int> exps) : exps_(std::move(exps)) {
  for (int e : exps_) {
    if (e < 0) throw std::invalid_argument("MultiIndex: negative exponent");
    degree_ += e;
  }
}

MultiIndex MultiIndex::unit(std::size_t n, std::size_t i) {
  if (i >= n) throw DimensionError("MultiIndex::unit: variable index out of range");
  MultiIndex a(n);
  a.exps_[i] = 1;
  a.degree_ = 1;
  return a;
}

MultiIndex MultiIndex::with(std::size_t i, int value) const {
  if (value < 0) throw std::invalid_argument("MultiIndex: negative exponent");
  MultiIndex a = *this;
  a.degree_ += value - a.exps_.at(i);
  a.exps_[i] = value;
  return a;
}

MultiIndex MultiIndex::padded(std::size_t n) const {
  if (n < exps_.size()) throw DimensionError("MultiIndex::padded: cannot shrink");
  MultiIndex a = *this;
  a.exps_.resize(n, 0);
  return a;
}

MultiIndex& MultiIndex::operator+=(const MultiIndex& other) {
  if (other.size() != size()) throw DimensionError("MultiIndex: adding indices of different length");
  for (std::size_t i = 0; i < exps_.size(); ++i) exps_[i] += other.exps_[i];
  degree_ += other.degree_;
  return *this;
}

bool operator<(const MultiIndex& a, const MultiIndex& b) {
  if (a.degree_ != b.degree_) return a.degree_ < b.degree_;
  // Same degree: larger leading exponent comes first.
  return a.exps_ > b.exps_;
}

std::ostream& operator<<(std::ostream& os, const MultiIndex& a) {
  os << '(';
  for (std::size_t i = 0; i < a.exps_.size(); ++i) os << (i ? "," : "") << a.exps_[i];
  return os << ')';
}

std::size_t MultiIndexHash::operator()(const MultiIndex& a) const noexcept {
  std::size_t h = a.size();
  for (int e : a.exponents()) h = h * 1000003u ^ static_cast<std::size_t>(e);
  return h;
}

std::size_t monomial_count(std::size_t n, int d) {
  if (d < 0) return 0;
  // C(n + d, d) computed incrementally; exact for every size used here.
  std::size_t c = 1;
  for (std::size_t k = 1; k <= static_cast<std::size_t>(d); ++k) c = c * (n + k) / k;
  return c;
}

}  // namespace ccfrac
