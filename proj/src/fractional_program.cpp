#include "ccfrac/fractional_program.hpp"

#include <algorithm>

namespace ccfrac {

FractionalProgram::FractionalProgram(std::size_t n, Polynomiald f, Polynomiald g, std::vector<Polynomiald> h)
    : n_(n), f_(std::move(f)), g_(std::move(g)), h_(std::move(h)) {
  if (n_ < 1) throw std::invalid_argument("FractionalProgram: need at least one variable");
  if (f_.num_vars() != n_ || g_.num_vars() != n_) throw DimensionError("FractionalProgram: f and g must use n variables");
  for (const Polynomiald& hi : h_)
    if (hi.num_vars() != n_) throw DimensionError("FractionalProgram: every constraint must use n variables");
  if (h_.empty()) {
    h_.push_back(Polynomiald::constant(n_, -1.0));
    sentinel_ = true;
  }
  max_degree_ = std::max(f_.degree(), g_.degree());
  for (const Polynomiald& hi : h_) max_degree_ = std::max(max_degree_, hi.degree());
  d_ = std::max(1, (max_degree_ + 1) / 2);
}

}  // namespace ccfrac
