#pragma once

#include <Eigen/Core>

#include <vector>

#include "ccfrac/polynomial.hpp"

namespace ccfrac {

/// min f(x) / (-g(x))  s.t.  h_i(x) <= 0.
///
/// An empty constraint list is replaced by the single always-satisfied
/// constraint -1 <= 0 so that m >= 1 holds for every instance.
class FractionalProgram {
 public:
  FractionalProgram(std::size_t n, Polynomiald f, Polynomiald g, std::vector<Polynomiald> h);

  std::size_t num_vars() const { return n_; }
  const Polynomiald& f() const { return f_; }
  const Polynomiald& g() const { return g_; }
  const std::vector<Polynomiald>& h() const { return h_; }
  std::size_t num_constraints() const { return h_.size(); }
  /// True when the constraint list was empty on input.
  bool has_sentinel_constraint() const { return sentinel_; }

  /// Relaxation order: ceil(max data degree / 2), at least 1.
  int order() const { return d_; }
  int max_degree() const { return max_degree_; }

 private:
  std::size_t n_;
  Polynomiald f_;
  Polynomiald g_;
  std::vector<Polynomiald> h_;
  bool sentinel_ = false;
  int d_ = 1;
  int max_degree_ = 0;
};

/// Charnes-Cooper point (s, t) = (x, 1) / (-g(x)).
struct CctPoint {
  Eigen::VectorXd s;
  double t = 0.0;

  /// s / t.
  Eigen::VectorXd x() const { return s / t; }
};

}  // namespace ccfrac
