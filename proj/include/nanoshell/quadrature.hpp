#pragma once

#include <functional>
#include <span>
#include <vector>

namespace nanoshell::quadrature {

/// Vector-valued integrand: writes f(x) into `out` (size = dimension).
using VectorIntegrand = std::function<void(double x, std::span<double> out)>;

struct Options {
  double rel_tol = 1e-7;
  double abs_tol = 1e-14;
  int max_panels = 4000;
};

struct Result {
  std::vector<double> value;       // per component
  std::vector<double> group_error; // estimated absolute error per group total
  int panels = 0;
  bool converged = false;
};

/// Globally adaptive 7/15-point Gauss-Kronrod integration of a
/// vector-valued function over [a, b] with forced panel boundaries at
/// `breakpoints`. Components are split into `groups` contiguous blocks of
/// equal size; refinement continues until every block total meets
/// max(rel_tol |total|, abs_tol) or the panel budget is spent.
Result integrate(const VectorIntegrand& f, std::size_t dimension, double a, double b,
                 std::vector<double> breakpoints, std::size_t groups, const Options& opts);

}  // namespace nanoshell::quadrature
