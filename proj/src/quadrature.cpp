#include "nanoshell/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

#include "nanoshell/errors.hpp"

namespace nanoshell::quadrature {

namespace {

// Kronrod 15-point abscissae (non-negative half) and weights; every second
// node also belongs to the embedded 7-point Gauss rule.
constexpr std::array<double, 8> kNodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGauss{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  std::vector<double> kronrod;
  std::vector<double> gauss;
  double error = 0.0;  // largest block error, used for ordering
};

Panel evaluate(const VectorIntegrand& f, std::size_t dim, double a, double b, std::size_t groups) {
  Panel p{a, b, std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0), 0.0};
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::vector<double> buf(dim);
  auto accumulate = [&](double x, double wk, double wg) {
    f(x, buf);
    for (std::size_t i = 0; i < dim; ++i) {
      p.kronrod[i] += wk * buf[i];
      p.gauss[i] += wg * buf[i];
    }
  };
  for (int k = 0; k < 7; ++k) {
    const double wg = (k % 2 == 1) ? kGauss[k / 2] : 0.0;
    accumulate(mid - half * kNodes[k], kKronrod[k], wg);
    accumulate(mid + half * kNodes[k], kKronrod[k], wg);
  }
  accumulate(mid, kKronrod[7], kGauss[3]);
  for (std::size_t i = 0; i < dim; ++i) {
    p.kronrod[i] *= half;
    p.gauss[i] *= half;
  }
  const std::size_t block = dim / groups;
  for (std::size_t g = 0; g < groups; ++g) {
    double diff = 0.0;
    for (std::size_t i = g * block; i < (g + 1) * block; ++i) diff += p.kronrod[i] - p.gauss[i];
    p.error = std::max(p.error, std::abs(diff));
  }
  return p;
}

}  // namespace

Result integrate(const VectorIntegrand& f, std::size_t dimension, double a, double b,
                 std::vector<double> breakpoints, std::size_t groups, const Options& opts) {
  if (groups == 0 || dimension % groups != 0) {
    throw DomainError("quadrature: dimension must split evenly into groups");
  }
  if (!(b > a)) throw DomainError("quadrature: empty interval");
  breakpoints.push_back(a);
  breakpoints.push_back(b);
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::remove_if(breakpoints.begin(), breakpoints.end(),
                                   [&](double x) { return x < a || x > b; }),
                    breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

  auto cmp = [](const Panel& x, const Panel& y) { return x.error < y.error; };
  std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> queue(cmp);

  const std::size_t block = dimension / groups;
  auto block_errors = [&](const Panel& p) {
    std::vector<double> err(groups, 0.0);
    for (std::size_t g = 0; g < groups; ++g) {
      double diff = 0.0;
      for (std::size_t i = g * block; i < (g + 1) * block; ++i) diff += p.kronrod[i] - p.gauss[i];
      err[g] = std::abs(diff);
    }
    return err;
  };

  Result result;
  result.value.assign(dimension, 0.0);
  result.group_error.assign(groups, 0.0);
  auto add = [&](const Panel& p, double sign) {
    for (std::size_t i = 0; i < dimension; ++i) result.value[i] += sign * p.kronrod[i];
    const auto err = block_errors(p);
    for (std::size_t g = 0; g < groups; ++g) result.group_error[g] += sign * err[g];
  };
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    Panel p = evaluate(f, dimension, breakpoints[i], breakpoints[i + 1], groups);
    add(p, 1.0);
    queue.push(std::move(p));
  }

  auto satisfied = [&] {
    for (std::size_t g = 0; g < groups; ++g) {
      double total = 0.0;
      for (std::size_t i = g * block; i < (g + 1) * block; ++i) total += result.value[i];
      const double err = std::max(result.group_error[g], 0.0);
      if (err > std::max(opts.rel_tol * std::abs(total), opts.abs_tol)) return false;
    }
    return true;
  };

  while (true) {
    result.panels = static_cast<int>(queue.size());
    if (satisfied()) {
      result.converged = true;
      return result;
    }
    if (result.panels >= opts.max_panels) return result;
    const Panel worst = queue.top();
    queue.pop();
    add(worst, -1.0);
    const double mid = 0.5 * (worst.a + worst.b);
    for (Panel child : {evaluate(f, dimension, worst.a, mid, groups),
                        evaluate(f, dimension, mid, worst.b, groups)}) {
      add(child, 1.0);
      queue.push(std::move(child));
    }
  }
}

}  // namespace nanoshell::quadrature
