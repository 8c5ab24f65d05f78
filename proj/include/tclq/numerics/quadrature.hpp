#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Core>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tclq/error.hpp"

// Globally adaptive 7/15-point Gauss–Kronrod quadrature for integrands valued
// in any vector space (double, complex, fixed-size Eigen matrices). Boost's own
// driver needs `abs()` on the result type, which rules out matrix integrands;
// the node tables are still taken from Boost.

namespace tclq::quad {

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 0.0;
  int max_intervals = 4000;
  bool throw_on_failure = true;
};

template <class T>
struct Result {
  T value;
  double error = 0.0;
  int intervals = 0;
  bool converged = false;
};

namespace detail {

inline double norm(double v) { return std::abs(v); }
inline double norm(const std::complex<double>& v) { return std::abs(v); }
template <class Derived>
double norm(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

template <class T>
struct Interval {
  double a, b;
  T value;
  double error;
  bool operator<(const Interval& o) const { return error < o.error; }
};

template <class T, class F>
Interval<T> kronrod15(F& f, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  using G = boost::math::quadrature::gauss<double, 7>;
  static const auto& xk = GK::abscissa();
  static const auto& wk = GK::weights();
  static const auto& wg = G::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const T fc = f(c);
  T k = wk[0] * fc;
  T g = wg[0] * fc;
  for (std::size_t j = 1; j < xk.size(); ++j) {
    const double x = h * xk[j];
    const T s = f(c - x) + f(c + x);
    k += wk[j] * s;
    if (j % 2 == 0) g += wg[j / 2] * s;
  }
  k *= h;
  g *= h;
  const double err = norm(T(k - g));
  return {a, b, k, err};
}

}  // namespace detail

/// ∫_a^b f(x) dx. `f` must return a plain value (not an Eigen expression).
/// On failure to meet max(abs_tol, rel_tol·|I|) within `max_intervals`,
/// throws ConvergenceError carrying the achieved error estimate, unless
/// `throw_on_failure` is false.
template <class F>
auto integrate(F&& f, double a, double b, const Options& opt = {}) {
  using T = std::decay_t<decltype(f(a))>;
  if (!(std::isfinite(a) && std::isfinite(b))) throw InvalidArgument("quad::integrate: non-finite limits");
  auto first = detail::kronrod15<T>(f, a, b);
  Result<T> res{first.value};
  if (a == b) {
    res.converged = true;
    return res;
  }
  std::vector<detail::Interval<T>> heap;
  heap.push_back(std::move(first));
  double total_err = heap.front().error;
  T total = heap.front().value;
  int count = 1;
  auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * detail::norm(total)); };
  auto resum_error = [&] {
    double e = 0.0;
    for (const auto& iv : heap) e += iv.error;
    return e;
  };
  while (count < opt.max_intervals) {
    if (total_err <= target()) {
      // The running sum drifts under cancellation; confirm before stopping.
      total_err = resum_error();
      if (total_err <= target()) break;
    }
    std::pop_heap(heap.begin(), heap.end());
    const auto worst = heap.back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {  // interval exhausted at double precision
      std::push_heap(heap.begin(), heap.end());
      break;
    }
    heap.pop_back();
    auto left = detail::kronrod15<T>(f, worst.a, mid);
    auto right = detail::kronrod15<T>(f, mid, worst.b);
    total_err += left.error + right.error - worst.error;
    total += left.value + right.value - worst.value;
    heap.push_back(std::move(left));
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(std::move(right));
    std::push_heap(heap.begin(), heap.end());
    ++count;
  }
  // Re-sum in interval order so the result does not depend on refinement history.
  auto& parts = heap;
  std::sort(parts.begin(), parts.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
  res.value = parts.front().value;
  res.error = parts.front().error;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    res.value += parts[i].value;
    res.error += parts[i].error;
  }
  res.intervals = count;
  res.converged = res.error <= std::max(target(), opt.rel_tol * detail::norm(res.value));
  if (!res.converged && opt.throw_on_failure)
    throw ConvergenceError("adaptive quadrature did not converge on [" + std::to_string(a) + ", " +
                               std::to_string(b) + "], achieved error " + std::to_string(res.error),
                           res.error);
  return res;
}

}  // namespace tclq::quad
