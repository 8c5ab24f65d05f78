#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <string>
#include <type_traits>
#include <vector>

#include "tclq/error.hpp"

namespace tclq {

/// Dense univariate polynomial with coefficients in ascending order,
/// p(s) = c[0] + c[1] s + ... + c[n] s^n.
template <class T>
class Polynomial {
 public:
  using value_type = T;

  Polynomial() : c_{T(0)} {}
  Polynomial(std::initializer_list<T> c) : c_(c) { normalize(); }
  explicit Polynomial(std::vector<T> c) : c_(std::move(c)) { normalize(); }

  static Polynomial constant(T v) { return Polynomial(std::vector<T>{v}); }
  static Polynomial monomial(int degree, T coeff = T(1)) {
    std::vector<T> c(static_cast<std::size_t>(degree) + 1, T(0));
    c.back() = coeff;
    return Polynomial(std::move(c));
  }
  /// (s − root)
  static Polynomial linear_factor(T root) { return Polynomial({-root, T(1)}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.size() == 1 && c_[0] == T(0); }
  const std::vector<T>& coefficients() const { return c_; }
  T operator[](int i) const { return i <= degree() ? c_[static_cast<std::size_t>(i)] : T(0); }
  T leading() const { return c_.back(); }

  /// Horner evaluation at a real or complex point.
  template <class U>
  auto operator()(U s) const {
    using R = decltype(T() * U());
    R acc = R(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * s + R(*it);
    return acc;
  }

  Polynomial derivative() const {
    if (degree() == 0) return Polynomial();
    std::vector<T> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<double>(i);
    return Polynomial(std::move(d));
  }

  /// Coefficients of the Taylor expansion about `a`: p(a + h) = Σ t_k h^k.
  template <class U>
  auto taylor_at(U a) const {
    using R = decltype(T() * U());
    std::vector<R> t(c_.begin(), c_.end());
    const std::size_t n = t.size();
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = n - 1; j > k; --j) t[j - 1] += a * t[j];
    return t;
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    normalize();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) { return *this += o * T(-1); }
  Polynomial& operator*=(T k) {
    for (auto& v : c_) v *= k;
    normalize();
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, T k) { return a *= k; }
  friend Polynomial operator*(T k, Polynomial a) { return a *= k; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    std::vector<T> r(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(r));
  }

  /// Euclidean division; returns {quotient, remainder}.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const {
    if (d.is_zero()) throw InvalidArgument("polynomial division by zero");
    if (degree() < d.degree()) return {Polynomial(), *this};
    std::vector<T> r = c_;
    std::vector<T> q(c_.size() - d.c_.size() + 1, T(0));
    const T lead = d.leading();
    for (int k = static_cast<int>(q.size()) - 1; k >= 0; --k) {
      const T coef = r[static_cast<std::size_t>(k + d.degree())] / lead;
      q[static_cast<std::size_t>(k)] = coef;
      for (int j = 0; j <= d.degree(); ++j) r[static_cast<std::size_t>(k + j)] -= coef * d.c_[static_cast<std::size_t>(j)];
    }
    r.resize(static_cast<std::size_t>(std::max(d.degree(), 1)));
    return {Polynomial(std::move(q)), Polynomial(std::move(r))};
  }

  /// Drops leading coefficients with magnitude ≤ tol · max|c|.
  Polynomial trimmed(double tol) const {
    double scale = 0.0;
    for (const auto& v : c_) scale = std::max(scale, std::abs(v));
    std::vector<T> c = c_;
    while (c.size() > 1 && std::abs(c.back()) <= tol * scale) c.pop_back();
    return Polynomial(std::move(c));
  }

 private:
  void normalize() {
    if (c_.empty()) c_.push_back(T(0));
    while (c_.size() > 1 && c_.back() == T(0)) c_.pop_back();
  }

  std::vector<T> c_;
};

using RealPolynomial = Polynomial<double>;
using ComplexPolynomial = Polynomial<std::complex<double>>;

/// Π (s − r_k)
inline ComplexPolynomial from_roots(const std::vector<std::complex<double>>& roots,
                                    std::complex<double> lead = 1.0) {
  ComplexPolynomial p = ComplexPolynomial::constant(lead);
  for (const auto& r : roots) p = p * ComplexPolynomial::linear_factor(r);
  return p;
}

struct RootOptions {
  int max_iterations = 500;
  /// Stop when every Newton correction is below this, relative to |z|.
  double tolerance = 4.0 * std::numeric_limits<double>::epsilon();
  int polish_steps = 3;
};

/// All complex roots by simultaneous Aberth–Ehrlich iteration, followed by
/// a few Newton polishing steps on the undeflated polynomial. Exact zero
/// roots are split off first. For real coefficients, conjugate pairs are
/// symmetrized and near-real roots snapped to the real axis.
template <class T>
std::vector<std::complex<double>> roots(const Polynomial<T>& p, const RootOptions& opt = {}) {
  using C = std::complex<double>;
  if (p.is_zero()) throw InvalidArgument("roots of the zero polynomial are undefined");
  std::vector<C> out;
  const auto& raw = p.coefficients();
  std::size_t shift = 0;
  while (shift < raw.size() - 1 && raw[shift] == T(0)) ++shift;
  out.assign(shift, C(0.0));
  std::vector<C> c(raw.begin() + static_cast<std::ptrdiff_t>(shift), raw.end());
  const int n = static_cast<int>(c.size()) - 1;
  if (n <= 0) return out;
  const C lead = c.back();
  for (auto& v : c) v /= lead;

  auto eval = [&](C z, C& dp) {
    C v = 1.0;
    dp = 0.0;
    for (int k = n - 1; k >= 0; --k) {
      dp = dp * z + v;
      v = v * z + c[static_cast<std::size_t>(k)];
    }
    return v;
  };

  // Initial guesses on a circle of radius given by the Fujiwara bound,
  // scaled down to the geometric mean of the root moduli.
  double bound = 0.0;
  for (int k = 0; k < n; ++k)
    bound = std::max(bound, std::pow(std::abs(c[static_cast<std::size_t>(k)]), 1.0 / (n - k)));
  const double mean_mod = std::pow(std::abs(c[0]), 1.0 / n);
  const double radius = std::max(std::min(2.0 * bound, mean_mod), 1e-300);
  std::vector<C> z(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    z[static_cast<std::size_t>(k)] =
        std::polar(radius, 2.0 * std::numbers::pi * k / n + 0.4);

  // A root is frozen once p(z) is at the rounding level of the Horner sum
  // or its Newton-Aberth correction is negligible.
  auto rounding_level = [&](C zk) {
    const double a = std::abs(zk);
    double acc = 1.0;
    for (int k = n - 1; k >= 0; --k) acc = acc * a + std::abs(c[static_cast<std::size_t>(k)]);
    return 16.0 * std::numeric_limits<double>::epsilon() * acc;
  };
  std::vector<bool> done(static_cast<std::size_t>(n), false);
  int remaining = n;
  double worst = 0.0;
  for (int it = 0; it < opt.max_iterations && remaining > 0; ++it) {
    worst = 0.0;
    for (int k = 0; k < n; ++k) {
      if (done[static_cast<std::size_t>(k)]) continue;
      auto& zk = z[static_cast<std::size_t>(k)];
      C dp;
      const C v = eval(zk, dp);
      if (std::abs(v) <= rounding_level(zk)) {
        done[static_cast<std::size_t>(k)] = true;
        --remaining;
        continue;
      }
      const C w = v / dp;
      C sum = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != k) sum += 1.0 / (zk - z[static_cast<std::size_t>(j)]);
      const C step = w / (1.0 - w * sum);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
      zk -= step;
      const double rel = std::abs(step) / std::max(std::abs(zk), 1e-300);
      worst = std::max(worst, rel);
      if (rel <= opt.tolerance) {
        done[static_cast<std::size_t>(k)] = true;
        --remaining;
      }
    }
  }
  if (remaining > 0)
    throw ConvergenceError("Aberth-Ehrlich iteration did not converge, last relative step " +
                               std::to_string(worst),
                           worst);

  for (auto& zk : z) {
    for (int s = 0; s < opt.polish_steps; ++s) {
      C dp;
      const C v = eval(zk, dp);
      if (dp == C(0) || v == C(0)) break;
      const C next = zk - v / dp;
      C dn;
      if (std::abs(eval(next, dn)) < std::abs(v)) zk = next;
      else break;
    }
  }

  if constexpr (!std::is_same_v<T, C>) {
    // Real coefficients: roots come in conjugate pairs.
    std::vector<bool> used(z.size(), false);
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (used[i]) continue;
      const double scale = std::max(std::abs(z[i]), 1e-300);
      if (std::abs(z[i].imag()) <= 1e-12 * scale) {
        z[i] = C(z[i].real(), 0.0);
        used[i] = true;
        continue;
      }
      std::size_t best = i;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < z.size(); ++j) {
        if (j == i || used[j]) continue;
        const double d = std::abs(z[j] - std::conj(z[i]));
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      if (best != i && best_d <= 1e-6 * scale) {
        const C avg = 0.5 * (z[i] + std::conj(z[best]));
        z[i] = avg;
        z[best] = std::conj(avg);
        used[best] = true;
      }
      used[i] = true;
    }
  }
  out.insert(out.end(), z.begin(), z.end());
  return out;
}

}  // namespace tclq
