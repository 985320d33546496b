#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>

#include "qwblow/errors.hpp"

namespace qwblow::numerics {

namespace detail {

template <class Func>
double simpson_recurse(const Func& f, double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth, int& evals) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  evals += 2;
  const double h = b - a;
  const double left = h / 12.0 * (fa + 4.0 * flm + fm);
  const double right = h / 12.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol || depth <= 0) {
    if (depth <= 0 && std::abs(delta) > 15.0 * tol) {
      throw NumericalError("adaptive Simpson: recursion depth exhausted");
    }
    return left + right + delta / 15.0;
  }
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, evals) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, evals);
}

}  // namespace detail

/// Adaptive Simpson quadrature with Richardson correction. Throws NumericalError when
/// the tolerance cannot be met within max_depth bisections.
template <class Func>
double adaptive_simpson(const Func& f, double a, double b, double abs_tol = 1e-12,
                        int max_depth = 48) {
  if (a == b) return 0.0;
  if (!(abs_tol > 0.0)) throw InputError("adaptive_simpson: tolerance must be positive");
  const double sign = b < a ? -1.0 : 1.0;
  if (b < a) std::swap(a, b);
  // Seed with a few panels so that compactly supported integrands are not missed.
  constexpr int kPanels = 8;
  double total = 0.0;
  int evals = 0;
  const double h = (b - a) / kPanels;
  for (int p = 0; p < kPanels; ++p) {
    const double lo = a + p * h;
    const double hi = p + 1 == kPanels ? b : lo + h;
    const double flo = f(lo);
    const double fhi = f(hi);
    const double fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
    total += detail::simpson_recurse(f, lo, hi, flo, fm, fhi, whole, abs_tol / kPanels,
                                     max_depth, evals);
  }
  return sign * total;
}

/// Composite Simpson with n (even, rounded up) panels.
template <class Func>
double composite_simpson(const Func& f, double a, double b, int n) {
  if (n < 2) n = 2;
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

/// 4-point Gauss-Legendre rule on [a, b].
template <class Func>
double gauss_legendre4(const Func& f, double a, double b) {
  static constexpr std::array<double, 2> kNodes = {0.3399810435848562648026658,
                                                   0.8611363115940525752239465};
  static constexpr std::array<double, 2> kWeights = {0.6521451548625461426269361,
                                                     0.3478548451374538573730639};
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    const double dx = half * kNodes[i];
    acc += kWeights[i] * (f(mid - dx) + f(mid + dx));
  }
  return acc * half;
}

/// Golden-section minimisation of a unimodal function on [a, b] down to bracket width tol.
template <class Func>
std::pair<double, double> golden_section_min(const Func& f, double a, double b, double tol) {
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 200 && (b - a) > tol; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? std::pair{c, fc} : std::pair{d, fd};
}

/// Bisection for a sign change of f on [lo, hi]; f(lo) and f(hi) must differ in sign.
template <class Func>
double bisect_root(const Func& f, double lo, double hi, double x_tol = 0.0) {
  double flo = f(lo);
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi || (hi - lo) <= x_tol) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Least-squares slope of y against x.
inline double fit_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw InputError("fit_slope: need at least two paired samples");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace qwblow::numerics
