#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "lamespec/error.hpp"

namespace lamespec {

/// Root returned by find_root_bracketed. `bracket` still contains a sign change.
struct BracketedRoot {
  double value = 0.0;
  std::pair<double, double> bracket{0.0, 0.0};
  double residual = 0.0;
  int iterations = 0;
};

namespace detail {

inline constexpr double kSeriesLimit = 8.0;

inline void check_bessel_args(int k, double x) {
  if (k < 0) throw DomainError("bessel order must be nonnegative, got " + std::to_string(k));
  if (!std::isfinite(x) || x < 0.0)
    throw DomainError("bessel argument must be finite and nonnegative");
}

// Ascending series; accurate while x is small enough that terms do not cancel.
inline double bessel_series(int k, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int i = 1; i <= k; ++i) term *= half / i;
  if (term == 0.0) return 0.0;
  const double q = half * half;
  double sum = term;
  for (int m = 0; m < 200; ++m) {
    term *= -q / ((m + 1.0) * (m + 1.0 + k));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Miller backward recurrence normalised with J_0 + 2 sum J_2m = 1.
inline double bessel_miller(int k, double x) {
  const double big = 1e10;
  const double nmax = std::max<double>(k, x);
  int m = static_cast<int>(nmax + 20.0 + std::sqrt(40.0 * nmax));
  m += m % 2;
  const double tox = 2.0 / x;
  double bjp = 0.0, bj = 1.0, ans = 0.0, sum = 0.0;
  bool even = false;
  for (int j = m; j > 0; --j) {
    const double bjm = j * tox * bj - bjp;
    bjp = bj;
    bj = bjm;
    if (std::abs(bj) > big) {
      bj /= big;
      bjp /= big;
      ans /= big;
      sum /= big;
    }
    if (even) sum += bj;
    even = !even;
    if (j == k) ans = bjp;
  }
  sum = 2.0 * sum - bj;
  if (k == 0) ans = bj;
  return ans / sum;
}

}  // namespace detail

/// Bessel function of the first kind J_k(x) for integer k >= 0 and x >= 0.
inline double bessel_j(int k, double x) {
  detail::check_bessel_args(k, x);
  if (x == 0.0) return k == 0 ? 1.0 : 0.0;
  if (x < detail::kSeriesLimit) return detail::bessel_series(k, x);
  return detail::bessel_miller(k, x);
}

/// J_k'(x), using J_0' = -J_1 and J_k' = (J_{k-1} - J_{k+1}) / 2.
inline double bessel_j_deriv(int k, double x) {
  detail::check_bessel_args(k, x);
  if (k == 0) return -bessel_j(1, x);
  return 0.5 * (bessel_j(k - 1, x) - bessel_j(k + 1, x));
}

/// J_k(x) / x for k >= 1, finite at x = 0.
inline double bessel_j_over_x(int k, double x) {
  if (k < 1) throw DomainError("bessel_j_over_x needs k >= 1");
  detail::check_bessel_args(k, x);
  return (bessel_j(k - 1, x) + bessel_j(k + 1, x)) / (2.0 * k);
}

/// Brent's method on [lo, hi]. Stops once the bracket is narrower than `tol`
/// (plus a few ulps) or f vanishes exactly.
template <class F>
BracketedRoot find_root_bracketed(F&& f, double lo, double hi, double tol = 1e-12,
                                  int max_iter = 300) {
  if (!(lo < hi)) throw InvalidBracket("bracket needs lo < hi");
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fb)) throw NumericalFailure("non-finite value at bracket end");
  if (fa == 0.0) return {a, {a, a}, 0.0, 0};
  if (fb == 0.0) return {b, {b, b}, 0.0, 0};
  if ((fa > 0.0) == (fb > 0.0)) throw InvalidBracket("f has the same sign at both bracket ends");

  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 1; it <= max_iter; ++it) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) {
      const double lo_out = std::min(b, c), hi_out = std::max(b, c);
      return {b, {lo_out, hi_out}, std::abs(fb), it};
    }
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
      const double min2 = std::abs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
    if (!std::isfinite(fb)) throw NumericalFailure("non-finite value inside bracket");
  }
  throw NumericalFailure("find_root_bracketed: no convergence within iteration budget");
}

namespace detail {

inline constexpr int kZeroOrders = 21;
inline constexpr int kZeroCount = 20;

struct ZeroTable {
  std::array<std::array<double, kZeroCount>, kZeroOrders> j{};
  std::array<std::array<double, kZeroCount>, kZeroOrders> jp{};
};

template <class F>
std::array<double, kZeroCount> scan_zeros(F&& f, double start) {
  std::array<double, kZeroCount> out{};
  int found = 0;
  const double step = 0.25;
  double x0 = start, f0 = f(x0);
  while (found < kZeroCount) {
    const double x1 = x0 + step;
    if (x1 > 120.0) throw NumericalFailure("bessel zero table: scan range exhausted");
    const double f1 = f(x1);
    if (f0 == 0.0) {
      out[found++] = x0;
    } else if ((f0 > 0.0) != (f1 > 0.0) && f1 != 0.0) {
      out[found++] = find_root_bracketed(f, x0, x1, 1e-15).value;
    }
    x0 = x1;
    f0 = f1;
  }
  return out;
}

inline const ZeroTable& zero_table() {
  static const ZeroTable table = [] {
    ZeroTable t;
    for (int k = 0; k < kZeroOrders; ++k) {
      const double start = std::max(1.0, static_cast<double>(k));
      t.j[k] = scan_zeros([k](double x) { return bessel_j(k, x); }, start);
      // J_0' = -J_1 has its first positive zero at j_{1,1}; the x = 0 root is excluded.
      t.jp[k] = scan_zeros([k](double x) { return bessel_j_deriv(k, x); }, start);
    }
    return t;
  }();
  return table;
}

inline void check_zero_index(int k, int n) {
  if (k < 0 || k >= kZeroOrders) throw DomainError("zero table covers orders 0..20");
  if (n < 1 || n > kZeroCount) throw DomainError("zero table covers indices 1..20");
}

}  // namespace detail

/// n-th positive zero j_{k,n} of J_k, 0 <= k <= 20, 1 <= n <= 20.
inline double bessel_zero(int k, int n) {
  detail::check_zero_index(k, n);
  return detail::zero_table().j[k][n - 1];
}

/// n-th positive zero j'_{k,n} of J_k', 0 <= k <= 20, 1 <= n <= 20.
inline double bessel_deriv_zero(int k, int n) {
  detail::check_zero_index(k, n);
  return detail::zero_table().jp[k][n - 1];
}

/// psi_k(x) = x J_k'(x) / J_k(x) on 0 < x < j_{k,1}, evaluated as k - x J_{k+1} / J_k.
inline double psi(int k, double x) {
  if (k < 1) throw DomainError("psi needs k >= 1");
  if (!(x > 0.0)) throw DomainError("psi needs x > 0");
  const double limit = k <= 20 ? bessel_zero(k, 1) : static_cast<double>(k);
  if (k <= 20 && x >= limit) throw DomainError("psi needs x below the first zero of J_k");
  const double jk = bessel_j(k, x);
  if (jk == 0.0) return k - x * x / (2.0 * (k + 1));
  return k - x * bessel_j(k + 1, x) / jk;
}

/// First zero of J_1 and of J_1', the constants that recur throughout.
inline double j11() { return bessel_zero(1, 1); }
inline double jp11() { return bessel_deriv_zero(1, 1); }

}  // namespace lamespec
