#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the eigensolver, the distance code, or the fitting code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace oracle {

using ld = long double;

// ---------------------------------------------------------------------------
// Characteristic polynomials.

/// Faddeev-LeVerrier: coefficients c[0..n] of det(x I - A), c[n] = 1.
inline std::vector<ld> charpoly(const std::vector<ld>& a, std::size_t n) {
  std::vector<ld> c(n + 1, 0.0L);
  c[n] = 1.0L;
  std::vector<ld> m(n * n, 0.0L), am(n * n);
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t i = 0; i < n; ++i) m[i * n + i] += c[n - k + 1];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        ld s = 0.0L;
        for (std::size_t t = 0; t < n; ++t) s += a[i * n + t] * m[t * n + j];
        am[i * n + j] = s;
      }
    ld tr = 0.0L;
    for (std::size_t i = 0; i < n; ++i) tr += am[i * n + i];
    c[n - k] = -tr / static_cast<ld>(k);
    m = am;
  }
  return c;
}

/// Exact integer characteristic polynomial (Faddeev-LeVerrier divisions are exact).
inline std::vector<std::int64_t> charpoly_int(const std::vector<std::int64_t>& a, std::size_t n) {
  std::vector<std::int64_t> c(n + 1, 0);
  c[n] = 1;
  std::vector<std::int64_t> m(n * n, 0), am(n * n);
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t i = 0; i < n; ++i) m[i * n + i] += c[n - k + 1];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        std::int64_t s = 0;
        for (std::size_t t = 0; t < n; ++t) s += a[i * n + t] * m[t * n + j];
        am[i * n + j] = s;
      }
    std::int64_t tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += am[i * n + i];
    if (tr % static_cast<std::int64_t>(k) != 0) throw std::logic_error("inexact LeVerrier step");
    c[n - k] = -tr / static_cast<std::int64_t>(k);
    m = am;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Rational polynomials for square-free factorization.

struct Rational {
  std::int64_t num = 0, den = 1;
  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) { normalize(); }
  void normalize() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num == 0) den = 1;
  }
  friend Rational operator+(Rational a, Rational b) {
    return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  friend Rational operator-(Rational a, Rational b) {
    return Rational(a.num * b.den - b.num * a.den, a.den * b.den);
  }
  friend Rational operator*(Rational a, Rational b) { return Rational(a.num * b.num, a.den * b.den); }
  friend Rational operator/(Rational a, Rational b) {
    if (b.num == 0) throw std::domain_error("division by zero");
    return Rational(a.num * b.den, a.den * b.num);
  }
  bool is_zero() const { return num == 0; }
  ld value() const { return static_cast<ld>(num) / static_cast<ld>(den); }
};

using RPoly = std::vector<Rational>;  // low degree first

inline void trim(RPoly& p) {
  while (p.size() > 1 && p.back().is_zero()) p.pop_back();
}
inline bool is_zero(const RPoly& p) { return p.size() == 1 && p[0].is_zero(); }
inline std::size_t degree(const RPoly& p) { return p.size() - 1; }

inline RPoly monic(RPoly p) {
  trim(p);
  const Rational lead = p.back();
  for (Rational& c : p) c = c / lead;
  return p;
}

inline RPoly derivative(const RPoly& p) {
  if (p.size() <= 1) return {Rational(0)};
  RPoly d(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = p[k] * Rational(static_cast<std::int64_t>(k));
  trim(d);
  return d;
}

inline RPoly sub(RPoly a, const RPoly& b) {
  if (a.size() < b.size()) a.resize(b.size(), Rational(0));
  for (std::size_t k = 0; k < b.size(); ++k) a[k] = a[k] - b[k];
  trim(a);
  return a;
}

/// Quotient and remainder of a / b.
inline std::pair<RPoly, RPoly> divmod(RPoly a, const RPoly& b) {
  trim(a);
  if (is_zero(b)) throw std::domain_error("polynomial division by zero");
  if (a.size() < b.size()) return {{Rational(0)}, a};
  RPoly q(a.size() - b.size() + 1, Rational(0));
  while (!is_zero(a) && a.size() >= b.size()) {
    const std::size_t shift = a.size() - b.size();
    const Rational f = a.back() / b.back();
    q[shift] = f;
    for (std::size_t k = 0; k < b.size(); ++k) a[k + shift] = a[k + shift] - f * b[k];
    a.pop_back();
    if (a.empty()) a.push_back(Rational(0));
    trim(a);
  }
  trim(q);
  return {q, a};
}

inline RPoly gcd(RPoly a, RPoly b) {
  trim(a);
  trim(b);
  while (!is_zero(b)) {
    RPoly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

/// Yun's square-free factorization: factors[i] is the product of the
/// irreducible factors of multiplicity i+1.
inline std::vector<RPoly> squarefree_factors(const RPoly& f) {
  std::vector<RPoly> out;
  RPoly a = gcd(f, derivative(f));
  RPoly b = divmod(f, a).first;
  RPoly c = divmod(derivative(f), a).first;
  RPoly d = sub(c, derivative(b));
  while (degree(b) > 0) {
    RPoly g = is_zero(d) ? monic(b) : gcd(b, d);
    out.push_back(g);
    RPoly nb = divmod(b, g).first;
    c = divmod(d, g).first;
    b = std::move(nb);
    d = sub(c, derivative(b));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Real roots.

template <class Coef>
ld eval_poly(const std::vector<Coef>& c, ld x) {
  ld s = 0.0L;
  for (std::size_t k = c.size(); k-- > 0;) {
    if constexpr (std::is_same_v<Coef, Rational>) {
      s = s * x + c[k].value();
    } else {
      s = s * x + static_cast<ld>(c[k]);
    }
  }
  return s;
}

/// Simple real roots in [lo, hi] by a fine sign-change scan plus bisection.
template <class Coef>
std::vector<ld> real_roots_scan(const std::vector<Coef>& c, ld lo, ld hi, std::size_t grid) {
  std::vector<ld> roots;
  ld xprev = lo;
  ld fprev = eval_poly(c, xprev);
  if (fprev == 0.0L) roots.push_back(xprev);
  for (std::size_t k = 1; k <= grid; ++k) {
    const ld x = lo + (hi - lo) * static_cast<ld>(k) / static_cast<ld>(grid);
    const ld fx = eval_poly(c, x);
    if (fx == 0.0L) {
      roots.push_back(x);
    } else if (fprev != 0.0L && (fprev < 0.0L) != (fx < 0.0L)) {
      ld a = xprev, b = x, fa = fprev;
      for (int it = 0; it < 200; ++it) {
        const ld m = 0.5L * (a + b);
        const ld fm = eval_poly(c, m);
        if (fm == 0.0L) {
          a = b = m;
          break;
        }
        if ((fm < 0.0L) == (fa < 0.0L)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      roots.push_back(0.5L * (a + b));
    }
    xprev = x;
    fprev = fx;
  }
  return roots;
}

/// Eigenvalues of a symmetric integer matrix via its exact characteristic
/// polynomial, with multiplicities from the square-free factorization.
inline std::vector<ld> eigenvalues_integer(const std::vector<std::int64_t>& a, std::size_t n) {
  const std::vector<std::int64_t> ci = charpoly_int(a, n);
  RPoly f;
  for (std::int64_t x : ci) f.push_back(Rational(x));
  std::vector<ld> out;
  const std::vector<RPoly> factors = squarefree_factors(f);
  for (std::size_t m = 0; m < factors.size(); ++m) {
    if (degree(factors[m]) == 0) continue;
    ld bound = 1.0L;  // Cauchy bound of the monic factor
    for (const Rational& r : factors[m]) bound = std::max(bound, 1.0L + std::abs(r.value()));
    const std::vector<ld> roots = real_roots_scan(factors[m], -bound - 0.5L, bound + 0.5L, 20000);
    if (roots.size() != degree(factors[m])) throw std::logic_error("missed a root of a square-free factor");
    for (ld r : roots)
      for (std::size_t k = 0; k <= m; ++k) out.push_back(r);
  }
  std::sort(out.begin(), out.end());
  if (out.size() != n) throw std::logic_error("root count differs from n");
  return out;
}

/// Eigenvalues of a real symmetric matrix with simple spectrum.
inline std::vector<ld> eigenvalues_real(const std::vector<double>& a, std::size_t n) {
  std::vector<ld> al(a.begin(), a.end());
  const std::vector<ld> c = charpoly(al, n);
  ld bound = 1.0L;
  for (std::size_t i = 0; i < n; ++i) {
    ld row = 0.0L;
    for (std::size_t j = 0; j < n; ++j) row += std::abs(al[i * n + j]);
    bound = std::max(bound, row);
  }
  std::vector<ld> roots = real_roots_scan(c, -bound - 0.25L, bound + 0.25L, 400000);
  std::sort(roots.begin(), roots.end());
  return roots;
}

// ---------------------------------------------------------------------------
// Quadrature and other references.

/// Adaptive Simpson on [a, b] to absolute tolerance eps.
inline ld adaptive_simpson(const std::function<ld(ld)>& f, ld a, ld b, ld eps, int depth = 50) {
  struct Rec {
    const std::function<ld(ld)>& f;
    ld go(ld a, ld b, ld fa, ld fm, ld fb, ld whole, ld eps, int depth) const {
      const ld m = 0.5L * (a + b);
      const ld lm = 0.5L * (a + m), rm = 0.5L * (m + b);
      const ld flm = f(lm), frm = f(rm);
      const ld left = (m - a) / 6.0L * (fa + 4.0L * flm + fm);
      const ld right = (b - m) / 6.0L * (fm + 4.0L * frm + fb);
      const ld delta = left + right - whole;
      if (depth <= 0 || std::abs(delta) <= 15.0L * eps) return left + right + delta / 15.0L;
      return go(a, m, fa, flm, fm, left, eps / 2.0L, depth - 1) +
             go(m, b, fm, frm, fb, right, eps / 2.0L, depth - 1);
    }
  } rec{f};
  const ld fa = f(a), fb = f(b), fm = f(0.5L * (a + b));
  return rec.go(a, b, fa, fm, fb, (b - a) / 6.0L * (fa + 4.0L * fm + fb), eps, depth);
}

inline ld semicircle_density(ld x) {
  constexpr ld pi = 3.141592653589793238462643383279502884L;
  return std::abs(x) < 2.0L ? std::sqrt(4.0L - x * x) / (2.0L * pi) : 0.0L;
}

/// Semicircle CDF by quadrature of the density; x = 2 sin(theta) removes the
/// endpoint square-root singularity.
inline ld semicircle_cdf_quadrature(ld x) {
  if (x <= -2.0L) return 0.0L;
  if (x >= 2.0L) return 1.0L;
  constexpr ld pi = 3.141592653589793238462643383279502884L;
  const ld top = std::asin(x / 2.0L);
  return adaptive_simpson([](ld t) { return 2.0L * std::cos(t) * std::cos(t) / pi; }, -pi / 2.0L, top,
                          1e-15L);
}

/// Minimum over all matchings of the mean absolute difference.
inline double w1_bruteforce(std::vector<double> a, const std::vector<double>& b) {
  std::sort(a.begin(), a.end());
  double best = INFINITY;
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    best = std::min(best, s / static_cast<double>(a.size()));
  } while (std::next_permutation(a.begin(), a.end()));
  return best;
}

/// OLS by Cramer's rule on raw sums: returns {slope, intercept}.
inline std::pair<double, double> ols_cramer(const std::vector<double>& x, const std::vector<double>& y) {
  ld sx = 0, sy = 0, sxx = 0, sxy = 0;
  const ld k = static_cast<ld>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<ld>(x[i]) * x[i];
    sxy += static_cast<ld>(x[i]) * y[i];
  }
  const ld det = k * sxx - sx * sx;
  return {static_cast<double>((k * sxy - sx * sy) / det), static_cast<double>((sxx * sy - sx * sxy) / det)};
}

}  // namespace oracle
