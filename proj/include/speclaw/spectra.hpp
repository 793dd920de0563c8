#pragma once

// Symmetric eigenvalues, empirical spectral distributions, and the
// semicircle law on [-2, 2].

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "io.hpp"
#include "matrices.hpp"

namespace speclaw {

/// Uniform probability measure on n eigenvalues, kept sorted ascending.
struct SpectralMeasure {
  std::vector<double> values;

  SpectralMeasure() = default;
  explicit SpectralMeasure(std::vector<double> v) : values(std::move(v)) {
    std::sort(values.begin(), values.end());
  }

  std::size_t n() const { return values.size(); }
  double sum() const {
    double s = 0.0;
    for (double x : values) s += x;
    return s;
  }
  double sum_squares() const {
    double s = 0.0;
    for (double x : values) s += x * x;
    return s;
  }
};

namespace detail {

// Householder reduction of a packed lower triangle to tridiagonal form
// (d = diagonal, e[i] = coupling between i-1 and i). Destroys `a`.
inline void tridiagonalize(std::size_t n, std::vector<double>& a, std::vector<double>& d,
                           std::vector<double>& e) {
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  std::vector<double> p(n), q(n);
  auto row = [&a](std::size_t i) { return a.data() + i * (i + 1) / 2; };
  for (std::size_t i = n - 1; i >= 1; --i) {
    const std::size_t l = i - 1;
    double* x = row(i);
    double scale = 0.0;
    for (std::size_t k = 0; k <= l; ++k) scale += std::abs(x[k]);
    if (l == 0 || scale == 0.0) {
      e[i] = x[l];
      d[i] = x[i];
      continue;
    }
    double h = 0.0;
    for (std::size_t k = 0; k <= l; ++k) {
      x[k] /= scale;
      h += x[k] * x[k];
    }
    const double f = x[l];
    const double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
    e[i] = scale * g;
    h -= f * g;
    x[l] = f - g;
    const double* v = x;

    // p = B v / h over the leading (l+1) block, touching only the lower triangle.
    std::fill(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(i), 0.0);
    for (std::size_t r = 0; r <= l; ++r) {
      const double* ar = row(r);
      const double vr = v[r];
      double acc = 0.0;
      for (std::size_t c = 0; c < r; ++c) {
        acc += ar[c] * v[c];
        p[c] += ar[c] * vr;
      }
      p[r] += acc + ar[r] * vr;
    }
    double vp = 0.0;
    for (std::size_t k = 0; k <= l; ++k) {
      p[k] /= h;
      vp += v[k] * p[k];
    }
    const double kk = vp / (2.0 * h);
    for (std::size_t k = 0; k <= l; ++k) q[k] = p[k] - kk * v[k];
    for (std::size_t r = 0; r <= l; ++r) {
      double* ar = row(r);
      const double vr = v[r];
      const double qr = q[r];
      for (std::size_t c = 0; c <= r; ++c) ar[c] -= vr * q[c] + qr * v[c];
    }
    d[i] = x[i];
  }
  if (n > 0) d[0] = a[0];
}

// Implicit QL with Wilkinson-style shifts on a symmetric tridiagonal matrix;
// eigenvalues overwrite d.
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = d.size();
  if (n < 2) return;
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m = l;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (++iter > 60) throw NumericalError("tridiagonal QL failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? r : -r));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (std::size_t i = m; i-- > l;) {
          const double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace detail

/// All eigenvalues of a symmetric matrix, ascending. Householder
/// tridiagonalization followed by implicit QL; no eigenvectors.
inline SpectralMeasure eigvals_sym(const DenseSymMatrix& m) {
  const std::size_t n = m.size();
  if (n > kDenseCap) throw DimensionError("eigvals_sym: n exceeds dense cap");
  if (!m.all_finite()) throw NumericalError("eigvals_sym: matrix has non-finite entries");
  if (n == 0) return {};
  std::vector<double> work = m.packed();
  std::vector<double> d, e;
  detail::tridiagonalize(n, work, d, e);
  detail::tridiagonal_ql(d, e);
  return SpectralMeasure(std::move(d));
}

/// Semicircle density (1/2pi) sqrt(4 - x^2) on [-2, 2].
inline double semicircle_density(double x) {
  if (!(std::abs(x) < 2.0)) return 0.0;
  return std::sqrt(4.0 - x * x) / (2.0 * std::numbers::pi);
}

inline double semicircle_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  const double r = std::sqrt(4.0 - x * x);
  const double f = 0.5 + x * r / (4.0 * std::numbers::pi) + std::asin(0.5 * x) / std::numbers::pi;
  return std::clamp(f, 0.0, 1.0);
}

/// Antiderivative G of the semicircle CDF with G(-2) = 0, valid on the
/// whole real line (G(x) = x for x >= 2 adjusted by the constant G(2) - 2).
inline double semicircle_cdf_integral(double x) {
  constexpr double pi = std::numbers::pi;
  auto inner = [](double t) {
    const double r = std::sqrt(std::max(0.0, 4.0 - t * t));
    return 0.5 * t - r * r * r / (12.0 * pi) + (t * std::asin(0.5 * t) + r) / pi;
  };
  const double lo = inner(-2.0);
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return inner(2.0) - lo + (x - 2.0);
  return inner(x) - lo;
}

/// x with semicircle_cdf(x) = t, by bisection on [-2, 2].
inline double semicircle_quantile(double t) {
  if (t <= 0.0) return -2.0;
  if (t >= 1.0) return 2.0;
  double lo = -2.0, hi = 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (semicircle_cdf(mid) < t) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Mid-quantile grid F^{-1}((i - 1/2)/n), i = 1..n.
inline std::vector<double> semicircle_sample_quantiles(std::size_t n) {
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i)
    q[i] = semicircle_quantile((static_cast<double>(i) + 0.5) / static_cast<double>(n));
  // The grid is symmetric; enforce it exactly.
  for (std::size_t i = 0; i < n / 2; ++i) q[n - 1 - i] = -q[i];
  if (n % 2 == 1) q[n / 2] = 0.0;
  return q;
}

/// Right-continuous ESD CDF: #{lambda_i <= x} / n.
inline double esd_cdf(const SpectralMeasure& s, double x) {
  if (s.n() == 0) return 0.0;
  const auto it = std::upper_bound(s.values.begin(), s.values.end(), x);
  return static_cast<double>(it - s.values.begin()) / static_cast<double>(s.n());
}

inline void write_spectrum_csv(std::ostream& os, const SpectralMeasure& s) {
  os << "index,eigenvalue\n";
  for (std::size_t i = 0; i < s.n(); ++i) os << i << ',' << fmt17(s.values[i]) << '\n';
}

inline SpectralMeasure read_spectrum_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("index,eigenvalue", 0) != 0)
    throw ValidationError("spectrum csv: missing 'index,eigenvalue' header");
  std::vector<double> v;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ValidationError("spectrum csv: malformed row");
    v.push_back(std::stod(line.substr(comma + 1)));
  }
  return SpectralMeasure(std::move(v));
}

}  // namespace speclaw
