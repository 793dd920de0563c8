#pragma once

// Distances between spectral measures, and between a spectral measure and
// the semicircle law. The bounded-Lipschitz distance itself is never
// computed; reports carry the trace upper bound next to the KS and W1
// surrogates.

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>

#include "errors.hpp"
#include "io.hpp"
#include "matrices.hpp"
#include "spectra.hpp"

namespace speclaw {

struct DistanceReport {
  double ks = 0.0;
  double w1 = 0.0;
  std::optional<double> bl_upper;

  /// {"ks":..,"w1":..,"bl_upper":..} with 17 significant digits.
  std::string to_json() const {
    std::string out = "{\"ks\":" + fmt17(ks) + ",\"w1\":" + fmt17(w1);
    if (bl_upper) out += ",\"bl_upper\":" + fmt17(*bl_upper);
    out += "}";
    return out;
  }
};

namespace detail {

inline double count_below(const SpectralMeasure& s, double x) {
  return static_cast<double>(std::lower_bound(s.values.begin(), s.values.end(), x) -
                             s.values.begin());
}
inline double count_at_or_below(const SpectralMeasure& s, double x) {
  return static_cast<double>(std::upper_bound(s.values.begin(), s.values.end(), x) -
                             s.values.begin());
}

}  // namespace detail

/// sup_x |F_a(x) - F_b(x)|, evaluated at and just below every atom.
inline double ks_distance(const SpectralMeasure& a, const SpectralMeasure& b) {
  if (a.n() == 0 || b.n() == 0) {
    return (a.n() == 0 && b.n() == 0) ? 0.0 : 1.0;
  }
  const double na = static_cast<double>(a.n());
  const double nb = static_cast<double>(b.n());
  double sup = 0.0;
  auto probe = [&](double x) {
    sup = std::max(sup, std::abs(detail::count_at_or_below(a, x) / na -
                                 detail::count_at_or_below(b, x) / nb));
    sup = std::max(sup, std::abs(detail::count_below(a, x) / na -
                                 detail::count_below(b, x) / nb));
  };
  for (double x : a.values) probe(x);
  for (double x : b.values) probe(x);
  return sup;
}

/// sup_x |F_hat(x) - F_sc(x)|; the sup sits at an atom, on one side of its jump.
inline double ks_to_semicircle(const SpectralMeasure& s) {
  const double n = static_cast<double>(s.n());
  double sup = 0.0;
  for (std::size_t i = 0; i < s.n(); ++i) {
    const double f = semicircle_cdf(s.values[i]);
    sup = std::max(sup, std::abs(static_cast<double>(i + 1) / n - f));
    sup = std::max(sup, std::abs(static_cast<double>(i) / n - f));
  }
  return sup;
}

/// (1/n) sum |a_(i) - b_(i)| over sorted atoms.
inline double w1_equal_size(const SpectralMeasure& a, const SpectralMeasure& b) {
  if (a.n() != b.n())
    throw DimensionError("w1_equal_size: sizes " + std::to_string(a.n()) + " and " +
                         std::to_string(b.n()));
  if (a.n() == 0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < a.n(); ++i) s += std::abs(a.values[i] - b.values[i]);
  return s / static_cast<double>(a.n());
}

/// integral |F_hat - F_sc| dx, piecewise-exact. Between breakpoints F_hat is a
/// constant level c; the one possible crossing F_sc = c is located by
/// bisection and each side is integrated with the closed-form antiderivative
/// of F_sc.
inline double w1_to_semicircle(const SpectralMeasure& s) {
  const std::size_t n = s.n();
  if (n == 0) return 0.0;
  std::vector<double> breaks = s.values;
  breaks.push_back(-2.0);
  breaks.push_back(2.0);
  breaks.push_back(std::min(-2.0, s.values.front()) - 1.0);
  breaks.push_back(std::max(2.0, s.values.back()) + 1.0);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  // Signed integral of (c - F_sc) over [x0, x1].
  auto signed_piece = [](double c, double x0, double x1) {
    return c * (x1 - x0) - (semicircle_cdf_integral(x1) - semicircle_cdf_integral(x0));
  };
  const double nd = static_cast<double>(n);
  double total = 0.0;
  std::size_t below = 0;  // atoms <= current left breakpoint
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double x0 = breaks[k];
    const double x1 = breaks[k + 1];
    while (below < n && s.values[below] <= x0) ++below;
    const double c = static_cast<double>(below) / nd;
    const double f0 = semicircle_cdf(x0);
    const double f1 = semicircle_cdf(x1);
    if (f0 < c && c < f1) {
      double lo = x0, hi = x1;
      while (hi - lo > 1e-13 * std::max(1.0, std::abs(lo))) {
        const double mid = 0.5 * (lo + hi);
        if (semicircle_cdf(mid) < c) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      const double r = 0.5 * (lo + hi);
      total += std::abs(signed_piece(c, x0, r)) + std::abs(signed_piece(c, r, x1));
    } else {
      total += std::abs(signed_piece(c, x0, x1));
    }
  }
  return total;
}

/// sqrt((1/n) tr((b - a)^2)), an upper bound on d_BL of the two spectra.
inline double bl_upper_bound(const DenseSymMatrix& a, const DenseSymMatrix& b) {
  if (a.size() != b.size()) throw DimensionError("bl_upper_bound: dimension mismatch");
  if (a.size() == 0) return 0.0;
  return std::sqrt(trace_of_squared_difference(a, b) / static_cast<double>(a.size()));
}

/// True iff KS(spec(a), spec(b)) <= r/n + 1e-9, r = rank(a - b) per the caller.
inline bool rank_inequality_check(const DenseSymMatrix& a, const DenseSymMatrix& b,
                                  std::size_t r) {
  if (a.size() != b.size()) throw DimensionError("rank_inequality_check: dimension mismatch");
  if (a.size() == 0) return true;
  const double ks = ks_distance(eigvals_sym(a), eigvals_sym(b));
  return ks <= static_cast<double>(r) / static_cast<double>(a.size()) + 1e-9;
}

/// KS and W1 to the semicircle law.
inline DistanceReport distance_to_semicircle(const SpectralMeasure& s) {
  return {ks_to_semicircle(s), w1_to_semicircle(s), std::nullopt};
}

/// KS, W1 and the trace bound between two matrices' spectra.
inline DistanceReport matrix_distance(const DenseSymMatrix& a, const DenseSymMatrix& b) {
  const SpectralMeasure sa = eigvals_sym(a);
  const SpectralMeasure sb = eigvals_sym(b);
  return {ks_distance(sa, sb), w1_equal_size(sa, sb), bl_upper_bound(a, b)};
}

}  // namespace speclaw
