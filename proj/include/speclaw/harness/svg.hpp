#pragma once

// Minimal SVG emitters: an eigenvalue histogram with the semicircle density
// overlaid, and a log-log scatter for decay plots.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "../spectra.hpp"

namespace speclaw::harness {

struct HistogramOptions {
  std::optional<double> bin_width;  // overrides Freedman-Diaconis
  std::optional<std::size_t> bins;  // overrides both
  std::string title;
  bool semicircle_overlay = true;
};

/// Freedman-Diaconis width 2 IQR n^{-1/3}; falls back to range/sqrt(n) when
/// the IQR vanishes.
inline double freedman_diaconis_width(const std::vector<double>& sorted) {
  const std::size_t n = sorted.size();
  if (n < 2) return 1.0;
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, n - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  };
  const double iqr = quantile(0.75) - quantile(0.25);
  double h = 2.0 * iqr / std::cbrt(static_cast<double>(n));
  if (!(h > 0.0)) {
    const double range = sorted.back() - sorted.front();
    h = range > 0.0 ? range / std::sqrt(static_cast<double>(n)) : 1.0;
  }
  return h;
}

namespace detail {

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

inline std::string escape_xml(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace detail

/// Density-normalized histogram; the overlay is a single <path> element.
inline std::string histogram_svg(const SpectralMeasure& s, const HistogramOptions& opt = {}) {
  constexpr double W = 640, H = 400, ml = 50, mr = 20, mt = 30, mb = 40;
  const std::vector<double>& v = s.values;
  double lo = v.empty() ? -2.0 : v.front();
  double hi = v.empty() ? 2.0 : v.back();
  if (opt.semicircle_overlay) {
    lo = std::min(lo, -2.0);
    hi = std::max(hi, 2.0);
  }
  if (!(hi > lo)) hi = lo + 1.0;
  std::size_t bins = 0;
  double width = 0.0;
  if (opt.bins && *opt.bins > 0) {
    bins = *opt.bins;
    width = (hi - lo) / static_cast<double>(bins);
  } else {
    width = opt.bin_width.value_or(freedman_diaconis_width(v));
    bins = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((hi - lo) / width)));
    bins = std::min<std::size_t>(bins, 2000);
    width = (hi - lo) / static_cast<double>(bins);
  }
  std::vector<double> density(bins, 0.0);
  for (double x : v) {
    auto k = static_cast<std::size_t>((x - lo) / width);
    density[std::min(k, bins - 1)] += 1.0;
  }
  const double norm = v.empty() ? 1.0 : 1.0 / (static_cast<double>(v.size()) * width);
  double ymax = 1.0 / std::numbers::pi;  // semicircle peak
  for (double& d : density) {
    d *= norm;
    ymax = std::max(ymax, d);
  }
  ymax *= 1.05;
  auto px = [&](double x) { return ml + (x - lo) / (hi - lo) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - y / ymax * (H - mt - mb); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  if (!opt.title.empty())
    os << "<text x=\"" << W / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">"
       << detail::escape_xml(opt.title) << "</text>\n";
  os << "<g fill=\"#8fb3d9\" stroke=\"#4a6f96\" stroke-width=\"0.5\">\n";
  for (std::size_t k = 0; k < bins; ++k) {
    if (density[k] <= 0.0) continue;
    const double x0 = lo + static_cast<double>(k) * width;
    os << "<rect x=\"" << detail::num(px(x0)) << "\" y=\"" << detail::num(py(density[k]))
       << "\" width=\"" << detail::num(px(x0 + width) - px(x0)) << "\" height=\""
       << detail::num(py(0.0) - py(density[k])) << "\"/>\n";
  }
  os << "</g>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << py(0.0) << "\" x2=\"" << W - mr << "\" y2=\""
     << py(0.0) << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << py(0.0)
     << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << ml << "\" y=\"" << H - 12 << "\" font-size=\"11\">" << detail::num(lo)
     << "</text>\n"
     << "<text x=\"" << W - mr << "\" y=\"" << H - 12 << "\" font-size=\"11\" text-anchor=\"end\">"
     << detail::num(hi) << "</text>\n"
     << "<text x=\"" << ml - 4 << "\" y=\"" << mt + 4 << "\" font-size=\"11\" text-anchor=\"end\">"
     << detail::num(ymax) << "</text>\n";
  if (opt.semicircle_overlay) {
    constexpr int kPoints = 512;
    os << "<path fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\" d=\"";
    for (int k = 0; k < kPoints; ++k) {
      const double x = -2.0 + 4.0 * k / (kPoints - 1);
      os << (k == 0 ? 'M' : 'L') << detail::num(px(x)) << ',' << detail::num(py(semicircle_density(x)))
         << (k + 1 < kPoints ? " " : "");
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

/// Log-log scatter of (x, y) with an optional fitted line y = exp(b) x^a.
inline std::string loglog_svg(const std::vector<double>& x, const std::vector<double>& y,
                              const std::string& title, std::optional<std::pair<double, double>> fit = {}) {
  constexpr double W = 640, H = 400, ml = 60, mr = 20, mt = 30, mb = 40;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log10(x[i]));
      ly.push_back(std::log10(y[i]));
    }
  }
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!lx.empty()) {
    x0 = *std::min_element(lx.begin(), lx.end()) - 0.1;
    x1 = *std::max_element(lx.begin(), lx.end()) + 0.1;
    y0 = *std::min_element(ly.begin(), ly.end()) - 0.1;
    y1 = *std::max_element(ly.begin(), ly.end()) + 0.1;
  }
  auto px = [&](double v) { return ml + (v - x0) / (x1 - x0) * (W - ml - mr); };
  auto py = [&](double v) { return H - mb - (v - y0) / (y1 - y0) * (H - mt - mb); };
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n"
     << "<text x=\"" << W / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">"
     << detail::escape_xml(title) << "</text>\n"
     << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\"" << H - mb
     << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
     << "\" stroke=\"black\"/>\n"
     << "<text x=\"" << ml << "\" y=\"" << H - 12 << "\" font-size=\"11\">log10 x " << detail::num(x0)
     << "</text>\n"
     << "<text x=\"" << ml - 4 << "\" y=\"" << mt + 4 << "\" font-size=\"11\" text-anchor=\"end\">"
     << detail::num(y1) << "</text>\n";
  for (std::size_t i = 0; i < lx.size(); ++i)
    os << "<circle cx=\"" << detail::num(px(lx[i])) << "\" cy=\"" << detail::num(py(ly[i]))
       << "\" r=\"4\" fill=\"#2c7fb8\"/>\n";
  if (fit) {
    // y = slope * x + intercept in natural logs; convert to log10 axes.
    const double a = fit->first;
    const double b = fit->second / std::log(10.0);
    os << "<line x1=\"" << detail::num(px(x0)) << "\" y1=\"" << detail::num(py(a * x0 + b))
       << "\" x2=\"" << detail::num(px(x1)) << "\" y2=\"" << detail::num(py(a * x1 + b))
       << "\" stroke=\"#c0392b\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace speclaw::harness
