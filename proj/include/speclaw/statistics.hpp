#pragma once

// Per-replicate trace statistics and degree events, Monte-Carlo aggregation
// into cell summaries, and log-log decay fits.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "io.hpp"
#include "matrices.hpp"
#include "metrics.hpp"
#include "models.hpp"

namespace speclaw {

struct EventCounts {
  std::size_t e1_fail_count = 0;  // edges with an endpoint degree outside [u/2, 3u/2]
  bool gamma_fail = false;        // some degree outside (u/2, 3u/2)
  std::size_t isolated_count = 0;
};

struct TraceStat {
  double t_value = 0.0;  // (1/n) tr((proxy - target)^2)
  double u_n = 0.0;      // (n-1)p for ER, mean weight for Chung-Lu
  std::size_t e1_fail_count = 0;
  bool gamma_fail = false;
  std::size_t isolated_count = 0;

  std::string to_json() const {
    std::ostringstream os;
    os << "{\"t_value\":" << fmt17(t_value) << ",\"u_n\":" << fmt17(u_n)
       << ",\"event_e1_fail_count\":" << e1_fail_count
       << ",\"gamma_e_fail\":" << (gamma_fail ? 1 : 0)
       << ",\"isolated_count\":" << isolated_count << "}";
    return os.str();
  }
};

/// E1 uses the closed interval [u/2, 3u/2]; the typical event uses the open one.
inline EventCounts event_counters(const GraphSample& g, double u_n) {
  if (!(u_n > 0.0)) throw ValidationError("event_counters: u_n must be positive");
  const double lo = 0.5 * u_n;
  const double hi = 1.5 * u_n;
  EventCounts ev;
  std::vector<char> outside_closed(g.n, 0);
  for (std::size_t i = 0; i < g.n; ++i) {
    const double d = static_cast<double>(g.degrees[i]);
    if (g.degrees[i] == 0) ++ev.isolated_count;
    if (!(d > lo && d < hi)) ev.gamma_fail = true;
    outside_closed[i] = (d < lo || d > hi) ? 1 : 0;
  }
  for (const Edge& e : g.edges)
    if (outside_closed[e.u] || outside_closed[e.v]) ++ev.e1_fail_count;
  return ev;
}

namespace detail {

inline TraceStat with_events(const GraphSample& g, double t, double u) {
  const EventCounts ev = event_counters(g, u);
  return {t, u, ev.e1_fail_count, ev.gamma_fail, ev.isolated_count};
}

}  // namespace detail

/// (1/n) sum over edges of 2 (1/u_n - (d_i d_j)^{-1/2})^2, in O(|E|).
inline TraceStat trace_stat_er(const GraphSample& g, double p) {
  if (!(p > 0.0)) throw ValidationError("trace_stat_er: p must be positive");
  if (g.n < 2) throw ValidationError("trace_stat_er: need n >= 2 for u_n > 0");
  const double u = static_cast<double>(g.n - 1) * p;
  const double inv_u = 1.0 / u;
  const std::vector<double> v = pseudo_inv_sqrt_degrees(g);
  double sum = 0.0;
  for (const Edge& e : g.edges) {
    const double diff = inv_u - v[e.u] * v[e.v];
    sum += diff * diff;
  }
  return detail::with_events(g, 2.0 * sum / static_cast<double>(g.n), u);
}

/// (1/n) sum over edges of 2 ((w_i w_j)^{-1/2} - (d_i d_j)^{-1/2})^2.
inline TraceStat trace_stat_chung_lu(const GraphSample& g, const ChungLuSpec& spec) {
  if (spec.n() != g.n) throw ValidationError("trace_stat_chung_lu: weight count differs from n");
  const std::vector<double> v = pseudo_inv_sqrt_degrees(g);
  std::vector<double> iw(g.n);
  for (std::size_t i = 0; i < g.n; ++i) iw[i] = 1.0 / std::sqrt(spec.weights()[i]);
  double sum = 0.0;
  for (const Edge& e : g.edges) {
    const double diff = iw[e.u] * iw[e.v] - v[e.u] * v[e.v];
    sum += diff * diff;
  }
  return detail::with_events(g, 2.0 * sum / static_cast<double>(g.n), spec.mean_weight());
}

struct ReplicateResult {
  TraceStat trace;
  std::optional<DistanceReport> distance;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Two-sided exact binomial interval at level 1 - alpha.
inline Interval clopper_pearson(std::size_t k, std::size_t r, double alpha = 0.05) {
  if (r == 0) throw ValidationError("clopper_pearson: zero trials");
  auto log_pmf = [r](std::size_t i, double p) {
    return std::lgamma(static_cast<double>(r) + 1.0) - std::lgamma(static_cast<double>(i) + 1.0) -
           std::lgamma(static_cast<double>(r - i) + 1.0) + static_cast<double>(i) * std::log(p) +
           static_cast<double>(r - i) * std::log1p(-p);
  };
  // P(X <= k | p), p in (0,1).
  auto cdf = [&](std::size_t upto, double p) {
    double s = 0.0;
    for (std::size_t i = 0; i <= upto; ++i) s += std::exp(log_pmf(i, p));
    return std::min(1.0, s);
  };
  auto solve = [](auto&& f, double target) {  // f decreasing in p
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (f(mid) > target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };
  Interval out{0.0, 1.0};
  // Lower: P(X >= k | p) = alpha/2, i.e. 1 - cdf(k-1, p) = alpha/2.
  if (k > 0) out.lo = solve([&](double p) { return cdf(k - 1, p); }, 1.0 - alpha / 2.0);
  if (k < r) out.hi = solve([&](double p) { return cdf(k, p); }, alpha / 2.0);
  return out;
}

/// Binomial proportion with its 95% interval: normal approximation, exact
/// Clopper-Pearson when fewer than 5 successes or failures.
struct Proportion {
  std::size_t count = 0;
  std::size_t trials = 0;
  double estimate = 0.0;
  Interval ci95;

  static Proportion of(std::size_t count, std::size_t trials) {
    Proportion p;
    p.count = count;
    p.trials = trials;
    p.estimate = static_cast<double>(count) / static_cast<double>(trials);
    if (count < 5 || trials - count < 5) {
      p.ci95 = clopper_pearson(count, trials);
    } else {
      const double se = std::sqrt(p.estimate * (1.0 - p.estimate) / static_cast<double>(trials));
      p.ci95 = {std::max(0.0, p.estimate - 1.96 * se), std::min(1.0, p.estimate + 1.96 * se)};
    }
    return p;
  }

  /// Binomial standard error of the estimate.
  double std_error() const {
    return std::sqrt(estimate * (1.0 - estimate) / static_cast<double>(trials));
  }
};

struct SampleMoments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased; 0 when R = 1
  Interval ci95;
  std::size_t count = 0;

  double std_error() const {
    return count > 0 ? std::sqrt(variance / static_cast<double>(count)) : 0.0;
  }

  static SampleMoments of(const std::vector<double>& xs) {
    if (xs.empty()) throw ValidationError("moments of an empty sample");
    SampleMoments m;
    m.count = xs.size();
    for (double x : xs) m.mean += x;
    m.mean /= static_cast<double>(xs.size());
    if (xs.size() >= 2) {
      double ss = 0.0;
      for (double x : xs) ss += (x - m.mean) * (x - m.mean);
      m.variance = ss / static_cast<double>(xs.size() - 1);
    }
    const double half = 1.96 * m.std_error();
    m.ci95 = {m.mean - half, m.mean + half};
    return m;
  }
};

/// What a cell is, independent of its samples.
struct CellMeta {
  std::size_t n = 0;
  std::string schedule;  // schedule label or Chung-Lu profile
  double p = 0.0;        // ER p, or mean pair probability for Chung-Lu
  double u_n = 0.0;
  std::uint64_t seed = 0;
  std::optional<double> w_min;  // Chung-Lu only
};

struct CellSummary {
  CellMeta meta;
  std::size_t replicates = 0;
  SampleMoments t;
  std::optional<SampleMoments> ks;
  std::optional<SampleMoments> w1;
  Proportion gamma_fail;
  double chernoff_bound = 0.0;  // 2 n exp(-u_n/12); may exceed 1
  Proportion isolated;          // replicates with at least one isolated vertex
};

inline double chernoff_gamma_bound(std::size_t n, double u_n) {
  return 2.0 * static_cast<double>(n) * std::exp(-u_n / 12.0);
}

/// Deterministic fold over replicates in index order.
inline CellSummary aggregate(const CellMeta& meta, const std::vector<ReplicateResult>& results) {
  if (results.empty()) throw ValidationError("aggregate: no replicate results");
  CellSummary s;
  s.meta = meta;
  s.replicates = results.size();
  std::vector<double> ts, kss, w1s;
  std::size_t gamma = 0, iso = 0;
  for (const ReplicateResult& r : results) {
    ts.push_back(r.trace.t_value);
    if (r.distance) {
      kss.push_back(r.distance->ks);
      w1s.push_back(r.distance->w1);
    }
    gamma += r.trace.gamma_fail ? 1 : 0;
    iso += r.trace.isolated_count > 0 ? 1 : 0;
  }
  s.t = SampleMoments::of(ts);
  if (!kss.empty()) {
    if (kss.size() != results.size())
      throw ValidationError("aggregate: distance reports missing for some replicates");
    s.ks = SampleMoments::of(kss);
    s.w1 = SampleMoments::of(w1s);
  }
  s.gamma_fail = Proportion::of(gamma, results.size());
  s.isolated = Proportion::of(iso, results.size());
  s.chernoff_bound = chernoff_gamma_bound(meta.n, meta.u_n);
  return s;
}

/// RFC 4180 field: quoted when it holds a comma, quote or newline.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

// CSV: the fixed leading columns followed by var_t and w_min.
inline constexpr const char* kCellCsvHeader =
    "n,schedule,p,u_n,R,mean_t,ci_lo_t,ci_hi_t,mean_ks,ci_lo_ks,ci_hi_ks,mean_w1,"
    "p_gamma_fail,chernoff_bound,p_isolated,seed,var_t,w_min";

inline void write_cell_csv_header(std::ostream& os) { os << kCellCsvHeader << '\n'; }

inline void write_cell_csv_row(std::ostream& os, const CellSummary& s) {
  auto opt = [](const std::optional<SampleMoments>& m, auto field) {
    return m ? fmt17(field(*m)) : std::string();
  };
  os << s.meta.n << ',' << csv_field(s.meta.schedule) << ',' << fmt17(s.meta.p) << ',' << fmt17(s.meta.u_n)
     << ',' << s.replicates << ',' << fmt17(s.t.mean) << ',' << fmt17(s.t.ci95.lo) << ','
     << fmt17(s.t.ci95.hi) << ',' << opt(s.ks, [](const SampleMoments& m) { return m.mean; })
     << ',' << opt(s.ks, [](const SampleMoments& m) { return m.ci95.lo; }) << ','
     << opt(s.ks, [](const SampleMoments& m) { return m.ci95.hi; }) << ','
     << opt(s.w1, [](const SampleMoments& m) { return m.mean; }) << ','
     << fmt17(s.gamma_fail.estimate) << ',' << fmt17(s.chernoff_bound) << ','
     << fmt17(s.isolated.estimate) << ',' << s.meta.seed << ',' << fmt17(s.t.variance) << ','
     << (s.meta.w_min ? fmt17(*s.meta.w_min) : std::string()) << '\n';
}

/// One parsed CSV row, keyed by column name.
using CsvRow = std::map<std::string, std::string>;

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  if (quoted) throw ValidationError("csv: unterminated quoted field");
  out.push_back(std::move(cell));
  return out;
}

inline std::vector<CsvRow> read_csv_rows(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv_line(line);
  std::vector<CsvRow> rows;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw ValidationError("csv: row " + std::to_string(rows.size() + 1) + " has " +
                            std::to_string(cells.size()) + " fields, header has " +
                            std::to_string(header.size()));
    CsvRow row;
    for (std::size_t k = 0; k < header.size(); ++k) row[header[k]] = cells[k];
    rows.push_back(std::move(row));
  }
  return rows;
}

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double stderr_slope = 0.0;
  std::size_t points = 0;

  std::string to_json() const {
    return "{\"slope\":" + fmt17(slope) + ",\"intercept\":" + fmt17(intercept) +
           ",\"r_squared\":" + fmt17(r_squared) + ",\"stderr_slope\":" + fmt17(stderr_slope) +
           ",\"points\":" + std::to_string(points) + "}";
  }
};

/// Ordinary least squares of y on x.
inline SlopeFit ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DimensionError("ols_fit: length mismatch");
  const std::size_t k = x.size();
  if (k < 3) throw ValidationError("ols_fit: need at least 3 points, got " + std::to_string(k));
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw ValidationError("ols_fit: all x values coincide");
  SlopeFit f;
  f.points = k;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    sse += r * r;
  }
  f.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  f.stderr_slope = std::sqrt(sse / static_cast<double>(k - 2) / sxx);
  return f;
}

enum class FitMode {
  Lemma1,      // log mean_t against log u_n
  ChungLuKey,  // log(u_n * mean_t) against log w_min, u_n = mean weight
};

/// Point on a decay plot: scale x (u_n or w_min) and the mean statistic.
struct DecayPoint {
  std::size_t n = 0;
  double u_n = 0.0;
  double mean_t = 0.0;
  std::optional<double> w_min;
};

inline DecayPoint decay_point(const CellSummary& s) {
  return {s.meta.n, s.meta.u_n, s.t.mean, s.meta.w_min};
}

inline SlopeFit fit_decay(const std::vector<DecayPoint>& cells, FitMode mode) {
  if (cells.size() < 3)
    throw ValidationError("fit_decay: need at least 3 cells, got " + std::to_string(cells.size()));
  std::vector<double> x, y;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const DecayPoint& c = cells[k];
    if (!(c.mean_t > 0.0))
      throw ValidationError("fit_decay: cell " + std::to_string(k) + " (n=" + std::to_string(c.n) +
                            ") has nonpositive mean_t");
    if (!(c.u_n > 0.0))
      throw ValidationError("fit_decay: cell " + std::to_string(k) + " has nonpositive u_n");
    if (mode == FitMode::Lemma1) {
      x.push_back(std::log(c.u_n));
      y.push_back(std::log(c.mean_t));
    } else {
      if (!c.w_min || !(*c.w_min > 0.0))
        throw ValidationError("fit_decay: cell " + std::to_string(k) + " lacks a positive w_min");
      x.push_back(std::log(*c.w_min));
      y.push_back(std::log(c.u_n * c.mean_t));
    }
  }
  return ols_fit(x, y);
}

inline SlopeFit fit_decay(const std::vector<CellSummary>& cells, FitMode mode) {
  std::vector<DecayPoint> pts;
  for (const CellSummary& s : cells) pts.push_back(decay_point(s));
  return fit_decay(pts, mode);
}

/// Decay points from a cell-summary CSV; only n, u_n, mean_t and w_min are read.
inline std::vector<DecayPoint> read_decay_points(std::istream& is) {
  std::vector<DecayPoint> pts;
  for (const CsvRow& row : read_csv_rows(is)) {
    auto get = [&row](const char* key) -> const std::string& {
      const auto it = row.find(key);
      if (it == row.end()) throw ValidationError(std::string("csv: missing column '") + key + "'");
      return it->second;
    };
    DecayPoint p;
    p.n = std::stoull(get("n"));
    p.u_n = std::stod(get("u_n"));
    p.mean_t = std::stod(get("mean_t"));
    const auto w = row.find("w_min");
    if (w != row.end() && !w->second.empty()) p.w_min = std::stod(w->second);
    pts.push_back(p);
  }
  return pts;
}

}  // namespace speclaw
