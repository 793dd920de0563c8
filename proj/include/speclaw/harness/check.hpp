#pragma once

// Deterministic self-check suites behind `speclaw check`.

#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "../matrices.hpp"
#include "../metrics.hpp"
#include "../models.hpp"
#include "../rng.hpp"
#include "../spectra.hpp"
#include "../statistics.hpp"

namespace speclaw::harness {

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_violation;

  bool passed() const { return failures == 0; }
};

struct CheckOptions {
  std::uint64_t seed = 0x5EC1A3ull;
  bool inject_dbl_sign_fault = false;  // mutation sanity: negate the trace bound
};

namespace detail {

class SuiteRecorder {
 public:
  explicit SuiteRecorder(std::string name) { r_.name = std::move(name); }
  void expect(bool ok, const std::string& what) {
    ++r_.cases;
    if (!ok) {
      if (r_.failures == 0) r_.first_violation = what;
      ++r_.failures;
    }
  }
  SuiteResult result() const { return r_; }

 private:
  SuiteResult r_;
};

inline DenseSymMatrix random_symmetric(std::size_t n, RngStream& rng) {
  DenseSymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) m.set(i, j, 2.0 * rng.uniform() - 1.0);
  return m;
}

inline GraphSample complete_graph(std::size_t n) {
  std::vector<Edge> e;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) e.push_back({i, j});
  return GraphSample::from_edges(n, std::move(e));
}

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace detail

/// Spectra with closed forms: K_n, a lone edge with an isolated vertex,
/// diagonal and swap matrices, and the aggregate trace contract.
inline SuiteResult check_closed_form_spectra(const CheckOptions& opt) {
  detail::SuiteRecorder rec("closed-form-spectra");
  for (std::size_t n = 2; n <= 12; ++n) {
    const SpectralMeasure s = eigvals_sym(build(detail::complete_graph(n), MatrixKind::NormalizedAdjacency));
    bool ok = detail::near(s.values.back(), 1.0, 1e-12);
    for (std::size_t i = 0; i + 1 < n; ++i)
      ok = ok && detail::near(s.values[i], -1.0 / static_cast<double>(n - 1), 1e-12);
    rec.expect(ok, "K_" + std::to_string(n) + " normalized adjacency spectrum");
  }
  {
    const GraphSample g = GraphSample::from_edges(3, {{0, 1}});
    const SpectralMeasure s = eigvals_sym(build(g, MatrixKind::NormalizedAdjacency));
    rec.expect(detail::near(s.values[0], -1.0, 1e-12) && detail::near(s.values[1], 0.0, 1e-12) &&
                   detail::near(s.values[2], 1.0, 1e-12),
               "single edge plus isolated vertex");
  }
  {
    DenseSymMatrix d(3);
    d.set(0, 0, 3.0);
    d.set(1, 1, 1.0);
    d.set(2, 2, 2.0);
    const SpectralMeasure s = eigvals_sym(d);
    rec.expect(s.values == std::vector<double>{1.0, 2.0, 3.0}, "diag(3,1,2)");
    DenseSymMatrix x(2);
    x.set(1, 0, 1.0);
    const SpectralMeasure sx = eigvals_sym(x);
    rec.expect(detail::near(sx.values[0], -1.0, 1e-15) && detail::near(sx.values[1], 1.0, 1e-15),
               "[[0,1],[1,0]]");
  }
  RngStream rng(opt.seed, 1);
  for (std::size_t k = 0; k < 64; ++k) {
    const std::size_t n = 2 + k % 63;
    const DenseSymMatrix m = detail::random_symmetric(n, rng);
    const SpectralMeasure s = eigvals_sym(m);
    const double fro = m.frobenius_norm();
    const double nd = static_cast<double>(n);
    rec.expect(std::abs(s.sum() - m.trace()) <= 1e-9 * nd * fro &&
                   std::abs(s.sum_squares() - fro * fro) <= 1e-8 * nd * fro * fro,
               "trace contract on random n=" + std::to_string(n));
  }
  return rec.result();
}

/// w1 <= l2 distance of sorted spectra <= sqrt(tr((b-a)^2)/n) over 10^3 pairs.
inline SuiteResult check_dbl_chain(const CheckOptions& opt) {
  detail::SuiteRecorder rec("dbl-chain");
  RngStream rng(opt.seed, 2);
  for (std::size_t k = 0; k < 1000; ++k) {
    const std::size_t n = 5 + static_cast<std::size_t>(rng.uniform() * 46.0);
    const DenseSymMatrix a = detail::random_symmetric(n, rng);
    const DenseSymMatrix b = detail::random_symmetric(n, rng);
    const SpectralMeasure sa = eigvals_sym(a);
    const SpectralMeasure sb = eigvals_sym(b);
    const double w1 = w1_equal_size(sa, sb);
    double l2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) l2 += (sa.values[i] - sb.values[i]) * (sa.values[i] - sb.values[i]);
    l2 = std::sqrt(l2 / static_cast<double>(n));
    double bound = bl_upper_bound(a, b);
    if (opt.inject_dbl_sign_fault) bound = -bound;
    rec.expect(w1 <= l2 + 1e-9 && l2 <= bound + 1e-9,
               "pair " + std::to_string(k) + " (n=" + std::to_string(n) + ")");
  }
  return rec.result();
}

/// KS(spec(N~), spec(C)) <= 1/n on fresh Chung-Lu samples (rank-one gap).
inline SuiteResult check_rank_inequality(const CheckOptions& opt, std::size_t samples = 100) {
  detail::SuiteRecorder rec("rank-inequality");
  const ChungLuSpec spec = profiles::linear_ramp(200, 15.0, 45.0);
  const ModelContext ctx = ModelContext::cl(spec);
  for (std::size_t k = 0; k < samples; ++k) {
    const GraphSample g = sample_chung_lu(spec, SeedPath{opt.seed, 3, k});
    const DenseSymMatrix nt = build(g, MatrixKind::WeightNormalized, ctx);
    const DenseSymMatrix c = build(g, MatrixKind::CenteredC, ctx);
    rec.expect(rank_inequality_check(nt, c, 1), "Chung-Lu sample " + std::to_string(k));
  }
  return rec.result();
}

/// Edge-sum trace statistics against the dense-matrix trace on 200 graphs.
inline SuiteResult check_edge_sum_equivalence(const CheckOptions& opt) {
  detail::SuiteRecorder rec("edge-sum-vs-matrix");
  RngStream rng(opt.seed, 4);
  for (std::size_t k = 0; k < 200; ++k) {
    const std::size_t n = 10 + static_cast<std::size_t>(rng.uniform() * 91.0);
    const SeedPath path{opt.seed, 4, k};
    double edge_sum = 0.0, matrix = 0.0;
    if (k % 2 == 0) {
      const double p = 0.02 + 0.5 * rng.uniform();
      const GraphSample g = sample_er({n, p}, path);
      const ModelContext ctx = ModelContext::er(p);
      edge_sum = trace_stat_er(g, p).t_value;
      matrix = trace_of_squared_difference(build(g, MatrixKind::ProxyTildeL, ctx),
                                           build(g, MatrixKind::NormalizedLaplacian, ctx)) /
               static_cast<double>(n);
    } else {
      // hi <= 2 lo <= 6 keeps max w^2 < sum w for every n >= 10.
      const double lo = 1.0 + 2.0 * rng.uniform();
      const double hi = lo * (1.0 + rng.uniform());
      const ChungLuSpec spec = profiles::linear_ramp(n, lo, hi);
      const GraphSample g = sample_chung_lu(spec, path);
      const ModelContext ctx = ModelContext::cl(spec);
      edge_sum = trace_stat_chung_lu(g, spec).t_value;
      matrix = trace_of_squared_difference(build(g, MatrixKind::WeightNormalized, ctx),
                                           build(g, MatrixKind::NormalizedAdjacency, ctx)) /
               static_cast<double>(n);
    }
    rec.expect(std::abs(edge_sum - matrix) <= 1e-12 * (1.0 + edge_sum),
               "graph " + std::to_string(k) + (k % 2 == 0 ? " (ER)" : " (Chung-Lu)"));
  }
  return rec.result();
}

inline std::vector<SuiteResult> run_checks(const CheckOptions& opt = {}) {
  return {check_closed_form_spectra(opt), check_dbl_chain(opt), check_rank_inequality(opt),
          check_edge_sum_equivalence(opt)};
}

/// One line per suite; returns true iff every suite passed.
inline bool report_checks(std::ostream& os, const std::vector<SuiteResult>& suites) {
  bool all = true;
  const SuiteResult* first_bad = nullptr;
  for (const SuiteResult& s : suites) {
    os << (s.passed() ? "PASS " : "FAIL ") << s.name << ": " << (s.cases - s.failures) << "/"
       << s.cases << " cases\n";
    if (!s.passed() && !first_bad) first_bad = &s;
    all = all && s.passed();
  }
  if (first_bad)
    os << "first violated invariant: " << first_bad->name << ": " << first_bad->first_violation << '\n';
  os << (all ? "all suites passed" : "check failed") << '\n';
  return all;
}

}  // namespace speclaw::harness
