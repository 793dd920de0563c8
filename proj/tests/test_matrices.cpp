#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "speclaw/matrices.hpp"
#include "speclaw/spectra.hpp"

using namespace speclaw;

namespace {

GraphSample graph(std::size_t n, std::vector<Edge> edges) { return GraphSample::from_edges(n, std::move(edges)); }

GraphSample complete(std::size_t n) {
  std::vector<Edge> e;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) e.push_back({i, j});
  return graph(n, e);
}

GraphSample cycle(std::size_t n) {
  std::vector<Edge> e;
  for (std::uint32_t i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  e.push_back({0, static_cast<std::uint32_t>(n - 1)});
  std::sort(e.begin(), e.end());
  return graph(n, e);
}

std::vector<std::int64_t> to_int_full(const DenseSymMatrix& m, double scale) {
  std::vector<std::int64_t> out(m.size() * m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) out[i * m.size() + j] = std::llround(m(i, j) * scale);
  return out;
}

}  // namespace

TEST(PseudoInverse, Examples) {
  GraphSample g;
  g.n = 3;
  g.degrees = {2, 2, 2};
  for (double x : pseudo_inv_sqrt_degrees(g)) EXPECT_DOUBLE_EQ(x, 1.0 / std::sqrt(2.0));
  g.degrees = {1, 1, 0};
  EXPECT_EQ(pseudo_inv_sqrt_degrees(g), (std::vector<double>{1.0, 1.0, 0.0}));
  g.n = 5;
  g.degrees = {4, 1, 3, 0, 0};
  const auto v = pseudo_inv_sqrt_degrees(g);
  EXPECT_DOUBLE_EQ(v[0], 0.5);
  EXPECT_DOUBLE_EQ(v[1], 1.0);
  EXPECT_DOUBLE_EQ(v[2], 1.0 / std::sqrt(3.0));
  EXPECT_EQ(v[3], 0.0);
  EXPECT_EQ(v[4], 0.0);
}

TEST(Build, TriangleNormalizedAdjacency) {
  const DenseSymMatrix m = build(complete(3), MatrixKind::NormalizedAdjacency);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(m(i, j), i == j ? 0.0 : 0.5, 1e-15);
  // 2m = J - I is an integer matrix; its exact eigenvalues are {-1,-1,2}.
  const auto ref = oracle::eigenvalues_integer(to_int_full(m, 2.0), 3);
  const auto got = eigvals_sym(m).values;
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(got[k], double(ref[k]) / 2.0, 1e-12);
  EXPECT_NEAR(got[0], -0.5, 1e-12);
  EXPECT_NEAR(got[2], 1.0, 1e-12);
}

TEST(Build, CompleteGraphSpectra) {
  for (std::size_t n = 2; n <= 9; ++n) {
    const auto got = eigvals_sym(build(complete(n), MatrixKind::NormalizedAdjacency)).values;
    for (std::size_t k = 0; k + 1 < n; ++k) EXPECT_NEAR(got[k], -1.0 / double(n - 1), 1e-12);
    EXPECT_NEAR(got[n - 1], 1.0, 1e-12);
  }
}

TEST(Build, SingleEdgeWithIsolatedVertex) {
  const GraphSample g = graph(3, {{0, 1}});
  const DenseSymMatrix m = build(g, MatrixKind::NormalizedAdjacency);
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_EQ(m(2, j), 0.0);
    EXPECT_EQ(m(j, 2), 0.0);
  }
  const auto ref = oracle::eigenvalues_integer(to_int_full(m, 1.0), 3);
  const auto got = eigvals_sym(m).values;
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(got[k], double(ref[k]), 1e-12);
  EXPECT_NEAR(got[0], -1.0, 1e-12);
  EXPECT_NEAR(got[1], 0.0, 1e-12);
  EXPECT_NEAR(got[2], 1.0, 1e-12);
  const DenseSymMatrix l = build(g, MatrixKind::NormalizedLaplacian);
  EXPECT_EQ(l(2, 2), 1.0);
  EXPECT_EQ(l(2, 0), 0.0);
}

TEST(Build, LaplacianAndAdjacency) {
  const GraphSample g = graph(4, {{0, 1}, {0, 2}, {0, 3}});
  const DenseSymMatrix a = build(g, MatrixKind::Adjacency);
  const DenseSymMatrix l = build(g, MatrixKind::Laplacian);
  EXPECT_EQ(a(1, 0), 1.0);
  EXPECT_EQ(a(1, 2), 0.0);
  EXPECT_EQ(l(0, 0), 3.0);
  EXPECT_EQ(l(3, 3), 1.0);
  EXPECT_EQ(l(0, 3), -1.0);
  EXPECT_EQ(l.trace(), 6.0);
  // Star spectrum: Laplacian {0,1,1,4}.
  const auto ev = eigvals_sym(l).values;
  EXPECT_NEAR(ev[0], 0.0, 1e-12);
  EXPECT_NEAR(ev[1], 1.0, 1e-12);
  EXPECT_NEAR(ev[2], 1.0, 1e-12);
  EXPECT_NEAR(ev[3], 4.0, 1e-12);
}

TEST(Build, ProxyAndTheoremScaled) {
  const GraphSample g = sample_er({30, 0.3}, SeedPath{5, 0, 0});
  const ModelContext ctx = ModelContext::er(0.3);
  const DenseSymMatrix proxy = build(g, MatrixKind::ProxyTildeL, ctx);
  const DenseSymMatrix na = build(g, MatrixKind::NormalizedAdjacency);
  const DenseSymMatrix ts = build(g, MatrixKind::TheoremScaled, ctx);
  const double u = 29 * 0.3, s = std::sqrt(30 * 0.3 / 0.7);
  for (std::size_t i = 0; i < 30; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double a = build(g, MatrixKind::Adjacency)(i, j);
      EXPECT_DOUBLE_EQ(proxy(i, j), (i == j ? 1.0 : 0.0) - a / u);
      EXPECT_NEAR(ts(i, j), s * na(i, j), 1e-15 * s);
    }
}

TEST(Build, ContextMismatch) {
  const GraphSample g = complete(4);
  EXPECT_THROW(build(g, MatrixKind::ProxyTildeL), ConfigError);
  EXPECT_THROW(build(g, MatrixKind::TheoremScaled), ConfigError);
  EXPECT_THROW(build(g, MatrixKind::CenteredC, ModelContext::er(0.5)), ConfigError);
  EXPECT_THROW(build(g, MatrixKind::RankOneRW), ConfigError);
  EXPECT_THROW(build(g, MatrixKind::WeightNormalized, ModelContext::cl(profiles::constant(5, 1.0))), ConfigError);
  EXPECT_THROW(build(g, MatrixKind::ProxyTildeL, ModelContext::er(0.0)), ConfigError);
}

TEST(Build, DenseCap) {
  GraphSample big;
  big.n = kDenseCap + 1;
  big.degrees.assign(big.n, 0);
  EXPECT_THROW(build(big, MatrixKind::Adjacency), DimensionError);
  try {
    build(big, MatrixKind::Adjacency);
  } catch (const DimensionError& e) {
    EXPECT_NE(std::string(e.what()).find("smaller n"), std::string::npos);
  }
}

TEST(Build, RankOneRWHasRankOne) {
  const ChungLuSpec spec = profiles::linear_ramp(8, 1.0, 3.0);
  const GraphSample g = sample_chung_lu(spec, SeedPath{1, 0, 0});
  const DenseSymMatrix r = build(g, MatrixKind::RankOneRW, ModelContext::cl(spec));
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(r(i, i), spec.phi() * spec.weights()[i], 1e-16);
  // Every 2x2 minor vanishes and some entry is nonzero.
  double worst = 0.0;
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j)
      for (std::size_t k = 0; k < 8; ++k)
        for (std::size_t l = 0; l < 8; ++l)
          worst = std::max(worst, std::abs(r(i, j) * r(k, l) - r(i, l) * r(k, j)));
  EXPECT_LT(worst, 1e-16);
  EXPECT_GT(r.max_abs(), 0.0);
  // Nonzero eigenvalue is phi * sum(w) = 1.
  const auto ev = eigvals_sym(r).values;
  EXPECT_NEAR(ev.back(), 1.0, 1e-13);
  for (std::size_t k = 0; k + 1 < ev.size(); ++k) EXPECT_NEAR(ev[k], 0.0, 1e-13);
}

TEST(Build, DecompositionIdentity) {
  const ChungLuSpec spec = profiles::linear_ramp(60, 4.0, 12.0);
  const ModelContext ctx = ModelContext::cl(spec);
  for (std::uint64_t rep = 0; rep < 5; ++rep) {
    const GraphSample g = sample_chung_lu(spec, SeedPath{6, 0, rep});
    const DenseSymMatrix wn = build(g, MatrixKind::WeightNormalized, ctx);
    const DenseSymMatrix c = build(g, MatrixKind::CenteredC, ctx);
    const DenseSymMatrix r = build(g, MatrixKind::RankOneRW, ctx);
    const double tol = 1e-14 * wn.max_abs();
    for (std::size_t i = 0; i < 60; ++i)
      for (std::size_t j = 0; j <= i; ++j) ASSERT_NEAR(wn(i, j), c(i, j) + r(i, j), tol);
    for (const Edge& e : g.edges)
      EXPECT_DOUBLE_EQ(wn(e.u, e.v), 1.0 / std::sqrt(spec.weights()[e.u] * spec.weights()[e.v]));
  }
}

TEST(Build, IsolatedRowsAreZero) {
  const GraphSample g = sample_er({200, 0.004}, SeedPath{17, 0, 0});
  ASSERT_GT(g.isolated_count(), 0u);
  const DenseSymMatrix na = build(g, MatrixKind::NormalizedAdjacency);
  const DenseSymMatrix nl = build(g, MatrixKind::NormalizedLaplacian);
  for (std::size_t i = 0; i < g.n; ++i) {
    if (g.degrees[i] != 0) continue;
    for (std::size_t j = 0; j < g.n; ++j) ASSERT_EQ(na(i, j), 0.0);
    EXPECT_EQ(nl(i, i), 1.0);
  }
}

TEST(Build, RegularGraphRowSums) {
  for (std::size_t n : {5u, 12u, 31u}) {
    const DenseSymMatrix na = build(cycle(n), MatrixKind::NormalizedAdjacency);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += na(i, j);
      EXPECT_NEAR(s, 1.0, 1e-15);
    }
  }
  const DenseSymMatrix k = build(complete(7), MatrixKind::NormalizedAdjacency);
  for (std::size_t i = 0; i < 7; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < 7; ++j) s += k(i, j);
    EXPECT_NEAR(s, 1.0, 1e-15);
  }
}

TEST(Build, TraceIdentities) {
  for (std::uint64_t rep = 0; rep < 10; ++rep) {
    const GraphSample g = sample_er({50, 0.1}, SeedPath{8, 1, rep});
    double dsum = 0.0;
    for (auto d : g.degrees) dsum += d;
    EXPECT_EQ(build(g, MatrixKind::Laplacian).trace(), dsum);
    EXPECT_EQ(build(g, MatrixKind::NormalizedAdjacency).trace(), 0.0);
    EXPECT_EQ(build(g, MatrixKind::NormalizedLaplacian).trace(), 50.0);
  }
}

TEST(ScaleShift, Examples) {
  const DenseSymMatrix m = build(sample_er({10, 0.5}, SeedPath{2, 0, 0}), MatrixKind::NormalizedLaplacian);
  const DenseSymMatrix same = apply_scale_shift(m, {1.0, 0.0});
  EXPECT_EQ(same.packed(), m.packed());
  const DenseSymMatrix flipped = apply_scale_shift(m, {-1.0, 1.0});
  const DenseSymMatrix na = build(sample_er({10, 0.5}, SeedPath{2, 0, 0}), MatrixKind::NormalizedAdjacency);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j <= i; ++j) EXPECT_NEAR(flipped(i, j), na(i, j), 1e-15);
  DenseSymMatrix d(2);
  d.set(0, 0, 1.0);
  d.set(1, 1, 2.0);
  const DenseSymMatrix out = apply_scale_shift(d, {2.0, 3.0});
  EXPECT_EQ(out(0, 0), 5.0);
  EXPECT_EQ(out(1, 1), 7.0);
  EXPECT_EQ(out(0, 1), 0.0);
}

TEST(ScaleShift, TheoremFactors) {
  const ScaleShift s = ScaleShift::theorem_er(100, 0.2);
  EXPECT_DOUBLE_EQ(s.rho, std::sqrt(100 * 0.2 / 0.8));
  EXPECT_DOUBLE_EQ(s.gamma, -s.rho);
  EXPECT_THROW(ScaleShift::theorem_er(10, 1.0), ConfigError);
  const ScaleShift c = ScaleShift::theorem_cl(profiles::constant(50, 9.0));
  EXPECT_DOUBLE_EQ(c.rho, 3.0);
}

TEST(TraceOfSquaredDifference, Examples) {
  const DenseSymMatrix zero(2), id = DenseSymMatrix::identity(2);
  EXPECT_EQ(trace_of_squared_difference(id, id), 0.0);
  EXPECT_EQ(trace_of_squared_difference(zero, id), 2.0);
  const GraphSample k3 = complete(3);
  const double t = trace_of_squared_difference(build(k3, MatrixKind::ProxyTildeL, ModelContext::er(0.5)),
                                               build(k3, MatrixKind::NormalizedLaplacian));
  EXPECT_NEAR(t, 1.5, 1e-15);
  EXPECT_THROW(trace_of_squared_difference(DenseSymMatrix(2), DenseSymMatrix(3)), DimensionError);
}

TEST(TraceOfSquaredDifference, MatchesFullSum) {
  RngStream rng = RngStream::for_replicate(4, 4, 4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial;
    std::vector<double> a(n * n), b(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        a[i * n + j] = a[j * n + i] = rng.uniform() - 0.5;
        b[i * n + j] = b[j * n + i] = rng.uniform() - 0.5;
      }
    long double ref = 0.0L;
    for (std::size_t k = 0; k < n * n; ++k) ref += (long double)(b[k] - a[k]) * (b[k] - a[k]);
    EXPECT_NEAR(trace_of_squared_difference(DenseSymMatrix::from_full(n, a), DenseSymMatrix::from_full(n, b)),
                double(ref), 1e-13);
  }
}

TEST(DenseSymMatrix, SharedStorageSymmetry) {
  DenseSymMatrix m(4);
  m.set(3, 1, 2.5);
  EXPECT_EQ(m(1, 3), 2.5);
  m.add(1, 3, 0.5);
  EXPECT_EQ(m(3, 1), 3.0);
  EXPECT_EQ(m.packed().size(), 10u);
  EXPECT_DOUBLE_EQ(m.frobenius_norm(), std::sqrt(18.0));
  m.set(0, 0, std::nan(""));
  EXPECT_FALSE(m.all_finite());
  EXPECT_THROW(DenseSymMatrix::from_full(2, {0, 1, 2, 0}), ValidationError);
}

TEST(MatrixKind, NamesRoundTrip) {
  for (auto k : {MatrixKind::Adjacency, MatrixKind::Laplacian, MatrixKind::NormalizedLaplacian,
                 MatrixKind::NormalizedAdjacency, MatrixKind::ProxyTildeL, MatrixKind::WeightNormalized,
                 MatrixKind::CenteredC, MatrixKind::RankOneRW, MatrixKind::TheoremScaled})
    EXPECT_EQ(parse_matrix_kind(matrix_kind_name(k)), k);
  EXPECT_THROW(parse_matrix_kind("hessian"), ConfigError);
}

TEST(DumpTriplets, LowerTriangle) {
  std::ostringstream os;
  dump_triplets(os, build(complete(2), MatrixKind::Laplacian));
  EXPECT_EQ(os.str(), "0 0 1\n1 0 -1\n1 1 1\n");
}
