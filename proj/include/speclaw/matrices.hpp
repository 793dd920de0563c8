#pragma once

// Dense symmetric matrices built from a sampled graph: adjacency,
// Laplacians, normalized adjacency under the pseudoinverse degree
// convention, the deterministic-degree proxy, and the Chung-Lu family.

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "io.hpp"
#include "models.hpp"

namespace speclaw {

inline constexpr std::size_t kDenseCap = 8192;

/// Symmetric n x n matrix stored as its packed lower triangle (row-major),
/// so m(i,j) and m(j,i) are the same storage cell.
class DenseSymMatrix {
 public:
  DenseSymMatrix() = default;
  explicit DenseSymMatrix(std::size_t n) : n_(n), data_(n * (n + 1) / 2, 0.0) {}

  static DenseSymMatrix identity(std::size_t n) {
    DenseSymMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1.0);
    return m;
  }

  /// Builds from a full row-major array; only the lower triangle is read.
  static DenseSymMatrix from_full(std::size_t n, const std::vector<double>& full) {
    if (full.size() != n * n) throw DimensionError("from_full: expected n*n entries");
    DenseSymMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        if (full[i * n + j] != full[j * n + i])
          throw ValidationError("from_full: matrix is not symmetric");
        m.set(i, j, full[i * n + j]);
      }
    return m;
  }

  std::size_t size() const { return n_; }

  double operator()(std::size_t i, std::size_t j) const { return data_[index(i, j)]; }
  void set(std::size_t i, std::size_t j, double v) { data_[index(i, j)] = v; }
  void add(std::size_t i, std::size_t j, double v) { data_[index(i, j)] += v; }

  /// Packed lower triangle; row i occupies [i(i+1)/2, i(i+1)/2 + i].
  const std::vector<double>& packed() const { return data_; }
  std::vector<double>& packed() { return data_; }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double* row = &data_[i * (i + 1) / 2];
      for (std::size_t j = 0; j < i; ++j) s += 2.0 * row[j] * row[j];
      s += row[i] * row[i];
    }
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
  }

  bool all_finite() const {
    for (double x : data_)
      if (!std::isfinite(x)) return false;
    return true;
  }

 private:
  static std::size_t index(std::size_t i, std::size_t j) {
    if (i < j) std::swap(i, j);
    return i * (i + 1) / 2 + j;
  }

  std::size_t n_ = 0;
  std::vector<double> data_;
};

enum class MatrixKind {
  Adjacency,
  Laplacian,
  NormalizedLaplacian,
  NormalizedAdjacency,
  ProxyTildeL,
  WeightNormalized,
  CenteredC,
  RankOneRW,
  TheoremScaled,
};

inline std::string_view matrix_kind_name(MatrixKind k) {
  switch (k) {
    case MatrixKind::Adjacency: return "adjacency";
    case MatrixKind::Laplacian: return "laplacian";
    case MatrixKind::NormalizedLaplacian: return "normalized-laplacian";
    case MatrixKind::NormalizedAdjacency: return "normalized-adjacency";
    case MatrixKind::ProxyTildeL: return "proxy-tilde-l";
    case MatrixKind::WeightNormalized: return "weight-normalized";
    case MatrixKind::CenteredC: return "centered-c";
    case MatrixKind::RankOneRW: return "rank-one-rw";
    case MatrixKind::TheoremScaled: return "theorem-scaled";
  }
  return "?";
}

inline MatrixKind parse_matrix_kind(std::string_view s) {
  for (MatrixKind k :
       {MatrixKind::Adjacency, MatrixKind::Laplacian, MatrixKind::NormalizedLaplacian,
        MatrixKind::NormalizedAdjacency, MatrixKind::ProxyTildeL,
        MatrixKind::WeightNormalized, MatrixKind::CenteredC, MatrixKind::RankOneRW,
        MatrixKind::TheoremScaled}) {
    if (matrix_kind_name(k) == s) return k;
  }
  throw ConfigError("unknown matrix kind '" + std::string(s) + "'");
}

/// Model parameters some matrix kinds need: p for the ER proxy and the
/// theorem scaling, the weight vector for the Chung-Lu matrices.
struct ModelContext {
  std::optional<double> er_p;
  std::optional<ChungLuSpec> chung_lu;

  static ModelContext er(double p) { return {p, std::nullopt}; }
  static ModelContext cl(ChungLuSpec spec) { return {std::nullopt, std::move(spec)}; }
};

/// gamma * M + rho * I.
struct ScaleShift {
  double gamma = 1.0;
  double rho = 0.0;

  /// gamma = -rho = -sqrt(np/(1-p)): maps the normalized Laplacian onto
  /// sqrt(np/(1-p)) (I - L).
  static ScaleShift theorem_er(std::size_t n, double p) {
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("theorem-er scaling needs p in (0,1)");
    const double s = std::sqrt(static_cast<double>(n) * p / (1.0 - p));
    return {-s, s};
  }

  /// gamma = -rho = -sqrt(mean weight).
  static ScaleShift theorem_cl(const ChungLuSpec& spec) {
    const double s = std::sqrt(spec.mean_weight());
    return {-s, s};
  }
};

/// v_i = d_i^{-1/2}, with v_i = 0 for isolated vertices.
inline std::vector<double> pseudo_inv_sqrt_degrees(const GraphSample& g) {
  std::vector<double> v(g.degrees.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (g.degrees[i] > 0) v[i] = 1.0 / std::sqrt(static_cast<double>(g.degrees[i]));
  return v;
}

inline DenseSymMatrix apply_scale_shift(const DenseSymMatrix& m, const ScaleShift& s) {
  DenseSymMatrix out = m;
  for (double& x : out.packed()) x *= s.gamma;
  for (std::size_t i = 0; i < out.size(); ++i) out.add(i, i, s.rho);
  return out;
}

/// tr((b - a)^2) = sum_ij (b_ij - a_ij)^2, entrywise.
inline double trace_of_squared_difference(const DenseSymMatrix& a, const DenseSymMatrix& b) {
  if (a.size() != b.size())
    throw DimensionError("trace_of_squared_difference: dimensions " +
                         std::to_string(a.size()) + " and " + std::to_string(b.size()));
  const std::size_t n = a.size();
  const auto& pa = a.packed();
  const auto& pb = b.packed();
  double off = 0.0, diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t base = i * (i + 1) / 2;
    for (std::size_t j = 0; j < i; ++j) {
      const double d = pb[base + j] - pa[base + j];
      off += d * d;
    }
    const double d = pb[base + i] - pa[base + i];
    diag += d * d;
  }
  return 2.0 * off + diag;
}

namespace detail {

inline void require_dense_cap(std::size_t n) {
  if (n > kDenseCap)
    throw DimensionError("n=" + std::to_string(n) + " exceeds the dense cap of " +
                         std::to_string(kDenseCap) + "; use a smaller n");
}

inline const ChungLuSpec& require_cl(const GraphSample& g, const ModelContext& ctx,
                                     MatrixKind kind) {
  if (!ctx.chung_lu)
    throw ConfigError(std::string(matrix_kind_name(kind)) + " needs a Chung-Lu context");
  if (ctx.chung_lu->n() != g.n)
    throw ConfigError("Chung-Lu weight count does not match graph size");
  return *ctx.chung_lu;
}

inline double require_er_p(const ModelContext& ctx, MatrixKind kind) {
  if (!ctx.er_p)
    throw ConfigError(std::string(matrix_kind_name(kind)) + " needs an ER context (p)");
  return *ctx.er_p;
}

}  // namespace detail

inline DenseSymMatrix build(const GraphSample& g, MatrixKind kind,
                            const ModelContext& ctx = {}) {
  const std::size_t n = g.n;
  detail::require_dense_cap(n);
  DenseSymMatrix m(n);
  switch (kind) {
    case MatrixKind::Adjacency:
      for (const Edge& e : g.edges) m.set(e.v, e.u, 1.0);
      break;
    case MatrixKind::Laplacian:
      for (std::size_t i = 0; i < n; ++i) m.set(i, i, static_cast<double>(g.degrees[i]));
      for (const Edge& e : g.edges) m.set(e.v, e.u, -1.0);
      break;
    case MatrixKind::NormalizedAdjacency:
    case MatrixKind::NormalizedLaplacian:
    case MatrixKind::TheoremScaled: {
      double scale = 1.0;
      if (kind == MatrixKind::TheoremScaled) {
        const double p = detail::require_er_p(ctx, kind);
        scale = ScaleShift::theorem_er(n, p).rho;
      }
      const double sign = kind == MatrixKind::NormalizedLaplacian ? -1.0 : 1.0;
      const std::vector<double> v = pseudo_inv_sqrt_degrees(g);
      for (const Edge& e : g.edges) m.set(e.v, e.u, sign * scale * v[e.u] * v[e.v]);
      if (kind == MatrixKind::NormalizedLaplacian)
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1.0);
      break;
    }
    case MatrixKind::ProxyTildeL: {
      const double p = detail::require_er_p(ctx, kind);
      const double u = static_cast<double>(n - 1) * p;
      if (!(u > 0.0)) throw ConfigError("proxy-tilde-l needs u_n = (n-1)p > 0");
      for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1.0);
      for (const Edge& e : g.edges) m.set(e.v, e.u, -1.0 / u);
      break;
    }
    case MatrixKind::WeightNormalized:
    case MatrixKind::CenteredC:
    case MatrixKind::RankOneRW: {
      const ChungLuSpec& cl = detail::require_cl(g, ctx, kind);
      std::vector<double> sw(n);
      for (std::size_t i = 0; i < n; ++i) sw[i] = std::sqrt(cl.weights()[i]);
      if (kind != MatrixKind::WeightNormalized) {
        // R_W includes its diagonal phi w_i; C carries it with a minus sign.
        const double phi = kind == MatrixKind::CenteredC ? -cl.phi() : cl.phi();
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j <= i; ++j) m.set(i, j, phi * sw[i] * sw[j]);
      }
      if (kind == MatrixKind::RankOneRW) break;
      for (const Edge& e : g.edges) m.add(e.v, e.u, 1.0 / (sw[e.u] * sw[e.v]));
      break;
    }
  }
  return m;
}

/// Lower-triangle `i j value` triplets, zeros included.
inline void dump_triplets(std::ostream& os, const DenseSymMatrix& m) {
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) os << i << ' ' << j << ' ' << fmt17(m(i, j)) << '\n';
}

}  // namespace speclaw
