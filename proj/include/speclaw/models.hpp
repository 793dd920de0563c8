#pragma once

// Erdos-Renyi and Chung-Lu random graph samplers.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace speclaw {

struct Edge {
  std::uint32_t u = 0;  // u < v
  std::uint32_t v = 0;
  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/// Where a sample came from. A sample drawn from a bare RngStream has
/// no master seed, only the stream coordinates it was given.
struct Provenance {
  std::optional<std::uint64_t> master_seed;
  std::uint64_t cell_id = 0;
  std::uint64_t replicate_index = 0;
  std::string profile;  // weight-profile description for Chung-Lu samples
};

/// Coordinates of a replicate stream.
struct SeedPath {
  std::uint64_t master_seed = 0;
  std::uint64_t cell_id = 0;
  std::uint64_t replicate_index = 0;

  RngStream stream() const {
    return RngStream::for_replicate(master_seed, cell_id, replicate_index);
  }
};

struct GraphSample {
  std::size_t n = 0;
  std::vector<Edge> edges;  // strictly increasing, lexicographic
  std::vector<std::uint32_t> degrees;
  Provenance provenance;

  std::size_t edge_count() const { return edges.size(); }

  std::size_t isolated_count() const {
    return static_cast<std::size_t>(
        std::count(degrees.begin(), degrees.end(), 0u));
  }

  std::uint32_t min_degree() const {
    return degrees.empty() ? 0 : *std::min_element(degrees.begin(), degrees.end());
  }
  std::uint32_t max_degree() const {
    return degrees.empty() ? 0 : *std::max_element(degrees.begin(), degrees.end());
  }

  /// Per-vertex sorted neighbor lists.
  std::vector<std::vector<std::uint32_t>> neighbors() const {
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i) adj[i].reserve(degrees[i]);
    for (const Edge& e : edges) {
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
    for (auto& row : adj) std::sort(row.begin(), row.end());
    return adj;
  }

  /// Throws ValidationError unless the edge list is simple, sorted, and
  /// consistent with the degree vector.
  void validate() const {
    if (degrees.size() != n) throw ValidationError("degree vector length differs from n");
    std::vector<std::uint32_t> recount(n, 0);
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const Edge& e = edges[k];
      if (e.u >= e.v) throw ValidationError("edge " + std::to_string(k) + " is not (i<j)");
      if (e.v >= n) throw ValidationError("edge " + std::to_string(k) + " endpoint out of range");
      if (k > 0 && !(edges[k - 1] < e))
        throw ValidationError("edge list not strictly increasing at " + std::to_string(k));
      ++recount[e.u];
      ++recount[e.v];
    }
    if (recount != degrees) throw ValidationError("degrees disagree with incidence counts");
  }

  /// Rebuilds the degree vector from the edge list.
  static GraphSample from_edges(std::size_t n, std::vector<Edge> edges,
                                Provenance provenance = {}) {
    GraphSample g;
    g.n = n;
    g.edges = std::move(edges);
    g.degrees.assign(n, 0);
    for (const Edge& e : g.edges) {
      if (e.v < n) {
        ++g.degrees[e.u];
        ++g.degrees[e.v];
      }
    }
    g.provenance = std::move(provenance);
    g.validate();
    return g;
  }
};

struct ErSpec {
  std::size_t n = 1;
  double p = 0.0;

  void validate() const {
    if (n < 1) throw ValidationError("ER: n must be >= 1");
    if (!(p >= 0.0 && p <= 1.0)) {
      std::ostringstream os;
      os << "ER: edge probability p=" << p << " outside [0,1]";
      throw ValidationError(os.str());
    }
  }

  /// Expected-degree scale (n-1)p.
  double expected_degree() const { return static_cast<double>(n - 1) * p; }
};

/// Chung-Lu law: edge {i,j} with probability w_i w_j / sum(w).
class ChungLuSpec {
 public:
  ChungLuSpec() = default;

  /// Validates w_i > 0 for all i and max w_i^2 < sum w.
  explicit ChungLuSpec(std::vector<double> weights, std::string profile = "literal")
      : weights_(std::move(weights)), profile_(std::move(profile)) {
    if (weights_.empty()) throw ValidationError("Chung-Lu: empty weight vector");
    double total = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      const double w = weights_[i];
      if (!(w > 0.0) || !std::isfinite(w))
        throw ValidationError("Chung-Lu: weight " + std::to_string(i) + " is not a positive finite number");
      total += w;
    }
    phi_ = 1.0 / total;
    const auto max_it = std::max_element(weights_.begin(), weights_.end());
    const double wmax = *max_it;
    if (!(wmax * wmax * phi_ < 1.0))
      throw ValidationError("Chung-Lu: weight " +
                            std::to_string(max_it - weights_.begin()) +
                            " violates max w^2 < sum w (p_ij >= 1)");
  }

  std::size_t n() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  double phi() const { return phi_; }
  const std::string& profile() const { return profile_; }

  double edge_probability(std::size_t i, std::size_t j) const {
    return weights_[i] * weights_[j] * phi_;
  }
  double mean_weight() const { return 1.0 / (phi_ * static_cast<double>(n())); }
  double min_weight() const { return *std::min_element(weights_.begin(), weights_.end()); }
  double max_weight() const { return *std::max_element(weights_.begin(), weights_.end()); }

  /// Exact expected degree of vertex i: sum_{j != i} p_ij = w_i - phi w_i^2.
  double expected_degree(std::size_t i) const {
    return weights_[i] - phi_ * weights_[i] * weights_[i];
  }

 private:
  std::vector<double> weights_;
  double phi_ = 0.0;
  std::string profile_;
};

namespace profiles {

inline std::string format_param(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

inline ChungLuSpec constant(std::size_t n, double w) {
  return ChungLuSpec(std::vector<double>(n, w), "constant(w=" + format_param(w) + ")");
}

/// w_i = lo + (hi - lo) i/(n-1), so w_0 = lo and w_{n-1} = hi.
inline ChungLuSpec linear_ramp(std::size_t n, double lo, double hi) {
  std::vector<double> w(n, lo);
  if (n > 1) {
    for (std::size_t i = 0; i < n; ++i)
      w[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return ChungLuSpec(std::move(w), "linear-ramp(lo=" + format_param(lo) +
                                       ",hi=" + format_param(hi) + ")");
}

/// First round(fraction*n) vertices get weight a, the rest weight b.
inline ChungLuSpec two_block(std::size_t n, double a, double b, double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw ValidationError("two-block: fraction outside [0,1]");
  const auto split = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  std::vector<double> w(n, b);
  std::fill(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(split), a);
  return ChungLuSpec(std::move(w), "two-block(a=" + format_param(a) + ",b=" +
                                       format_param(b) + ",fraction=" +
                                       format_param(fraction) + ")");
}

}  // namespace profiles

/// Sequence p(n) used to sweep n while holding a sparsity regime fixed.
struct Schedule {
  enum class Kind {
    ConstP,          // p = c
    COverN,          // np = c
    CLogNOverN,      // np = c ln n
    CLog2NOverN,     // np = c (ln n)^2
    Power,           // np = c n^alpha
    CSqrtLogNOverN,  // np = c sqrt(ln n)
    LogNPlusCLogLogN // np = ln n + c ln ln n
  };

  Kind kind = Kind::ConstP;
  double c = 0.5;
  double alpha = 1.0;

  /// p(n); throws RangeError unless p(n) is in (0,1).
  double eval(std::size_t n) const {
    if (n < 2) throw RangeError("schedule: n must be >= 2");
    const double nd = static_cast<double>(n);
    const double ln = std::log(nd);
    double p = 0.0;
    switch (kind) {
      case Kind::ConstP: p = c; break;
      case Kind::COverN: p = c / nd; break;
      case Kind::CLogNOverN: p = c * ln / nd; break;
      case Kind::CLog2NOverN: p = c * ln * ln / nd; break;
      case Kind::Power: p = c * std::pow(nd, alpha - 1.0); break;
      case Kind::CSqrtLogNOverN: p = c * std::sqrt(ln) / nd; break;
      case Kind::LogNPlusCLogLogN: p = (ln + c * std::log(ln)) / nd; break;
    }
    if (!(p > 0.0 && p < 1.0)) {
      std::ostringstream os;
      os << "schedule " << label() << " gives p(" << n << ")=" << p << " outside (0,1)";
      throw RangeError(os.str());
    }
    return p;
  }

  void validate() const {
    if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("schedule: c must be positive");
    if (kind == Kind::Power && !(alpha > 0.0 && alpha <= 1.0))
      throw ValidationError("schedule: power exponent alpha must lie in (0,1]");
  }

  static std::string_view kind_name(Kind k) {
    switch (k) {
      case Kind::ConstP: return "const-p";
      case Kind::COverN: return "c-over-n";
      case Kind::CLogNOverN: return "c-logn-over-n";
      case Kind::CLog2NOverN: return "c-log2n-over-n";
      case Kind::Power: return "power";
      case Kind::CSqrtLogNOverN: return "c-sqrtlogn-over-n";
      case Kind::LogNPlusCLogLogN: return "logn-plus-c-loglogn-over-n";
    }
    return "?";
  }

  static Kind parse_kind(std::string_view s) {
    for (Kind k : {Kind::ConstP, Kind::COverN, Kind::CLogNOverN, Kind::CLog2NOverN,
                   Kind::Power, Kind::CSqrtLogNOverN, Kind::LogNPlusCLogLogN}) {
      if (kind_name(k) == s) return k;
    }
    throw ValidationError("unknown schedule kind '" + std::string(s) + "'");
  }

  /// Stable text label, e.g. "power(c=1,alpha=0.5)".
  std::string label() const {
    std::string out(kind_name(kind));
    out += "(c=" + profiles::format_param(c);
    if (kind == Kind::Power) out += ",alpha=" + profiles::format_param(alpha);
    out += ")";
    return out;
  }
};

namespace detail {

// Pair index advance over the lexicographic sequence (0,1),(0,2),...,(n-2,n-1).
// Moves (i, j) forward by `skip` positions; returns false past the end.
inline bool advance_pair(std::size_t n, std::size_t& i, std::size_t& j, std::uint64_t skip) {
  std::uint64_t jj = j + skip;
  while (jj >= n) {
    const std::uint64_t overflow = jj - n;
    ++i;
    if (i + 1 >= n) return false;
    jj = i + 1 + overflow;
  }
  j = static_cast<std::size_t>(jj);
  return true;
}

}  // namespace detail

/// G(n, p). Below p = 0.1 the pair sequence is traversed with geometric
/// skips, so the cost is proportional to the number of edges.
inline GraphSample sample_er(const ErSpec& spec, RngStream& rng) {
  spec.validate();
  const std::size_t n = spec.n;
  std::vector<Edge> edges;
  if (n >= 2 && spec.p > 0.0) {
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    edges.reserve(static_cast<std::size_t>(pairs * spec.p * 1.1) + 16);
    if (spec.p < 0.1) {
      const double log_q = std::log1p(-spec.p);
      std::size_t i = 0, j = 1;
      for (;;) {
        const double u = rng.uniform();
        const double skip = std::floor(std::log1p(-u) / log_q);
        if (skip >= pairs) break;
        if (!detail::advance_pair(n, i, j, static_cast<std::uint64_t>(skip))) break;
        edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
        if (!detail::advance_pair(n, i, j, 1)) break;
      }
    } else {
      for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (rng.uniform() < spec.p)
            edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
    }
  }
  GraphSample g;
  g.n = n;
  g.degrees.assign(n, 0);
  for (const Edge& e : edges) {
    ++g.degrees[e.u];
    ++g.degrees[e.v];
  }
  g.edges = std::move(edges);
  g.provenance.cell_id = 0;
  g.provenance.replicate_index = rng.replicate();
  return g;
}

inline GraphSample sample_er(const ErSpec& spec, const SeedPath& path) {
  RngStream rng = path.stream();
  GraphSample g = sample_er(spec, rng);
  g.provenance = {path.master_seed, path.cell_id, path.replicate_index, {}};
  return g;
}

/// Chung-Lu graph; every pair gets its own Bernoulli draw in lexicographic order.
inline GraphSample sample_chung_lu(const ChungLuSpec& spec, RngStream& rng) {
  const std::size_t n = spec.n();
  if (n == 0) throw ValidationError("Chung-Lu: spec has no vertices");
  const std::vector<double>& w = spec.weights();
  const double phi = spec.phi();
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(0.5 / phi) + 16);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double wi_phi = w[i] * phi;
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.uniform() < wi_phi * w[j])
        edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
  }
  GraphSample g;
  g.n = n;
  g.degrees.assign(n, 0);
  for (const Edge& e : edges) {
    ++g.degrees[e.u];
    ++g.degrees[e.v];
  }
  g.edges = std::move(edges);
  g.provenance.replicate_index = rng.replicate();
  g.provenance.profile = spec.profile();
  return g;
}

inline GraphSample sample_chung_lu(const ChungLuSpec& spec, const SeedPath& path) {
  RngStream rng = path.stream();
  GraphSample g = sample_chung_lu(spec, rng);
  g.provenance = {path.master_seed, path.cell_id, path.replicate_index, spec.profile()};
  return g;
}

}  // namespace speclaw
