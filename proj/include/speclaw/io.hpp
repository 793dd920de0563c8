#pragma once

// Text formats: edge lists, weight files, and the 17-digit float dialect
// used by every CSV/JSON writer.

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "models.hpp"

namespace speclaw {

/// Shortest-safe round-trip decimal: 17 significant digits.
inline std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_edge_list(std::ostream& os, const GraphSample& g) {
  os << "# speclaw-edgelist v1 n=" << g.n << " seed=";
  if (g.provenance.master_seed) {
    os << *g.provenance.master_seed;
  } else {
    os << "none";
  }
  os << '\n';
  for (const Edge& e : g.edges) os << e.u << ' ' << e.v << '\n';
}

/// Parses the v1 edge-list format; the degree vector is recomputed and the
/// result validated (sorted, simple, in range).
inline GraphSample read_edge_list(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("edge list: empty input");
  const std::string magic = "# speclaw-edgelist v1 ";
  if (line.rfind(magic, 0) != 0) throw ValidationError("edge list: missing v1 header");
  std::size_t n = 0;
  bool have_n = false;
  Provenance prov;
  std::istringstream header(line.substr(magic.size()));
  std::string field;
  while (header >> field) {
    if (field.rfind("n=", 0) == 0) {
      n = std::stoull(field.substr(2));
      have_n = true;
    } else if (field.rfind("seed=", 0) == 0) {
      const std::string s = field.substr(5);
      if (s != "none") prov.master_seed = std::stoull(s);
    }
  }
  if (!have_n) throw ValidationError("edge list: header lacks n=");
  std::vector<Edge> edges;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    long long u = -1, v = -1;
    if (!(row >> u >> v) || u < 0 || v < 0)
      throw ValidationError("edge list: malformed line " + std::to_string(lineno));
    edges.push_back({static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v)});
  }
  for (std::size_t k = 0; k < edges.size(); ++k)
    if (edges[k].v >= n || edges[k].u >= n)
      throw ValidationError("edge list: vertex out of range on edge " + std::to_string(k));
  return GraphSample::from_edges(n, std::move(edges), std::move(prov));
}

inline GraphSample read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open edge list '" + path + "'");
  return read_edge_list(in);
}

/// One positive decimal per line; blank lines and '#' comments skipped.
inline std::vector<double> read_weights(std::istream& is) {
  std::vector<double> w;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(line.substr(first), &used);
    } catch (const std::exception&) {
      throw ValidationError("weights: line " + std::to_string(lineno) + " is not a number");
    }
    if (!(x > 0.0)) throw ValidationError("weights: line " + std::to_string(lineno) + " is not positive");
    w.push_back(x);
  }
  return w;
}

inline std::vector<double> read_weights_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open weights file '" + path + "'");
  return read_weights(in);
}

inline void write_weights(std::ostream& os, const std::vector<double>& w) {
  for (double x : w) os << fmt17(x) << '\n';
}

}  // namespace speclaw
