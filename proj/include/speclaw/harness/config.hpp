#pragma once

// Sweep configuration: a versioned JSON document describing the model, the
// n-list, replicate count, and which statistics and outputs to produce.

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "../errors.hpp"
#include "../io.hpp"
#include "../matrices.hpp"
#include "../models.hpp"
#include "../statistics.hpp"

namespace speclaw::harness {

inline constexpr const char* kConfigSchema = "speclaw-sweep/1";

enum class SpectrumScale { None, TheoremEr, TheoremCl };

inline SpectrumScale parse_scale(const std::string& s) {
  if (s == "none") return SpectrumScale::None;
  if (s == "theorem-er") return SpectrumScale::TheoremEr;
  if (s == "theorem-cl") return SpectrumScale::TheoremCl;
  throw ConfigError("unknown scale '" + s + "' (expected none, theorem-er, theorem-cl)");
}

inline std::string scale_name(SpectrumScale s) {
  switch (s) {
    case SpectrumScale::None: return "none";
    case SpectrumScale::TheoremEr: return "theorem-er";
    case SpectrumScale::TheoremCl: return "theorem-cl";
  }
  return "?";
}

/// Weight profile of a Chung-Lu cell, instantiated per n.
struct WeightProfile {
  std::string kind = "constant";  // constant | linear-ramp | two-block | literal | file
  double w = 0.0;
  double lo = 0.0, hi = 0.0;
  double a = 0.0, b = 0.0, fraction = 0.5;
  std::vector<double> weights;  // literal / file contents
  std::string path;

  ChungLuSpec instantiate(std::size_t n) const {
    if (kind == "constant") return profiles::constant(n, w);
    if (kind == "linear-ramp") return profiles::linear_ramp(n, lo, hi);
    if (kind == "two-block") return profiles::two_block(n, a, b, fraction);
    if (kind == "literal" || kind == "file") {
      if (weights.size() != n)
        throw ValidationError("weight profile has " + std::to_string(weights.size()) +
                              " weights but cell n=" + std::to_string(n));
      return ChungLuSpec(weights, kind == "file" ? "file(" + path + ")" : "literal");
    }
    throw ConfigError("unknown weight profile kind '" + kind + "'");
  }
};

struct ErModel {
  Schedule schedule;
};

struct ChungLuModel {
  std::vector<WeightProfile> profiles;
};

struct SpectrumOptions {
  bool enabled = false;
  MatrixKind matrix = MatrixKind::NormalizedLaplacian;
  SpectrumScale scale = SpectrumScale::None;
};

struct SweepConfig {
  std::uint64_t master_seed = 0;
  std::variant<ErModel, ChungLuModel> model;
  std::vector<std::size_t> n_list;
  std::size_t replicates = 1;
  MatrixKind target = MatrixKind::NormalizedLaplacian;
  MatrixKind proxy = MatrixKind::ProxyTildeL;
  SpectrumOptions spectrum;
  std::string output_dir;
  std::set<std::string> formats{"csv"};
  std::optional<std::size_t> threads;
  nlohmann::json source;  // the document as read, echoed into the manifest

  bool is_er() const { return std::holds_alternative<ErModel>(model); }
};

namespace detail {

template <class T>
T require(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(where + ": field '" + key + "' has the wrong type");
  }
}

template <class T>
T optional_field(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("field '") + key + "' has the wrong type");
  }
}

inline WeightProfile parse_profile(const nlohmann::json& j, const std::string& base_dir) {
  WeightProfile p;
  p.kind = require<std::string>(j, "kind", "profile");
  if (p.kind == "constant") {
    p.w = require<double>(j, "w", "constant profile");
  } else if (p.kind == "linear-ramp") {
    p.lo = require<double>(j, "lo", "linear-ramp profile");
    p.hi = require<double>(j, "hi", "linear-ramp profile");
  } else if (p.kind == "two-block") {
    p.a = require<double>(j, "a", "two-block profile");
    p.b = require<double>(j, "b", "two-block profile");
    p.fraction = require<double>(j, "fraction", "two-block profile");
  } else if (p.kind == "literal") {
    p.weights = require<std::vector<double>>(j, "weights", "literal profile");
  } else if (p.kind == "file") {
    p.path = require<std::string>(j, "path", "file profile");
    const std::string full =
        (!p.path.empty() && p.path[0] == '/') || base_dir.empty() ? p.path : base_dir + "/" + p.path;
    p.weights = read_weights_file(full);
  } else {
    throw ConfigError("unknown weight profile kind '" + p.kind + "'");
  }
  return p;
}

}  // namespace detail

/// Parses and structurally validates a sweep document. Relative weight-file
/// paths resolve against `base_dir`.
inline SweepConfig parse_config(const nlohmann::json& j, const std::string& base_dir = "") {
  using detail::require;
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  const auto schema = require<std::string>(j, "schema", "config");
  if (schema != kConfigSchema)
    throw ConfigError("config: unsupported schema '" + schema + "' (expected " + kConfigSchema + ")");
  SweepConfig c;
  c.source = j;
  c.master_seed = require<std::uint64_t>(j, "master_seed", "config");
  c.replicates = require<std::size_t>(j, "replicates", "config");
  if (c.replicates < 1) throw ValidationError("config: replicates must be >= 1");

  const auto& model = j.contains("model") ? j.at("model") : throw ConfigError("config: missing 'model'");
  const auto type = require<std::string>(model, "type", "model");
  c.n_list = require<std::vector<std::size_t>>(model, "n", "model");
  if (c.n_list.empty()) throw ValidationError("config: n-list is empty");
  for (std::size_t k = 1; k < c.n_list.size(); ++k)
    if (!(c.n_list[k] > c.n_list[k - 1]))
      throw ValidationError("config: n-list must be strictly increasing");
  if (type == "er") {
    const auto& sj = model.contains("schedule") ? model.at("schedule")
                                                 : throw ConfigError("model: missing 'schedule'");
    ErModel er;
    er.schedule.kind = Schedule::parse_kind(require<std::string>(sj, "kind", "schedule"));
    er.schedule.c = require<double>(sj, "c", "schedule");
    er.schedule.alpha = detail::optional_field<double>(sj, "alpha", 1.0);
    er.schedule.validate();
    c.model = er;
    c.target = MatrixKind::NormalizedLaplacian;
    c.proxy = MatrixKind::ProxyTildeL;
  } else if (type == "chung-lu") {
    ChungLuModel cl;
    const auto profs = model.contains("profiles") ? model.at("profiles")
                                                  : throw ConfigError("model: missing 'profiles'");
    if (!profs.is_array() || profs.empty()) throw ConfigError("model: 'profiles' must be a non-empty array");
    for (const auto& pj : profs) cl.profiles.push_back(detail::parse_profile(pj, base_dir));
    c.model = cl;
    c.target = MatrixKind::NormalizedAdjacency;
    c.proxy = MatrixKind::WeightNormalized;
  } else {
    throw ConfigError("model: unknown type '" + type + "' (expected er or chung-lu)");
  }

  if (j.contains("compare")) {
    const auto& cj = j.at("compare");
    const MatrixKind target = parse_matrix_kind(require<std::string>(cj, "target", "compare"));
    const MatrixKind proxy = parse_matrix_kind(require<std::string>(cj, "proxy", "compare"));
    if (target != c.target || proxy != c.proxy)
      throw ConfigError("compare: supported pair for this model is " +
                        std::string(matrix_kind_name(c.target)) + " vs " +
                        std::string(matrix_kind_name(c.proxy)));
  }

  if (j.contains("spectrum")) {
    const auto& sj = j.at("spectrum");
    c.spectrum.enabled = detail::optional_field<bool>(sj, "enabled", true);
    c.spectrum.matrix = parse_matrix_kind(
        detail::optional_field<std::string>(sj, "matrix", "normalized-laplacian"));
    c.spectrum.scale = parse_scale(detail::optional_field<std::string>(sj, "scale", "none"));
    if (c.spectrum.scale == SpectrumScale::TheoremEr && !c.is_er())
      throw ConfigError("spectrum: theorem-er scaling needs an ER model");
    if (c.spectrum.scale == SpectrumScale::TheoremCl && c.is_er())
      throw ConfigError("spectrum: theorem-cl scaling needs a Chung-Lu model");
  }

  if (j.contains("outputs")) {
    const auto& oj = j.at("outputs");
    c.output_dir = detail::optional_field<std::string>(oj, "dir", "");
    if (oj.contains("formats")) {
      c.formats.clear();
      for (const auto& f : oj.at("formats")) {
        const auto s = f.get<std::string>();
        if (s != "csv" && s != "json" && s != "svg")
          throw ConfigError("outputs: unknown format '" + s + "'");
        c.formats.insert(s);
      }
    }
  }
  if (j.contains("threads")) c.threads = j.at("threads").get<std::size_t>();
  return c;
}

inline SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  const auto slash = path.find_last_of('/');
  return parse_config(j, slash == std::string::npos ? "" : path.substr(0, slash));
}

}  // namespace speclaw::harness
