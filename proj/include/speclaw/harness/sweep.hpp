#pragma once

// Sweep orchestration: validate every cell, run (cell, replicate) tasks on a
// bounded worker pool, fold results in key order, and persist outputs with a
// manifest of content hashes.

#include <openssl/evp.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "json.hpp"

#include "../matrices.hpp"
#include "../metrics.hpp"
#include "../models.hpp"
#include "../spectra.hpp"
#include "../statistics.hpp"
#include "config.hpp"
#include "svg.hpp"

namespace speclaw::harness {

inline constexpr const char* kToolVersion = "speclaw 1.0.0";

/// A fully validated cell: the law to sample and its metadata.
struct CellPlan {
  std::size_t index = 0;
  CellMeta meta;
  std::variant<ErSpec, ChungLuSpec> law;
  ModelContext context;
};

/// Builds and validates every cell; throws before anything is sampled.
inline std::vector<CellPlan> plan_cells(const SweepConfig& cfg) {
  std::vector<CellPlan> cells;
  if (const auto* er = std::get_if<ErModel>(&cfg.model)) {
    for (std::size_t n : cfg.n_list) {
      CellPlan c;
      c.index = cells.size();
      const double p = er->schedule.eval(n);
      const ErSpec spec{n, p};
      spec.validate();
      if (!(spec.expected_degree() > 0.0)) throw ValidationError("cell has u_n = 0");
      c.meta = {n, er->schedule.label(), p, spec.expected_degree(),
                cell_seed(cfg.master_seed, c.index), std::nullopt};
      c.law = spec;
      c.context = ModelContext::er(p);
      cells.push_back(std::move(c));
    }
  } else {
    const auto& cl = std::get<ChungLuModel>(cfg.model);
    for (const WeightProfile& prof : cl.profiles) {
      for (std::size_t n : cfg.n_list) {
        if (n < 2) throw ValidationError("Chung-Lu cell needs n >= 2");
        CellPlan c;
        c.index = cells.size();
        ChungLuSpec spec = prof.instantiate(n);
        const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
        double mass = 0.0;  // sum_{i<j} p_ij = (1/phi - sum w_i^2 phi)/2
        double sq = 0.0;
        for (double w : spec.weights()) sq += w * w;
        mass = 0.5 * (1.0 / spec.phi() - sq * spec.phi());
        c.meta = {n, spec.profile(), mass / pairs, spec.mean_weight(),
                  cell_seed(cfg.master_seed, c.index), spec.min_weight()};
        c.law = spec;
        c.context = ModelContext::cl(std::move(spec));
        cells.push_back(std::move(c));
      }
    }
  }
  if (cfg.spectrum.enabled) {
    for (const CellPlan& c : cells) {
      speclaw::detail::require_dense_cap(c.meta.n);
      // Surface kind/context mismatches before sampling.
      if (cfg.spectrum.matrix == MatrixKind::ProxyTildeL ||
          cfg.spectrum.matrix == MatrixKind::TheoremScaled) {
        if (!cfg.is_er()) throw ConfigError("spectrum matrix needs an ER model");
      }
      if (cfg.spectrum.matrix == MatrixKind::WeightNormalized ||
          cfg.spectrum.matrix == MatrixKind::CenteredC ||
          cfg.spectrum.matrix == MatrixKind::RankOneRW) {
        if (cfg.is_er()) throw ConfigError("spectrum matrix needs a Chung-Lu model");
      }
    }
  }
  return cells;
}

inline ScaleShift spectrum_scale_shift(SpectrumScale scale, const GraphSample& g,
                                       const ModelContext& ctx) {
  switch (scale) {
    case SpectrumScale::None: return {};
    case SpectrumScale::TheoremEr:
      if (!ctx.er_p) throw ConfigError("theorem-er scaling needs p");
      return ScaleShift::theorem_er(g.n, *ctx.er_p);
    case SpectrumScale::TheoremCl:
      if (!ctx.chung_lu) throw ConfigError("theorem-cl scaling needs weights");
      return ScaleShift::theorem_cl(*ctx.chung_lu);
  }
  return {};
}

/// Eigenvalues of gamma * M + rho * I for the requested matrix kind.
inline SpectralMeasure scaled_spectrum(const GraphSample& g, MatrixKind kind, SpectrumScale scale,
                                       const ModelContext& ctx) {
  return eigvals_sym(apply_scale_shift(build(g, kind, ctx), spectrum_scale_shift(scale, g, ctx)));
}

inline GraphSample sample_cell(const CellPlan& cell, const SeedPath& path) {
  if (const auto* er = std::get_if<ErSpec>(&cell.law)) return sample_er(*er, path);
  return sample_chung_lu(std::get<ChungLuSpec>(cell.law), path);
}

struct ReplicateOutput {
  ReplicateResult result;
  std::optional<SpectralMeasure> spectrum;  // kept for replicate 0 when plotting
};

inline ReplicateOutput run_replicate(const SweepConfig& cfg, const CellPlan& cell,
                                     std::size_t replicate, bool keep_spectrum = false) {
  const SeedPath path{cfg.master_seed, cell.index, replicate};
  const GraphSample g = sample_cell(cell, path);
  ReplicateOutput out;
  if (const auto* er = std::get_if<ErSpec>(&cell.law)) {
    out.result.trace = trace_stat_er(g, er->p);
  } else {
    out.result.trace = trace_stat_chung_lu(g, std::get<ChungLuSpec>(cell.law));
  }
  if (cfg.spectrum.enabled) {
    SpectralMeasure s = scaled_spectrum(g, cfg.spectrum.matrix, cfg.spectrum.scale, cell.context);
    out.result.distance = distance_to_semicircle(s);
    if (keep_spectrum) out.spectrum = std::move(s);
  }
  return out;
}

struct SweepResult {
  std::vector<CellPlan> cells;
  std::vector<std::vector<ReplicateResult>> replicates;  // [cell][replicate]
  std::vector<CellSummary> summaries;
  std::vector<std::optional<SpectralMeasure>> first_spectra;  // replicate 0 per cell
};

/// Worker count: explicit request, else hardware concurrency; capped by
/// SPECLAW_THREADS when set.
inline std::size_t resolve_threads(std::optional<std::size_t> requested) {
  std::size_t t = requested.value_or(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("SPECLAW_THREADS")) {
    try {
      const std::size_t cap = std::stoull(env);
      if (cap > 0) t = std::min(t, cap);
    } catch (const std::exception&) {
      // ignored: malformed cap
    }
  }
  return std::max<std::size_t>(1, t);
}

inline SweepResult run_sweep(const SweepConfig& cfg, std::optional<std::size_t> threads = {}) {
  SweepResult res;
  res.cells = plan_cells(cfg);
  const std::size_t ncell = res.cells.size();
  const std::size_t R = cfg.replicates;
  const bool keep = cfg.spectrum.enabled && cfg.formats.count("svg") > 0;
  res.replicates.assign(ncell, std::vector<ReplicateResult>(R));
  res.first_spectra.assign(ncell, std::nullopt);

  const std::size_t total = ncell * R;
  const std::size_t workers = std::min(resolve_threads(threads ? threads : cfg.threads), total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= total) return;
      const std::size_t c = task / R;
      const std::size_t r = task % R;
      try {
        ReplicateOutput out = run_replicate(cfg, res.cells[c], r, keep && r == 0);
        res.replicates[c][r] = out.result;
        if (out.spectrum) res.first_spectra[c] = std::move(out.spectrum);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(total);
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  for (std::size_t c = 0; c < ncell; ++c)
    res.summaries.push_back(aggregate(res.cells[c].meta, res.replicates[c]));
  return res;
}

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

inline std::string read_file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline std::string utc_timestamp(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string summary_csv(const SweepResult& r) {
  std::ostringstream os;
  write_cell_csv_header(os);
  for (const CellSummary& s : r.summaries) write_cell_csv_row(os, s);
  return os.str();
}

inline std::string replicate_csv(const SweepResult& r) {
  std::ostringstream os;
  os << "cell,n,replicate,t_value,u_n,e1_fail_count,gamma_fail,isolated_count,ks,w1\n";
  for (std::size_t c = 0; c < r.cells.size(); ++c) {
    for (std::size_t k = 0; k < r.replicates[c].size(); ++k) {
      const ReplicateResult& x = r.replicates[c][k];
      os << c << ',' << r.cells[c].meta.n << ',' << k << ',' << fmt17(x.trace.t_value) << ','
         << fmt17(x.trace.u_n) << ',' << x.trace.e1_fail_count << ','
         << (x.trace.gamma_fail ? 1 : 0) << ',' << x.trace.isolated_count << ','
         << (x.distance ? fmt17(x.distance->ks) : "") << ','
         << (x.distance ? fmt17(x.distance->w1) : "") << '\n';
    }
  }
  return os.str();
}

inline nlohmann::json summary_json(const SweepResult& r) {
  nlohmann::json arr = nlohmann::json::array();
  for (const CellSummary& s : r.summaries) {
    nlohmann::json j;
    j["n"] = s.meta.n;
    j["schedule"] = s.meta.schedule;
    j["p"] = s.meta.p;
    j["u_n"] = s.meta.u_n;
    j["R"] = s.replicates;
    j["seed"] = s.meta.seed;
    j["t"] = {{"mean", s.t.mean}, {"var", s.t.variance}, {"ci95", {s.t.ci95.lo, s.t.ci95.hi}}};
    if (s.ks)
      j["ks"] = {{"mean", s.ks->mean}, {"var", s.ks->variance}, {"ci95", {s.ks->ci95.lo, s.ks->ci95.hi}}};
    if (s.w1) j["w1"] = {{"mean", s.w1->mean}, {"var", s.w1->variance}};
    j["gamma_fail"] = {{"count", s.gamma_fail.count},
                       {"p", s.gamma_fail.estimate},
                       {"ci95", {s.gamma_fail.ci95.lo, s.gamma_fail.ci95.hi}}};
    j["chernoff_bound"] = s.chernoff_bound;
    j["isolated"] = {{"count", s.isolated.count},
                     {"p", s.isolated.estimate},
                     {"ci95", {s.isolated.ci95.lo, s.isolated.ci95.hi}}};
    if (s.meta.w_min) j["w_min"] = *s.meta.w_min;
    arr.push_back(std::move(j));
  }
  return arr;
}

struct OutputFile {
  std::string name;
  std::string bytes;
};

/// Every file the sweep writes, except the manifest.
inline std::vector<OutputFile> render_outputs(const SweepConfig& cfg, const SweepResult& r) {
  std::vector<OutputFile> files;
  if (cfg.formats.count("csv")) {
    files.push_back({"summary.csv", summary_csv(r)});
    files.push_back({"replicates.csv", replicate_csv(r)});
  }
  if (cfg.formats.count("json")) files.push_back({"summary.json", summary_json(r).dump(2) + "\n"});
  if (cfg.formats.count("svg")) {
    for (std::size_t c = 0; c < r.cells.size(); ++c) {
      if (!r.first_spectra[c]) continue;
      HistogramOptions opt;
      opt.title = "cell " + std::to_string(c) + " n=" + std::to_string(r.cells[c].meta.n) + " " +
                  r.cells[c].meta.schedule;
      files.push_back({"spectrum_cell" + std::to_string(c) + ".svg", histogram_svg(*r.first_spectra[c], opt)});
    }
    if (r.summaries.size() >= 2) {
      std::vector<double> x, y;
      for (const CellSummary& s : r.summaries) {
        x.push_back(s.meta.u_n);
        y.push_back(s.t.mean);
      }
      std::optional<std::pair<double, double>> line;
      if (r.summaries.size() >= 3) {
        try {
          const SlopeFit f = fit_decay(r.summaries, FitMode::Lemma1);
          line = std::make_pair(f.slope, f.intercept);
        } catch (const std::exception&) {
          // no fit line when a mean is zero
        }
      }
      files.push_back({"decay.svg", loglog_svg(x, y, "mean t vs u_n", line)});
    }
  }
  return files;
}

struct RunManifest {
  nlohmann::json doc;
};

/// Writes all outputs into cfg.output_dir atomically per file (temp + rename)
/// and returns the manifest that was written.
inline RunManifest write_outputs(const SweepConfig& cfg, const SweepResult& r,
                                 std::chrono::system_clock::time_point started,
                                 std::chrono::system_clock::time_point finished) {
  namespace fs = std::filesystem;
  if (cfg.output_dir.empty()) throw ConfigError("outputs: no output directory configured");
  const std::vector<OutputFile> files = render_outputs(cfg, r);
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);

  RunManifest m;
  m.doc["tool_version"] = kToolVersion;
  m.doc["config"] = cfg.source;
  m.doc["started_utc"] = utc_timestamp(started);
  m.doc["finished_utc"] = utc_timestamp(finished);
  nlohmann::json cells = nlohmann::json::array();
  for (const CellPlan& c : r.cells)
    cells.push_back({{"cell", c.index}, {"n", c.meta.n}, {"schedule", c.meta.schedule},
                     {"seed", c.meta.seed}});
  m.doc["cells"] = cells;
  nlohmann::json inventory = nlohmann::json::array();
  for (const OutputFile& f : files)
    inventory.push_back({{"file", f.name}, {"bytes", f.bytes.size()}, {"sha256", sha256_hex(f.bytes)}});
  m.doc["files"] = inventory;

  std::vector<fs::path> temps;
  try {
    for (const OutputFile& f : files) {
      const fs::path tmp = dir / (f.name + ".tmp");
      temps.push_back(tmp);
      std::ofstream out(tmp, std::ios::binary);
      out << f.bytes;
      if (!out) throw std::runtime_error("failed writing " + tmp.string());
    }
    for (std::size_t k = 0; k < files.size(); ++k) fs::rename(temps[k], dir / files[k].name);
    temps.clear();
    const fs::path mtmp = dir / "manifest.json.tmp";
    temps.push_back(mtmp);
    {
      std::ofstream mout(mtmp, std::ios::binary);
      mout << m.doc.dump(2) << '\n';
      if (!mout) throw std::runtime_error("failed writing " + mtmp.string());
    }
    fs::rename(mtmp, dir / "manifest.json");
    temps.clear();
  } catch (...) {
    std::error_code ec;
    for (const fs::path& t : temps) fs::remove(t, ec);
    throw;
  }
  return m;
}

/// Re-hashes the inventory; returns the names of files whose hash differs.
inline std::vector<std::string> verify_manifest(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw ConfigError("no manifest.json in " + dir.string());
  nlohmann::json m;
  in >> m;
  std::vector<std::string> bad;
  for (const auto& f : m.at("files")) {
    const auto name = f.at("file").get<std::string>();
    if (sha256_hex(read_file_bytes(dir / name)) != f.at("sha256").get<std::string>())
      bad.push_back(name);
  }
  return bad;
}

}  // namespace speclaw::harness
