// speclaw: sample random graphs, compute spectra and distances, run sweeps.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "speclaw/harness/check.hpp"
#include "speclaw/harness/config.hpp"
#include "speclaw/harness/sweep.hpp"
#include "speclaw/harness/svg.hpp"
#include "speclaw/speclaw.hpp"

namespace {

using namespace speclaw;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Graph source shared by sample / spectrum / trace-stat / distance.
struct GraphSource {
  std::string edges_file;
  std::string model;
  std::size_t n = 0;
  std::optional<double> p;
  std::string weights_file;
  std::uint64_t seed = 0;
  std::uint64_t cell = 0;
  std::uint64_t replicate = 0;

  void add_options(CLI::App* cmd, bool allow_edges) {
    if (allow_edges) cmd->add_option("--edges", edges_file, "Edge-list file (v1 format)");
    cmd->add_option("--model", model, "Sample a graph: er or cl")->check(CLI::IsMember({"er", "cl"}));
    cmd->add_option("--n", n, "Vertex count (er)");
    cmd->add_option("--p", p, "Edge probability (er)");
    cmd->add_option("--weights", weights_file, "Weight file, one positive decimal per line (cl)");
    cmd->add_option("--seed", seed, "Master seed");
    cmd->add_option("--cell", cell, "Cell index of the stream");
    cmd->add_option("--replicate", replicate, "Replicate index of the stream");
  }

  std::optional<ChungLuSpec> chung_lu() const {
    if (weights_file.empty()) return std::nullopt;
    return ChungLuSpec(read_weights_file(weights_file), "file(" + weights_file + ")");
  }

  GraphSample load() const {
    if (!edges_file.empty()) {
      if (!model.empty()) throw UsageError("--edges and --model are mutually exclusive");
      return read_edge_list_file(edges_file);
    }
    const SeedPath path{seed, cell, replicate};
    if (model == "er") {
      if (n == 0 || !p) throw UsageError("--model er needs --n and --p");
      return sample_er(ErSpec{n, *p}, path);
    }
    if (model == "cl") {
      const auto spec = chung_lu();
      if (!spec) throw UsageError("--model cl needs --weights");
      return sample_chung_lu(*spec, path);
    }
    throw UsageError("give --edges FILE or --model er|cl");
  }

  ModelContext context(const GraphSample& g) const {
    ModelContext ctx;
    ctx.er_p = p;
    if (auto cl = chung_lu()) {
      if (cl->n() != g.n) throw ValidationError("weight file length differs from graph size");
      ctx.chung_lu = std::move(*cl);
    }
    return ctx;
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
}

int cmd_sample(const GraphSource& src, const std::string& out_path) {
  if (!src.edges_file.empty()) throw UsageError("sample takes model flags, not --edges");
  GraphSample g = src.load();
  std::ostringstream os;
  write_edge_list(os, g);
  write_text(out_path, os.str());
  std::ostream& info = (out_path.empty() || out_path == "-") ? std::cerr : std::cout;
  info << "n=" << g.n << " edges=" << g.edge_count() << " min_degree=" << g.min_degree()
       << " max_degree=" << g.max_degree() << " isolated=" << g.isolated_count() << '\n';
  return kExitOk;
}

int cmd_spectrum(const GraphSource& src, const std::string& matrix, const std::string& scale,
                 const std::string& out_path, const std::string& svg_path,
                 std::optional<std::size_t> bins, std::optional<double> bin_width) {
  const MatrixKind kind = parse_matrix_kind(matrix);
  const harness::SpectrumScale sc = harness::parse_scale(scale);
  const GraphSample g = src.load();
  const ModelContext ctx = src.context(g);
  const SpectralMeasure s = harness::scaled_spectrum(g, kind, sc, ctx);
  std::ostringstream os;
  write_spectrum_csv(os, s);
  write_text(out_path, os.str());
  if (!svg_path.empty()) {
    harness::HistogramOptions opt;
    opt.bins = bins;
    opt.bin_width = bin_width;
    opt.title = std::string(matrix_kind_name(kind)) + " scale=" + scale + " n=" + std::to_string(g.n);
    write_text(svg_path, harness::histogram_svg(s, opt));
  }
  return kExitOk;
}

SpectralMeasure read_spectrum_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open spectrum '" + path + "'");
  return read_spectrum_csv(in);
}

int cmd_distance(const GraphSource& src, const std::string& a, const std::string& b,
                 bool semicircle, const std::string& pair, const std::string& scale) {
  DistanceReport rep;
  if (!a.empty()) {
    const SpectralMeasure sa = read_spectrum_file(a);
    if (semicircle == !b.empty()) throw UsageError("give exactly one of --b or --semicircle");
    if (semicircle) {
      rep = distance_to_semicircle(sa);
    } else {
      const SpectralMeasure sb = read_spectrum_file(b);
      rep.ks = ks_distance(sa, sb);
      rep.w1 = w1_equal_size(sa, sb);
    }
  } else {
    if (pair.empty()) throw UsageError("give --a SPECTRUM or --pair er|cl with a graph");
    const GraphSample g = src.load();
    const ModelContext ctx = src.context(g);
    const harness::SpectrumScale sc = harness::parse_scale(scale);
    const ScaleShift ss = harness::spectrum_scale_shift(sc, g, ctx);
    DenseSymMatrix target, proxy;
    if (pair == "er") {
      target = build(g, MatrixKind::NormalizedLaplacian, ctx);
      proxy = build(g, MatrixKind::ProxyTildeL, ctx);
    } else if (pair == "cl") {
      target = build(g, MatrixKind::NormalizedAdjacency, ctx);
      proxy = build(g, MatrixKind::WeightNormalized, ctx);
    } else {
      throw UsageError("--pair must be er or cl");
    }
    rep = matrix_distance(apply_scale_shift(target, ss), apply_scale_shift(proxy, ss));
  }
  std::cout << rep.to_json() << '\n';
  return kExitOk;
}

int cmd_trace_stat(const GraphSource& src) {
  const GraphSample g = src.load();
  TraceStat t;
  if (auto cl = src.chung_lu()) {
    t = trace_stat_chung_lu(g, *cl);
  } else if (src.p) {
    t = trace_stat_er(g, *src.p);
  } else {
    throw UsageError("trace-stat needs --p (ER) or --weights (Chung-Lu)");
  }
  std::cout << t.to_json() << '\n';
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, std::optional<std::size_t> threads,
              const std::string& out_dir) {
  harness::SweepConfig cfg = harness::load_config(config_path);
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (cfg.output_dir.empty()) throw ValidationError("sweep: no output directory (outputs.dir or --out-dir)");
  harness::plan_cells(cfg);  // abort before sampling if any cell is invalid
  const auto started = std::chrono::system_clock::now();
  const harness::SweepResult r = harness::run_sweep(cfg, threads);
  const auto finished = std::chrono::system_clock::now();
  const harness::RunManifest m = harness::write_outputs(cfg, r, started, finished);
  std::cout << "cells=" << r.cells.size() << " replicates=" << cfg.replicates
            << " dir=" << cfg.output_dir << " files=" << m.doc["files"].size() + 1 << '\n';
  return kExitOk;
}

int cmd_fit(const std::string& csv_path, const std::string& mode) {
  std::ifstream in(csv_path);
  if (!in) throw ValidationError("cannot open '" + csv_path + "'");
  const FitMode fm = mode == "lemma1" ? FitMode::Lemma1 : FitMode::ChungLuKey;
  const SlopeFit f = fit_decay(read_decay_points(in), fm);
  std::cout << f.to_json() << '\n';
  return kExitOk;
}

int cmd_check(std::uint64_t seed, const std::string& fault) {
  harness::CheckOptions opt;
  opt.seed = seed;
  if (fault == "dbl-sign") {
    opt.inject_dbl_sign_fault = true;
  } else if (!fault.empty()) {
    throw UsageError("unknown fault '" + fault + "'");
  }
  const bool ok = harness::report_checks(std::cout, harness::run_checks(opt));
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"speclaw: spectra of normalized Laplacians of random graphs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", harness::kToolVersion);

  GraphSource src;
  std::string out_path, svg_path, matrix, scale = "none", a, b, pair, config, out_dir,
                                  mode = "lemma1", fault;
  bool semicircle = false;
  std::optional<std::size_t> bins, threads;
  std::optional<double> bin_width;
  std::uint64_t check_seed = harness::CheckOptions{}.seed;

  auto* sample = app.add_subcommand("sample", "Sample a graph and write an edge list");
  src.add_options(sample, false);
  sample->add_option("--out", out_path, "Output file (default stdout)");

  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of a graph matrix as CSV");
  src.add_options(spectrum, true);
  spectrum->add_option("--matrix", matrix, "Matrix kind")
      ->required()
      ->check(CLI::IsMember({"adjacency", "laplacian", "normalized-laplacian", "normalized-adjacency",
                             "proxy-tilde-l", "weight-normalized", "centered-c", "rank-one-rw",
                             "theorem-scaled"}));
  spectrum->add_option("--scale", scale, "none, theorem-er or theorem-cl")
      ->check(CLI::IsMember({"none", "theorem-er", "theorem-cl"}));
  spectrum->add_option("--out", out_path, "CSV output (default stdout)");
  spectrum->add_option("--svg", svg_path, "Histogram SVG with semicircle overlay");
  spectrum->add_option("--bins", bins, "Histogram bin count");
  spectrum->add_option("--bin-width", bin_width, "Histogram bin width");

  auto* distance = app.add_subcommand("distance", "KS / W1 / trace-bound distances as JSON");
  src.add_options(distance, true);
  distance->add_option("--a", a, "Spectrum CSV");
  distance->add_option("--b", b, "Second spectrum CSV");
  distance->add_flag("--semicircle", semicircle, "Compare --a with the semicircle law");
  distance->add_option("--pair", pair, "Compare target and proxy matrices of a graph: er or cl");
  distance->add_option("--scale", scale, "Scaling applied to both matrices")
      ->check(CLI::IsMember({"none", "theorem-er", "theorem-cl"}));

  auto* trace = app.add_subcommand("trace-stat", "Trace statistic and degree events as JSON");
  src.add_options(trace, true);

  auto* sweep = app.add_subcommand("sweep", "Run a Monte-Carlo sweep from a JSON config");
  sweep->add_option("config", config, "Sweep config file")->required();
  sweep->add_option("--threads", threads, "Worker threads (capped by SPECLAW_THREADS)");
  sweep->add_option("--out-dir", out_dir, "Override outputs.dir");

  auto* fit = app.add_subcommand("fit", "Log-log slope fit of a sweep summary CSV");
  fit->add_option("csv", config, "summary.csv")->required();
  fit->add_option("--mode", mode, "lemma1 or chunglu-key")
      ->check(CLI::IsMember({"lemma1", "chunglu-key"}));

  auto* check = app.add_subcommand("check", "Run deterministic property suites");
  check->add_option("--seed", check_seed, "Seed for the random cases");
  check->add_option("--inject-fault", fault, "Mutation sanity check (dbl-sign)")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*sample) return cmd_sample(src, out_path);
    if (*spectrum) return cmd_spectrum(src, matrix, scale, out_path, svg_path, bins, bin_width);
    if (*distance) return cmd_distance(src, a, b, semicircle, pair, scale);
    if (*trace) return cmd_trace_stat(src);
    if (*sweep) return cmd_sweep(config, threads, out_dir);
    if (*fit) return cmd_fit(config, mode);
    if (*check) return cmd_check(check_seed, fault);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitUsage;
}
