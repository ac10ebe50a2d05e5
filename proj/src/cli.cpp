#include "nmd/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "nmd/errors.hpp"
#include "nmd/io.hpp"
#include "nmd/metrics.hpp"
#include "nmd/spectral.hpp"

namespace nmd {

namespace fs = std::filesystem;

namespace {

const std::map<std::string, SyntheticSignal> kSignalNames = {
    {"xlambda", SyntheticSignal::kXLambda},
    {"xp", SyntheticSignal::kXP},
    {"x1", SyntheticSignal::kX1},
    {"x2", SyntheticSignal::kX2},
};

std::string open_range(double lo, double hi) {
  return "value must be in (" + std::to_string(lo) + ", " + std::to_string(hi) + ")";
}

/// Removes every output it saw unless the run reached commit().
class ArtifactGuard {
 public:
  ~ArtifactGuard() {
    if (committed_) return;
    for (const auto& p : paths_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }

  std::ofstream open(const fs::path& p) {
    paths_.push_back(p);
    std::ofstream out(p);
    if (!out) throw InputError("cannot open output file " + p.string());
    return out;
  }

  void commit() { committed_ = true; }

 private:
  std::vector<fs::path> paths_;
  bool committed_ = false;
};

Signal read_signal_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();

  // layout by field count of the first line (a header counts the same way)
  std::string first_line;
  std::getline(buffer, first_line);
  const auto layout = first_line.find(',') == std::string::npos
                          ? CsvLayout::kValueOnly
                          : CsvLayout::kTimeAndValue;
  buffer.clear();
  buffer.seekg(0);
  return ingest_csv(buffer, layout);
}

std::size_t spectrum_argmax(const std::vector<SpectrumRow>& rows) {
  std::size_t top = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].magnitude > rows[top].magnitude) top = i;
  }
  return top;
}

int run_synth(const RunConfig& c) {
  const Signal s = synthesize(c.signal_kind, c.n, c.noise, c.seed);
  ArtifactGuard guard;
  auto out = guard.open(c.out_path);
  write_signal_csv(out, s);
  guard.commit();
  std::cout << "wrote " << s.size() << " samples to " << c.out_path << "\n";
  return 0;
}

int run_decompose(const RunConfig& c) {
  const Signal raw = read_signal_file(c.input_path);
  auto [grid_signal, norm] = normalize_to_grid(raw);
  const Index n = grid_signal.size();

  FnnConfig fnn_config = c.fnn;
  fnn_config.seed = c.seed;
  TrainConfig train_config = c.train;
  train_config.seed = c.seed;

  FnnModel model = init_model(n, fnn_config);
  model.norm = norm;
  auto [trained, report] = train(std::move(model), grid_signal, train_config);
  trained.norm = norm;

  const auto points = frequency_points(trained, grid_signal.times);
  const auto primaries = select_primary(points, c.cluster.energy_threshold);
  const auto clusters = merge_clusters(primaries, c.cluster);
  const double nyquist = static_cast<double>(n / 2);
  const auto edges = division_points(clusters, nyquist);
  DecompositionResult result = assemble_imfs(trained, grid_signal.times, edges);

  for (const auto& [lo, hi] : result.dropped_bands) {
    std::cerr << "warning: band [" << format_double(lo) << ", " << format_double(hi)
              << ") contains no units, dropped\n";
  }

  // back to original units; the offset belongs to the residual so that the
  // components still sum to the reconstruction
  const double scale = norm.value_scale();
  std::vector<Vec> components;
  components.reserve(result.imfs.size() + 1);
  for (const auto& imf : result.imfs) components.push_back(imf * scale);
  components.push_back((norm.x_min + result.residual.array() * scale).matrix());
  const Vec reconstruction = (norm.x_min + result.reconstruction.array() * scale).matrix();

  const MetricsReport metrics = compute_metrics(components, raw.values);

  DecompositionMeta meta;
  meta.band_edges = result.band_edges;
  meta.dominant_frequency = result.dominant_frequency;
  meta.dropped_bands = result.dropped_bands;
  meta.nyquist = nyquist;
  meta.config_echo = {
      {"n", std::to_string(n)},
      {"seed", std::to_string(c.seed)},
      {"lambda", format_double(train_config.lambda)},
      {"learning_rate", format_double(train_config.learning_rate)},
      {"momentum", format_double(train_config.momentum)},
      {"max_epochs", std::to_string(train_config.max_epochs)},
      {"energy_threshold", format_double(c.cluster.energy_threshold)},
      {"radius", format_double(c.cluster.radius)},
      {"merge_threshold", format_double(c.cluster.merge_threshold)},
      {"unit_cap", std::to_string(fnn_config.unit_cap)},
      {"hidden_amp", std::to_string(fnn_config.hidden_amp)},
      {"hidden_res", std::to_string(fnn_config.hidden_res)},
  };

  fs::create_directories(c.out_dir);
  ArtifactGuard guard;
  {
    auto out = guard.open(fs::path(c.out_dir) / "decomposition.csv");
    std::vector<Vec> imfs_raw(components.begin(), components.end() - 1);
    write_decomposition_csv(out, raw.times, imfs_raw, components.back(),
                            reconstruction, raw.values);
  }
  {
    auto out = guard.open(fs::path(c.out_dir) / "metrics.json");
    write_metrics_json(out, metrics, result.dominant_frequency);
  }
  {
    auto out = guard.open(fs::path(c.out_dir) / "decomposition_meta.json");
    write_decomposition_meta_json(out, meta);
  }
  {
    auto out = guard.open(fs::path(c.out_dir) / "checkpoint.json");
    save_model(trained, out);
  }
  {
    auto out = guard.open(fs::path(c.out_dir) / "loss_history.csv");
    write_loss_csv(out, report.loss_history);
  }
  guard.commit();

  std::cout << result.imfs.size() << " IMFs";
  if (!result.dominant_frequency.empty()) {
    std::cout << " (dominant frequencies:";
    for (const double f : result.dominant_frequency) std::cout << ' ' << format_double(f);
    std::cout << ')';
  }
  std::cout << ", " << report.epochs_run << " epochs, io "
            << format_double(metrics.io) << ", mae " << format_double(metrics.mae)
            << "\n";
  return 0;
}

int run_spectrum(const RunConfig& c) {
  std::ifstream in(c.input_path);
  if (!in) throw InputError("cannot open input file " + c.input_path);
  std::string first_line;
  std::getline(in, first_line);
  if (!first_line.empty() && first_line.back() == '\r') first_line.pop_back();
  in.clear();
  in.seekg(0);

  ArtifactGuard guard;
  if (looks_like_decomposition_header(first_line)) {
    if (c.out_dir.empty()) {
      throw UsageError("spectrum: --out-dir is required for a decomposition input");
    }
    const DecompositionTable table = read_decomposition_csv(in);
    fs::create_directories(c.out_dir);
    for (std::size_t k = 0; k < table.imfs.size(); ++k) {
      auto out = guard.open(fs::path(c.out_dir) /
                            ("spectrum_imf" + std::to_string(k + 1) + ".csv"));
      write_spectrum_csv(out, magnitude_spectrum(table.imfs[k], c.zero_mean));
    }
    guard.commit();
    std::cout << "wrote " << table.imfs.size() << " spectra to " << c.out_dir << "\n";
  } else {
    in.clear();
    in.seekg(0);
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string probe;
    std::getline(buffer, probe);
    buffer.clear();
    buffer.seekg(0);
    const auto layout = probe.find(',') == std::string::npos
                            ? CsvLayout::kValueOnly
                            : CsvLayout::kTimeAndValue;
    const Signal s = ingest_csv(buffer, layout);
    fs::path out_path = c.out_path;
    if (out_path.empty()) {
      fs::create_directories(c.out_dir);
      out_path = fs::path(c.out_dir) / "spectrum.csv";
    }
    auto out = guard.open(out_path);
    write_spectrum_csv(out, magnitude_spectrum(s.values, c.zero_mean));
    guard.commit();
    std::cout << "wrote spectrum to " << out_path.string() << "\n";
  }
  return 0;
}

int run_extrapolate(const RunConfig& c) {
  std::ifstream in(c.checkpoint_path);
  if (!in) throw InputError("cannot open checkpoint " + c.checkpoint_path);
  const FnnModel model = load_model(in);

  double step = c.step;
  if (step <= 0.0) {
    step = (model.norm.t_max - model.norm.t_min) / static_cast<double>(model.n_train);
  }
  const Signal out_signal = extrapolate(model, model.norm, c.horizon, step);

  ArtifactGuard guard;
  auto out = guard.open(c.out_path);
  write_signal_csv(out, out_signal);
  guard.commit();
  std::cout << "wrote " << out_signal.size() << " extrapolated samples to "
            << c.out_path << "\n";
  return 0;
}

int run_eval(const RunConfig& c) {
  std::ifstream in(c.input_path);
  if (!in) throw InputError("cannot open input file " + c.input_path);
  const DecompositionTable table = read_decomposition_csv(in);

  std::vector<Vec> components = table.imfs;
  components.push_back(table.residual);
  const MetricsReport metrics = compute_metrics(components, table.original);

  std::vector<double> dominant;
  dominant.reserve(table.imfs.size());
  for (const auto& imf : table.imfs) {
    const auto spectrum = magnitude_spectrum(imf, false);
    dominant.push_back(spectrum[spectrum_argmax(spectrum)].frequency);
  }

  ArtifactGuard guard;
  auto out = guard.open(c.out_path);
  write_metrics_json(out, metrics, dominant);
  guard.commit();
  std::cout << "io " << format_double(metrics.io) << ", mae "
            << format_double(metrics.mae) << "\n";
  return 0;
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args) {
  RunConfig config;

  CLI::App app{"Mode decomposition by Fourier neural network and frequency clustering"};
  app.require_subcommand(1);

  const auto to_double = [](const std::string& s, double& v) {
    try {
      std::size_t used = 0;
      v = std::stod(s, &used);
      return used == s.size();
    } catch (const std::exception&) {
      return false;
    }
  };
  const auto positive = [to_double](const std::string& flag) {
    return CLI::Validator(
        [flag, to_double](std::string& s) -> std::string {
          double v = 0.0;
          if (!to_double(s, v)) return flag + ": not a number";
          return v > 0.0 ? "" : flag + ": value must be positive";
        },
        "POSITIVE");
  };
  const auto open_unit = [to_double](const std::string& flag, bool closed_hi) {
    return CLI::Validator(
        [flag, closed_hi, to_double](std::string& s) -> std::string {
          double v = 0.0;
          if (!to_double(s, v)) return flag + ": not a number";
          const bool ok = v > 0.0 && (closed_hi ? v <= 1.0 : v < 1.0);
          return ok ? "" : flag + ": " + open_range(0.0, 1.0);
        },
        "RANGE");
  };

  std::string signal_name = "xp";

  auto* synth = app.add_subcommand("synth", "Write a synthetic signal CSV");
  synth->add_option("--signal", signal_name, "xlambda|xp|x1|x2")
      ->check(CLI::IsMember(
          std::vector<std::string>{"xlambda", "xp", "x1", "x2"}));
  synth->add_option("--n", config.n, "sample count (>= 16)")
      ->check(CLI::Range(static_cast<Index>(16), static_cast<Index>(1) << 24));
  synth->add_option("--noise", config.noise, "gaussian noise sigma")
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--seed", config.seed, "rng seed");
  synth->add_option("--out", config.out_path, "output CSV path")->required();

  auto* decompose = app.add_subcommand("decompose", "Train, cluster and export IMFs");
  decompose->add_option("--input", config.input_path, "signal CSV")->required();
  decompose->add_option("--out-dir", config.out_dir, "artifact directory")->required();
  decompose->add_option("--seed", config.seed, "rng seed");
  decompose->add_option("--lambda", config.train.lambda, "l1 weight")
      ->check(CLI::NonNegativeNumber);
  decompose
      ->add_option("--energy-threshold", config.cluster.energy_threshold,
                   "primary energy share P, in (0,1)")
      ->check(open_unit("--energy-threshold", false));
  decompose->add_option("--radius", config.cluster.radius, "circle radius in cycles")
      ->check(positive("--radius"));
  decompose
      ->add_option("--merge-threshold", config.cluster.merge_threshold,
                   "similarity needed to merge, in (0,1]")
      ->check(open_unit("--merge-threshold", true));
  decompose->add_option("--lr", config.train.learning_rate, "learning rate")
      ->check(positive("--lr"));
  decompose->add_option("--momentum", config.train.momentum, "nesterov momentum in [0,1)")
      ->check(CLI::Range(0.0, 1.0 - 1e-12));
  decompose->add_option("--epochs", config.train.max_epochs, "max training epochs")
      ->check(CLI::NonNegativeNumber);
  decompose->add_option("--unit-cap", config.fnn.unit_cap, "max AM units")
      ->check(CLI::Range(static_cast<Index>(2), static_cast<Index>(1) << 24));
  decompose->add_option("--hidden-amp", config.fnn.hidden_amp, "amplitude hidden size")
      ->check(CLI::PositiveNumber);
  decompose->add_option("--hidden-res", config.fnn.hidden_res, "residual hidden size")
      ->check(CLI::PositiveNumber);
  decompose
      ->add_option("--stop-window", config.train.stop_window,
                   "early-stop window, epochs")
      ->check(CLI::PositiveNumber);
  decompose->add_option("--stop-tol", config.train.stop_rel_improvement,
                        "early-stop relative improvement")
      ->check(CLI::NonNegativeNumber);

  auto* spectrum = app.add_subcommand("spectrum", "Magnitude spectrum of a CSV");
  spectrum->add_option("--input", config.input_path, "signal or decomposition CSV")
      ->required();
  spectrum->add_option("--out", config.out_path, "output CSV (signal input)");
  spectrum->add_option("--out-dir", config.out_dir,
                       "output directory (decomposition input)");
  spectrum->add_flag("--zero-mean", config.zero_mean, "subtract the mean first");

  auto* extrapolate = app.add_subcommand("extrapolate", "Evaluate past the window");
  extrapolate->add_option("--checkpoint", config.checkpoint_path, "checkpoint path")
      ->required();
  extrapolate->add_option("--horizon", config.horizon, "time span to extend")
      ->required()
      ->check(positive("--horizon"));
  extrapolate->add_option("--step", config.step, "sampling step (default: grid step)")
      ->check(positive("--step"));
  extrapolate->add_option("--out", config.out_path, "output CSV path")->required();

  auto* eval = app.add_subcommand("eval", "Recompute metrics from a decomposition CSV");
  eval->add_option("--input", config.input_path, "decomposition CSV")->required();
  eval->add_option("--out", config.out_path, "metrics JSON path")->required();

  std::vector<const char*> argv;
  argv.push_back("nmd");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (synth->parsed()) {
    config.command = RunConfig::Command::kSynth;
    config.signal_kind = kSignalNames.at(signal_name);
  } else if (decompose->parsed()) {
    config.command = RunConfig::Command::kDecompose;
  } else if (spectrum->parsed()) {
    config.command = RunConfig::Command::kSpectrum;
    if (config.out_path.empty() && config.out_dir.empty()) {
      throw UsageError("spectrum: one of --out or --out-dir is required");
    }
  } else if (extrapolate->parsed()) {
    config.command = RunConfig::Command::kExtrapolate;
  } else if (eval->parsed()) {
    config.command = RunConfig::Command::kEval;
  }
  return config;
}

int run(const RunConfig& config) {
  switch (config.command) {
    case RunConfig::Command::kSynth:
      return run_synth(config);
    case RunConfig::Command::kDecompose:
      return run_decompose(config);
    case RunConfig::Command::kSpectrum:
      return run_spectrum(config);
    case RunConfig::Command::kExtrapolate:
      return run_extrapolate(config);
    case RunConfig::Command::kEval:
      return run_eval(config);
  }
  return 2;
}

}  // namespace nmd
