#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nmd/clustering.hpp"
#include "nmd/metrics.hpp"
#include "nmd/signal.hpp"
#include "nmd/spectral.hpp"
#include "nmd/types.hpp"

namespace nmd {

/// Shortest decimal form that parses back to the same double, so text
/// artifacts round-trip losslessly and are byte-stable across runs.
std::string format_double(double v);

/// "t,value" rows.
void write_signal_csv(std::ostream& out, const Signal& s);

/// "frequency,magnitude" rows.
void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumRow>& rows);

/// "epoch,loss" rows, epochs 1-based.
void write_loss_csv(std::ostream& out, const std::vector<double>& loss_history);

/// "t,imf1..imfK,residual,reconstruction,original" rows.
void write_decomposition_csv(std::ostream& out, const Vec& times,
                             const std::vector<Vec>& imfs, const Vec& residual,
                             const Vec& reconstruction, const Vec& original);

/// A decomposition CSV read back: components = IMFs then residual.
struct DecompositionTable {
  Vec times;
  std::vector<Vec> imfs;
  Vec residual;
  Vec reconstruction;
  Vec original;
};

DecompositionTable read_decomposition_csv(std::istream& in);

/// True when the first line looks like a decomposition header rather than a
/// plain signal CSV.
bool looks_like_decomposition_header(const std::string& first_line);

/// Metrics document (JSON): io, mae, pe[], corr[] (null when undefined),
/// dominant_frequency[].
void write_metrics_json(std::ostream& out, const MetricsReport& report,
                        const std::vector<double>& dominant_frequency);

struct MetricsDocument {
  MetricsReport report;  // corr NaN where the document holds null
  std::vector<double> dominant_frequency;
};

MetricsDocument read_metrics_json(std::istream& in);

/// Sidecar for a decomposition run: band edges, per-mode data, config echo.
struct DecompositionMeta {
  std::vector<double> band_edges;
  std::vector<double> dominant_frequency;
  std::vector<std::pair<double, double>> dropped_bands;
  double nyquist = 0.0;
  std::vector<std::pair<std::string, std::string>> config_echo;  // key, value
};

void write_decomposition_meta_json(std::ostream& out, const DecompositionMeta& meta);

}  // namespace nmd
