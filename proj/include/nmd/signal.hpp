#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>

#include "nmd/types.hpp"

namespace nmd {

/// A sampled time series. `times` and `values` always have equal length.
struct Signal {
  Vec times;
  Vec values;

  Index size() const { return values.size(); }
};

/// Affine maps that brought a signal onto the unit square. `t_max` is the end
/// of the (half-open) time window, so `denorm_time` continues an evenly
/// sampled grid past the last observation without a seam.
struct NormParams {
  double t_min = 0.0;
  double t_max = 1.0;
  double x_min = 0.0;
  double x_max = 1.0;

  double norm_time(double t) const { return (t - t_min) / (t_max - t_min); }
  double denorm_time(double tau) const { return t_min + tau * (t_max - t_min); }
  double norm_value(double x) const { return (x - x_min) / (x_max - x_min); }
  double denorm_value(double v) const { return x_min + v * (x_max - x_min); }
  double value_scale() const { return x_max - x_min; }
};

enum class CsvLayout { kValueOnly, kTimeAndValue };

enum class SyntheticSignal { kXLambda, kXP, kX1, kX2 };

/// Checks the decomposition-input contract: at least 4 samples, strictly
/// increasing times, all values finite. Throws InputError on violation.
void validate_signal(const Signal& s);

/// Reads a one- or two-column numeric CSV ('.' decimals, LF or CRLF rows).
/// A single non-numeric first row is treated as a header and skipped. With
/// kValueOnly the sample index 0..N-1 becomes the time column.
Signal ingest_csv(std::istream& in, CsvLayout layout);

/// Min-max maps both axes onto [0, 1]. Throws InputError for a constant
/// value series, whose decomposition is degenerate.
std::pair<Signal, NormParams> normalize(const Signal& s);

/// Inverse of the value map: v -> x_min + v * (x_max - x_min).
Vec denormalize(const Vec& series, const NormParams& p);

/// Training-domain view of a signal: values min-max normalized, times
/// replaced by the half-open uniform grid i/N (the sampling model every
/// harmonic in this library is phrased in). The returned NormParams place
/// t_max one mean sample spacing past the last observation, so that
/// denorm_time(i/N) lands back on an evenly spaced input grid exactly.
std::pair<Signal, NormParams> normalize_to_grid(const Signal& s);

/// The noiseless closed form of a synthetic test signal at time t.
double synthetic_value(SyntheticSignal kind, double t);

/// Samples a synthetic signal on t_i = i/N, optionally with i.i.d. gaussian
/// noise of standard deviation noise_sigma drawn from Rng(seed). Requires
/// n >= 16.
Signal synthesize(SyntheticSignal kind, Index n, double noise_sigma,
                  std::uint64_t seed);

}  // namespace nmd
