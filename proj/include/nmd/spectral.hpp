#pragma once

#include <optional>
#include <vector>

#include "nmd/types.hpp"

namespace nmd {

/// Real-coefficient harmonic decomposition of a series sampled on the
/// half-open grid t_i = i/N:
///
///   x(t) = constant
///        + sum_k [ sin_coef_k * sin(2 pi k t) + cos_coef_k * cos(2 pi k t) ]
///        + nyquist_coef * cos(pi N t)                    (even N only)
///
/// with k = 1 .. floor(N/2) - (N even ? 1 : 0). This is the conjugate-paired
/// form of the standard DFT, so reconstructing on the original grid is an
/// identity up to float noise.
struct HarmonicBasis {
  struct Entry {
    int k = 0;  // cycles over [0, 1)
    double sin_coef = 0.0;
    double cos_coef = 0.0;
  };

  double constant = 0.0;
  std::vector<Entry> entries;
  std::optional<double> nyquist_coef;
  Index n_samples = 0;
};

/// One spectrum bin: frequency in cycles per unit normalized time.
struct SpectrumRow {
  double frequency = 0.0;
  double magnitude = 0.0;
};

/// Projects a series of length N >= 4 onto the harmonic basis above.
HarmonicBasis real_harmonic_decomposition(const Vec& values);

/// Evaluates the basis sum at arbitrary (possibly off-grid) times.
Vec reconstruct_from_basis(const HarmonicBasis& basis, const Vec& times);

/// Single-sided amplitude spectrum, one row per bin k = 0 .. floor(N/2):
/// magnitude 2|X_k|/N, except |X_k|/N at DC and (even N) Nyquist. With
/// zero_mean the series mean is subtracted first.
std::vector<SpectrumRow> magnitude_spectrum(const Vec& values, bool zero_mean);

}  // namespace nmd
