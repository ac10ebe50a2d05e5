#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>

#include "nmd/signal.hpp"
#include "nmd/types.hpp"

namespace nmd {

/// The sinusoid parameters of every amplitude-modulated unit. Initialized on
/// the harmonic grid (omega = 2 pi k) and fine-tuned by training.
struct FrequencyBank {
  Vec omegas;  // radians per unit normalized time
  Vec phis;    // radians
};

/// Three-layer perceptron from scalar time to one amplitude per unit,
/// rectified-linear hidden layer, linear output.
struct AmplitudeNet {
  Vec w1;  // hidden x 1
  Vec b1;  // hidden
  Mat w2;  // units x hidden
  Vec b2;  // units
};

/// Three-layer perceptron from scalar time to the scalar non-periodic part.
struct ResidualNet {
  Vec w1;  // hidden x 1
  Vec b1;  // hidden
  Vec w2;  // hidden (output row)
  double b2 = 0.0;
};

struct FnnConfig {
  Index hidden_amp = 64;
  Index hidden_res = 16;
  Index unit_cap = 512;
  std::uint64_t seed = 0;
};

/// The full model. Output at normalized time t is
///   sum_n amplitude_n(t) * sin(omega_n t + phi_n) + residual(t).
struct FnnModel {
  AmplitudeNet amplitude;
  FrequencyBank bank;
  ResidualNet residual;
  Index units = 0;    // H
  Index n_train = 0;  // sample count the bank was sized for
  NormParams norm;
  FnnConfig config;

  Index parameter_count() const;

  /// Packs all trainable parameters (amplitude w1, b1, w2 row-major, b2,
  /// omegas, phis, residual w1, b1, w2, b2) into one vector.
  Vec flatten() const;

  /// Inverse of flatten; shapes must already match.
  void unflatten(const Vec& packed);
};

/// Partial derivatives of the training loss, shape-matched to FnnModel.
struct Gradients {
  AmplitudeNet amplitude;
  FrequencyBank bank;
  ResidualNet residual;

  Vec flatten() const;
};

/// Forward-pass traces: one amplitude row and one AM-signal row per unit.
/// `output` is the column sum of am_signals plus the residual row.
struct AmUnitSeries {
  Mat amplitudes;   // H x N
  Mat am_signals;   // H x N
  Vec residual;     // N
  Vec output;       // N
};

/// Builds a model for an n_samples-point series: H = min(2*floor(n/2), cap)
/// units, paired per harmonic as a sine unit (omega = 2 pi k, phi = 0) and a
/// cosine unit (omega = 2 pi k, phi = pi/2); amplitude and residual
/// parameters i.i.d. uniform on [-0.01, 0.01] from Rng(seed).
FnnModel init_model(Index n_samples, const FnnConfig& config);

/// Evaluates the model at arbitrary normalized times (extrapolation allowed).
AmUnitSeries forward(const FnnModel& model, const Vec& times);

/// Overwrites the model's amplitude and residual parameters so that it
/// reproduces `grid_signal` exactly: hidden layers zeroed, amplitude output
/// biases set to the harmonic coefficients of the values, residual bias set
/// to the series mean. Requires times on the half-open grid i/N and a unit
/// cap that did not bind (H >= 2*floor(N/2)).
FnnModel load_dft_oracle(FnnModel model, const Signal& grid_signal);

/// MSE data term plus lambda * l1(amplitude parameters), with exact analytic
/// gradients (rectified-linear and l1 subgradients at 0 are 0).
std::pair<double, Gradients> loss_and_gradients(const FnnModel& model,
                                                const Signal& signal,
                                                double lambda);

/// Mean squared amplitude of each unit over the grid: (1/N) sum_i a_n(t_i)^2.
Vec unit_energies(const FnnModel& model, const Vec& times);

/// Evaluates the trained model past the training window. horizon and step are
/// in original (denormalized) time units; the result starts one grid step
/// after the last training sample and is denormalized on both axes.
Signal extrapolate(const FnnModel& model, const NormParams& norm,
                   double horizon, double step);

/// Writes/reads the versioned checkpoint document. Round-trips every
/// parameter losslessly, so a reloaded model's forward output is
/// bit-identical.
void save_model(const FnnModel& model, std::ostream& out);
FnnModel load_model(std::istream& in);

}  // namespace nmd
