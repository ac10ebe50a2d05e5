#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "nmd/fnn.hpp"
#include "nmd/signal.hpp"
#include "nmd/types.hpp"

namespace nmd {

struct TrainConfig {
  double learning_rate = 0.01;
  double momentum = 0.9;             // in [0, 1)
  Index max_epochs = 5000;
  double lambda = 0.1;               // l1 weight on the amplitude net
  double stop_rel_improvement = 1e-7;
  Index stop_window = 100;           // epochs
  std::uint64_t seed = 0;
};

struct TrainReport {
  std::vector<double> loss_history;  // one entry per epoch run
  Index epochs_run = 0;
  bool stopped_early = false;
};

/// One Nesterov update given the gradient already evaluated at the lookahead
/// point params + momentum * velocity:
///   velocity' = momentum * velocity - learning_rate * grad
///   params'   = params + velocity'
void nesterov_step(Vec& params, Vec& velocity, const Vec& grad_at_lookahead,
                   double learning_rate, double momentum);

/// Full-batch training of the model on a normalized signal. Stops at
/// max_epochs, or early once the relative loss improvement over the trailing
/// stop_window epochs falls below stop_rel_improvement. Throws
/// DivergenceError when the loss stops being finite.
std::pair<FnnModel, TrainReport> train(FnnModel model, const Signal& signal,
                                       const TrainConfig& config);

}  // namespace nmd
