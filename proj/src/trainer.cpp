#include "nmd/trainer.hpp"

#include <cmath>

#include "nmd/errors.hpp"

namespace nmd {

void nesterov_step(Vec& params, Vec& velocity, const Vec& grad_at_lookahead,
                   double learning_rate, double momentum) {
  velocity = momentum * velocity - learning_rate * grad_at_lookahead;
  params += velocity;
}

std::pair<FnnModel, TrainReport> train(FnnModel model, const Signal& signal,
                                       const TrainConfig& config) {
  TrainReport report;
  if (config.max_epochs == 0) {
    return {std::move(model), std::move(report)};
  }
  report.loss_history.reserve(static_cast<std::size_t>(config.max_epochs));

  Vec params = model.flatten();
  Vec velocity = Vec::Zero(params.size());
  FnnModel scratch = model;  // evaluated at the lookahead point each epoch

  for (Index epoch = 0; epoch < config.max_epochs; ++epoch) {
    scratch.unflatten(params + config.momentum * velocity);
    auto [loss, grads] = loss_and_gradients(scratch, signal, config.lambda);

    if (!std::isfinite(loss)) {
      throw DivergenceError("train: loss became non-finite at epoch " +
                                std::to_string(epoch + 1),
                            epoch + 1);
    }

    nesterov_step(params, velocity, grads.flatten(), config.learning_rate,
                  config.momentum);
    report.loss_history.push_back(loss);
    report.epochs_run = epoch + 1;

    if (epoch + 1 > config.stop_window) {
      const double before =
          report.loss_history[static_cast<std::size_t>(epoch - config.stop_window)];
      const double improvement =
          (before - loss) / std::max(std::abs(before), 1e-300);
      if (improvement < config.stop_rel_improvement) {
        report.stopped_early = true;
        break;
      }
    }
  }

  model.unflatten(params);
  return {std::move(model), std::move(report)};
}

}  // namespace nmd
