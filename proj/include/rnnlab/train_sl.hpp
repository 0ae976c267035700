#pragma once

#include "rnnlab/grad.hpp"
#include "rnnlab/train_common.hpp"

namespace rnnlab {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double learning_rate = 0.0003;
  double epsilon = 1e-8;
  double max_grad_norm = 0.5;
  int batch_size = 64;
  int eval_interval = 50;
  int probe_trials = 500;
  double accuracy_target = 0.95;
  int max_updates = 5000;
  int checkpoint_interval = 0;  // 0: no periodic checkpoints
};

struct AdamState {
  ParamGrads m, v;
  long t = 0;

  static AdamState zeros(int n_hidden) {
    return {ParamGrads::zeros(n_hidden), ParamGrads::zeros(n_hidden), 0};
  }
};

// Fixation target everywhere except the final decision step.
VecI sl_targets(const TrialInputs& trial);

// Clips the gradient to max_grad_norm, then applies one bias-corrected Adam
// update in place.
void adam_step(NetworkParams& params, ParamGrads grads, AdamState& state,
               const AdamConfig& cfg);

// Adam on cross-entropy over fresh trial batches until the probe accuracy
// reaches the target or the update budget runs out.
TrainResult train_supervised(const NetworkParams& init, const TaskSetup& setup,
                             const AdamConfig& cfg, std::uint64_t seed,
                             const CheckpointHook& hook = nullptr);

}  // namespace rnnlab
