#pragma once

#include "rnnlab/grad.hpp"
#include "rnnlab/train_common.hpp"

namespace rnnlab {

struct PpoConfig {
  double gamma = 0.99;
  double lambda_gae = 0.95;
  double clip_eps = 0.2;
  double entropy_coef = 0.0;
  double value_coef = 0.5;
  double learning_rate = 0.0003;
  double max_grad_norm = 0.5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int rollout_trials = 64;  // episodes collected per update
  int epochs = 10;
  int minibatch = 16;  // whole episodes, so BPTT stays exact
  int eval_interval = 10;
  int probe_trials = 500;
  double accuracy_target = 0.95;
  int max_updates = 2000;
  int checkpoint_interval = 0;
};

// Generalized advantage estimation over one episode. values has T+1 entries,
// the last being the bootstrap value (0 at terminal states).
void gae(const Vec& rewards, const Vec& values, double gamma, double lambda,
         Vec* advantages, Vec* returns);

// From-scratch PPO with whole-episode minibatches and a shared recurrent
// body under separate policy and value readouts.
TrainResult train_ppo(const NetworkParams& init, const TaskSetup& setup,
                      const PpoConfig& cfg, std::uint64_t seed,
                      const CheckpointHook& hook = nullptr);

}  // namespace rnnlab
