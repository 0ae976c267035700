#pragma once

#include <vector>

#include "rnnlab/task.hpp"
#include "rnnlab/types.hpp"

namespace rnnlab {

// Weights of the vanilla ReLU network h' = ReLU(W_hh h + W_ih u) with the
// linear policy readout W_ho and the value readout W_hv used only by the
// reinforcement trainer.
struct NetworkParams {
  Mat w_hh;  // N x N
  Mat w_ih;  // N x 7
  Mat w_ho;  // 3 x N
  Mat w_hv;  // 1 x N
  int n_hidden = 0;
  double delta = 0.0;
};

// Recurrent and input weights i.i.d. U(-delta, delta), readouts U(-0.1, 0.1).
NetworkParams init_params(int n_hidden, double delta, std::uint64_t seed);

// One state update. The state stays elementwise nonnegative.
Vec step(const NetworkParams& p, const Vec& h, const Vec& input);

// Column-batched update: columns of h are independent states, columns of
// input the matching inputs.
Mat step_batch(const NetworkParams& p, const Mat& h, const Mat& input);

Vec policy_logits(const NetworkParams& p, const Vec& h);
Vec softmax(const Vec& logits);
Vec policy_probs(const NetworkParams& p, const Vec& h);
double value(const NetworkParams& p, const Vec& h);

enum class RolloutMode { Sample, Argmax };

struct TrialRollout {
  Mat inputs;   // steps x 7
  Mat hidden;   // steps x N, row t is the state after consuming input t
  Mat logits;   // steps x 3
  VecI actions; // steps
  Vec rewards;  // steps
  std::vector<Stage> stage_of_step;
  int correct_action = kActFixate;
  bool aborted = false;
  int steps = 0;  // == sum of stage lengths unless aborted

  int decision_action() const {
    if (aborted || steps == 0) return -1;
    return actions[steps - 1];
  }
  double total_reward() const { return rewards.head(steps).sum(); }
};

// Runs a trial start to finish (or to fixation break). The trial's input
// noise is drawn before any action sampling, so Sample and Argmax modes see
// identical inputs for the same rng stream.
TrialRollout rollout(const NetworkParams& p, const TrialSpec& spec,
                     RolloutMode mode, Rng& rng);

// Same rollout dynamics for a precomputed input sequence.
TrialRollout rollout_inputs(const NetworkParams& p, const TrialInputs& trial,
                            RolloutMode mode, Rng& rng);

}  // namespace rnnlab
