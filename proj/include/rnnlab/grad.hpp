#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "rnnlab/rnn.hpp"
#include "rnnlab/types.hpp"

namespace rnnlab {

// Raised when a forward replay produces a non-finite activation.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, int step)
      : std::runtime_error(what + " at step " + std::to_string(step)),
        step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

struct ParamGrads {
  Mat w_hh, w_ih, w_ho, w_hv;

  static ParamGrads zeros(int n_hidden);
  void add(const ParamGrads& o);
  void scale(double s);
  double global_norm() const;
};

// Scales grads in place so the global norm does not exceed max_norm;
// direction is preserved. Returns the pre-clip norm.
double clip_global_norm(ParamGrads& g, double max_norm);

// Forward tape over a batch of episodes, padded to the longest one.
// Step t holds the inputs consumed at t and the states they produce;
// alive(b, t) is 1 while episode b is still running.
struct EpisodeTape {
  std::vector<Mat> inputs;  // t_max entries, 7 x batch
  std::vector<Mat> hidden;  // t_max entries, N x batch
  Eigen::ArrayXXd alive;    // batch x t_max
  std::vector<int> lengths;

  int batch() const { return static_cast<int>(lengths.size()); }
  int t_max() const { return static_cast<int>(inputs.size()); }
};

// Builds the tape by replaying the recurrent dynamics over the given input
// sequences. Throws NumericError on non-finite activations.
EpisodeTape forward_tape(const NetworkParams& p,
                         const std::vector<const Mat*>& episode_inputs);

// Exact reverse-mode gradient through the tape. d_logits[t] (3 x batch) and
// d_values[t] (1 x batch) carry the loss gradient at each head, already
// weighted and masked; either may be empty.
ParamGrads bptt_backward(const NetworkParams& p, const EpisodeTape& tape,
                         const std::vector<Mat>& d_logits,
                         const std::vector<Mat>& d_values);

// Mean cross-entropy over all recorded steps of all episodes, with
// per-episode integer targets. Gradient is written to *out when non-null.
double cross_entropy_loss(const NetworkParams& p,
                          const std::vector<const Mat*>& episode_inputs,
                          const std::vector<const VecI*>& targets,
                          ParamGrads* out);

struct PpoEpisodeData {
  Mat inputs;          // steps x 7
  VecI actions;        // steps
  Vec old_log_probs;   // steps
  Vec advantages;      // steps (normalized per update by the trainer)
  Vec returns;         // steps
  int steps = 0;
};

struct PpoCoeffs {
  double clip_eps = 0.2;
  double value_coef = 0.5;
  double entropy_coef = 0.0;
};

struct PpoLossParts {
  double policy = 0.0;
  double value = 0.0;
  double entropy = 0.0;   // mean policy entropy (nats)
  double total = 0.0;
};

// Clipped-surrogate PPO loss: mean over steps of
//   -min(rho A, clip(rho, 1-eps, 1+eps) A) + value_coef (v - G)^2
//   - entropy_coef H(pi).
PpoLossParts ppo_loss(const NetworkParams& p,
                      const std::vector<const PpoEpisodeData*>& episodes,
                      const PpoCoeffs& c, ParamGrads* out);

}  // namespace rnnlab
