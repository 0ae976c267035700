#include "rnnlab/rnn.hpp"

#include <stdexcept>

namespace rnnlab {

NetworkParams init_params(int n_hidden, double delta, std::uint64_t seed) {
  if (delta <= 0.0) {
    throw std::invalid_argument("initialization width delta must be > 0");
  }
  if (n_hidden < 1) {
    throw std::invalid_argument("n_hidden must be >= 1");
  }
  Rng rng = Rng::stream(seed, 0x696e6974);  // one stream, fixed fill order

  NetworkParams p;
  p.n_hidden = n_hidden;
  p.delta = delta;
  auto fill = [&rng](Mat& m, int rows, int cols, double width) {
    m.resize(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = rng.uniform(-width, width);
  };
  fill(p.w_hh, n_hidden, n_hidden, delta);
  fill(p.w_ih, n_hidden, kNumInputs, delta);
  fill(p.w_ho, kNumActions, n_hidden, 0.1);
  fill(p.w_hv, 1, n_hidden, 0.1);
  return p;
}

Vec step(const NetworkParams& p, const Vec& h, const Vec& input) {
  return (p.w_hh * h + p.w_ih * input).cwiseMax(0.0);
}

Mat step_batch(const NetworkParams& p, const Mat& h, const Mat& input) {
  return (p.w_hh * h + p.w_ih * input).cwiseMax(0.0);
}

Vec policy_logits(const NetworkParams& p, const Vec& h) { return p.w_ho * h; }

Vec softmax(const Vec& logits) {
  Vec z = logits.array() - logits.maxCoeff();
  Vec e = z.array().exp();
  return e / e.sum();
}

Vec policy_probs(const NetworkParams& p, const Vec& h) {
  return softmax(policy_logits(p, h));
}

double value(const NetworkParams& p, const Vec& h) {
  return (p.w_hv * h)(0);
}

namespace {

int pick_action(const Vec& probs, RolloutMode mode, Rng& rng) {
  if (mode == RolloutMode::Argmax) {
    int best = 0;
    probs.maxCoeff(&best);
    return best;
  }
  double u = rng.uniform();
  double acc = 0.0;
  for (int a = 0; a < probs.size(); ++a) {
    acc += probs[a];
    if (u < acc) return a;
  }
  return static_cast<int>(probs.size()) - 1;
}

}  // namespace

TrialRollout rollout_inputs(const NetworkParams& p, const TrialInputs& trial,
                            RolloutMode mode, Rng& rng) {
  const int total = static_cast<int>(trial.stage_of_step.size());
  const int n = p.n_hidden;

  TrialRollout r;
  r.inputs.resize(total, kNumInputs);
  r.hidden.resize(total, n);
  r.logits.resize(total, kNumActions);
  r.actions.resize(total);
  r.rewards.resize(total);
  r.stage_of_step.resize(total);
  r.correct_action = trial.correct_action;

  Vec h = Vec::Zero(n);
  int t = 0;
  for (; t < total; ++t) {
    const Stage stage = trial.stage_of_step[t];
    const Vec u = trial.inputs.row(t).transpose();
    h = step(p, h, u);
    const Vec logits = policy_logits(p, h);
    const int action = pick_action(softmax(logits), mode, rng);

    r.inputs.row(t) = u.transpose();
    r.hidden.row(t) = h.transpose();
    r.logits.row(t) = logits.transpose();
    r.actions[t] = action;
    r.stage_of_step[t] = stage;

    bool abort = false;
    r.rewards[t] = step_reward(stage, action, trial.correct_action, &abort);
    if (abort) {
      ++t;
      r.aborted = true;
      break;
    }
  }
  r.steps = t;
  if (t < total) {
    r.inputs.conservativeResize(t, Eigen::NoChange);
    r.hidden.conservativeResize(t, Eigen::NoChange);
    r.logits.conservativeResize(t, Eigen::NoChange);
    r.actions.conservativeResize(t);
    r.rewards.conservativeResize(t);
    r.stage_of_step.resize(t);
  }
  return r;
}

TrialRollout rollout(const NetworkParams& p, const TrialSpec& spec,
                     RolloutMode mode, Rng& rng) {
  TrialInputs trial = generate_trial(spec, rng);
  return rollout_inputs(p, trial, mode, rng);
}

}  // namespace rnnlab
