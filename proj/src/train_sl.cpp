#include "rnnlab/train_sl.hpp"

#include <cmath>

namespace rnnlab {

VecI sl_targets(const TrialInputs& trial) {
  const int total = static_cast<int>(trial.stage_of_step.size());
  VecI targets = VecI::Constant(total, kActFixate);
  targets[total - 1] = trial.correct_action;
  return targets;
}

namespace {

void adam_update_matrix(Mat& w, const Mat& g, Mat& m, Mat& v, double lr_t,
                        const AdamConfig& cfg) {
  m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
  v = cfg.beta2 * v.array().matrix() + (1.0 - cfg.beta2) * g.array().square().matrix();
  w.array() -= lr_t * m.array() / (v.array().sqrt() + cfg.epsilon);
}

}  // namespace

void adam_step(NetworkParams& params, ParamGrads grads, AdamState& state,
               const AdamConfig& cfg) {
  clip_global_norm(grads, cfg.max_grad_norm);
  state.t += 1;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));
  const double lr_t = cfg.learning_rate * std::sqrt(bc2) / bc1;
  adam_update_matrix(params.w_hh, grads.w_hh, state.m.w_hh, state.v.w_hh, lr_t, cfg);
  adam_update_matrix(params.w_ih, grads.w_ih, state.m.w_ih, state.v.w_ih, lr_t, cfg);
  adam_update_matrix(params.w_ho, grads.w_ho, state.m.w_ho, state.v.w_ho, lr_t, cfg);
  adam_update_matrix(params.w_hv, grads.w_hv, state.m.w_hv, state.v.w_hv, lr_t, cfg);
}

TrainResult train_supervised(const NetworkParams& init, const TaskSetup& setup,
                             const AdamConfig& cfg, std::uint64_t seed,
                             const CheckpointHook& hook) {
  TrainResult result;
  result.params = init;
  AdamState state = AdamState::zeros(init.n_hidden);

  const auto probes = make_probe_set(setup, cfg.probe_trials, seed);

  double loss_acc = 0.0;
  int loss_count = 0;
  for (int update = 1; update <= cfg.max_updates; ++update) {
    std::vector<TrialInputs> trials;
    std::vector<VecI> targets;
    trials.reserve(cfg.batch_size);
    targets.reserve(cfg.batch_size);
    for (int b = 0; b < cfg.batch_size; ++b) {
      Rng rng = Rng::stream(seed, 0x736c, update, b);  // "sl"
      TrialSpec spec = sample_trial_spec(setup, rng);
      trials.push_back(generate_trial(spec, rng));
      targets.push_back(sl_targets(trials.back()));
    }
    std::vector<const Mat*> inputs;
    std::vector<const VecI*> target_ptrs;
    for (int b = 0; b < cfg.batch_size; ++b) {
      inputs.push_back(&trials[b].inputs);
      target_ptrs.push_back(&targets[b]);
    }

    ParamGrads grads;
    double loss;
    try {
      loss = cross_entropy_loss(result.params, inputs, target_ptrs, &grads);
    } catch (const NumericError&) {
      result.trace.status = TrainStatus::Failure;
      result.trace.updates_used = update;
      return result;
    }
    if (!std::isfinite(loss)) {
      result.trace.status = TrainStatus::Failure;
      result.trace.updates_used = update;
      return result;
    }
    adam_step(result.params, grads, state, cfg);
    loss_acc += loss;
    ++loss_count;

    if (update % cfg.eval_interval == 0 || update == cfg.max_updates) {
      const EvalResult eval = evaluate_accuracy(result.params, probes);
      result.trace.rows.push_back(
          {update, loss_acc / loss_count, eval.accuracy});
      loss_acc = 0.0;
      loss_count = 0;
      result.trace.updates_used = update;
      result.trace.final_accuracy = eval.accuracy;
      if (hook && cfg.checkpoint_interval > 0 &&
          (update % cfg.checkpoint_interval == 0)) {
        hook(update, eval.accuracy, result.params);
      }
      if (eval.accuracy >= cfg.accuracy_target) {
        result.trace.status = TrainStatus::Success;
        return result;
      }
    }
  }
  result.trace.status = TrainStatus::BudgetExceeded;
  return result;
}

}  // namespace rnnlab
