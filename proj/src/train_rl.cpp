#include "rnnlab/train_rl.hpp"

#include <cmath>
#include <numeric>

#include "rnnlab/train_sl.hpp"

namespace rnnlab {

void gae(const Vec& rewards, const Vec& values, double gamma, double lambda,
         Vec* advantages, Vec* returns) {
  const int steps = static_cast<int>(rewards.size());
  advantages->resize(steps);
  returns->resize(steps);
  double acc = 0.0;
  for (int t = steps - 1; t >= 0; --t) {
    const double delta = rewards[t] + gamma * values[t + 1] - values[t];
    acc = delta + gamma * lambda * acc;
    (*advantages)[t] = acc;
    (*returns)[t] = acc + values[t];
  }
}

namespace {

// Collects full episodes with sampled actions. Hidden dynamics are advanced
// for the whole batch at once; episodes that broke fixation stop
// contributing but their columns keep stepping.
std::vector<PpoEpisodeData> collect_episodes(const NetworkParams& p,
                                             const TaskSetup& setup,
                                             const PpoConfig& cfg,
                                             std::uint64_t seed, int update) {
  const int batch = cfg.rollout_trials;
  const int n = p.n_hidden;

  std::vector<TrialInputs> trials;
  std::vector<Rng> streams;
  trials.reserve(batch);
  streams.reserve(batch);
  for (int b = 0; b < batch; ++b) {
    streams.push_back(Rng::stream(seed, 0x70706f, update, b));  // "ppo"
    TrialSpec spec = sample_trial_spec(setup, streams[b]);
    trials.push_back(generate_trial(spec, streams[b]));
  }
  const int t_max = static_cast<int>(trials[0].stage_of_step.size());

  std::vector<PpoEpisodeData> episodes(batch);
  std::vector<Vec> values(batch, Vec(t_max));
  std::vector<Vec> rewards(batch, Vec(t_max));
  std::vector<bool> done(batch, false);
  for (int b = 0; b < batch; ++b) {
    auto& ep = episodes[b];
    ep.inputs.resize(t_max, kNumInputs);
    ep.actions.resize(t_max);
    ep.old_log_probs.resize(t_max);
    ep.steps = 0;
  }

  Mat h = Mat::Zero(n, batch);
  Mat u(kNumInputs, batch);
  for (int t = 0; t < t_max; ++t) {
    for (int b = 0; b < batch; ++b) {
      u.col(b) = trials[b].inputs.row(t).transpose();
    }
    h = step_batch(p, h, u);
    const Mat logits = p.w_ho * h;
    const Mat vals = p.w_hv * h;
    for (int b = 0; b < batch; ++b) {
      if (done[b]) continue;
      auto& ep = episodes[b];
      const Vec probs = softmax(logits.col(b));
      double cum = 0.0;
      const double draw = streams[b].uniform();
      int action = kNumActions - 1;
      for (int a = 0; a < kNumActions; ++a) {
        cum += probs[a];
        if (draw < cum) {
          action = a;
          break;
        }
      }
      ep.inputs.row(t) = u.col(b).transpose();
      ep.actions[ep.steps] = action;
      ep.old_log_probs[ep.steps] = std::log(std::max(probs[action], 1e-300));
      values[b][ep.steps] = vals(0, b);

      bool abort = false;
      rewards[b][ep.steps] = step_reward(trials[b].stage_of_step[t], action,
                                         trials[b].correct_action, &abort);
      ep.steps += 1;
      if (abort) done[b] = true;
    }
  }

  for (int b = 0; b < batch; ++b) {
    auto& ep = episodes[b];
    ep.inputs.conservativeResize(ep.steps, Eigen::NoChange);
    ep.actions.conservativeResize(ep.steps);
    ep.old_log_probs.conservativeResize(ep.steps);
    Vec v = Vec::Zero(ep.steps + 1);  // bootstrap 0 at terminal
    v.head(ep.steps) = values[b].head(ep.steps);
    gae(rewards[b].head(ep.steps), v, cfg.gamma, cfg.lambda_gae,
        &ep.advantages, &ep.returns);
  }
  return episodes;
}

void normalize_advantages(std::vector<PpoEpisodeData>& episodes) {
  double sum = 0.0;
  long count = 0;
  for (const auto& ep : episodes) {
    sum += ep.advantages.sum();
    count += ep.steps;
  }
  const double mean = sum / static_cast<double>(count);
  double sq = 0.0;
  for (const auto& ep : episodes) {
    sq += (ep.advantages.array() - mean).square().sum();
  }
  const double sd = std::sqrt(sq / static_cast<double>(count));
  const double inv = 1.0 / std::max(sd, 1e-8);
  for (auto& ep : episodes) {
    ep.advantages = (ep.advantages.array() - mean) * inv;
  }
}

}  // namespace

TrainResult train_ppo(const NetworkParams& init, const TaskSetup& setup,
                      const PpoConfig& cfg, std::uint64_t seed,
                      const CheckpointHook& hook) {
  TrainResult result;
  result.params = init;

  AdamConfig adam_cfg;
  adam_cfg.beta1 = cfg.beta1;
  adam_cfg.beta2 = cfg.beta2;
  adam_cfg.learning_rate = cfg.learning_rate;
  adam_cfg.epsilon = cfg.epsilon;
  adam_cfg.max_grad_norm = cfg.max_grad_norm;
  AdamState state = AdamState::zeros(init.n_hidden);

  const auto probes = make_probe_set(setup, cfg.probe_trials, seed);
  const PpoCoeffs coeffs{cfg.clip_eps, cfg.value_coef, cfg.entropy_coef};

  double loss_acc = 0.0;
  int loss_count = 0;
  for (int update = 1; update <= cfg.max_updates; ++update) {
    auto episodes = collect_episodes(result.params, setup, cfg, seed, update);
    normalize_advantages(episodes);

    std::vector<int> order(episodes.size());
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle_rng = Rng::stream(seed, 0x73686662, update);  // "shfb"

    bool failed = false;
    for (int epoch = 0; epoch < cfg.epochs && !failed; ++epoch) {
      shuffle_rng.shuffle(order);
      for (std::size_t start = 0; start < order.size();
           start += cfg.minibatch) {
        const std::size_t stop =
            std::min(order.size(), start + cfg.minibatch);
        std::vector<const PpoEpisodeData*> mb;
        mb.reserve(stop - start);
        for (std::size_t i = start; i < stop; ++i) {
          mb.push_back(&episodes[order[i]]);
        }
        ParamGrads grads;
        PpoLossParts parts;
        try {
          parts = ppo_loss(result.params, mb, coeffs, &grads);
        } catch (const NumericError&) {
          failed = true;
          break;
        }
        if (!std::isfinite(parts.total)) {
          failed = true;
          break;
        }
        adam_step(result.params, grads, state, adam_cfg);
        loss_acc += parts.total;
        ++loss_count;
      }
    }
    if (failed) {
      result.trace.status = TrainStatus::Failure;
      result.trace.updates_used = update;
      return result;
    }

    if (update % cfg.eval_interval == 0 || update == cfg.max_updates) {
      const EvalResult eval = evaluate_accuracy(result.params, probes);
      result.trace.rows.push_back(
          {update, loss_count > 0 ? loss_acc / loss_count : 0.0,
           eval.accuracy});
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
