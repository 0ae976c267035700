#include "rnnlab/train_common.hpp"

#include <fstream>
#include <stdexcept>

namespace rnnlab {

TrialSpec sample_trial_spec(const TaskSetup& setup, Rng& rng) {
  TrialSpec spec;
  spec.task = setup.task;
  spec.stages = setup.stages;
  spec.noise_amplitude = setup.alpha;
  spec.gain = setup.gain;

  auto draw_coh = [&]() {
    double mag = setup.coherence_levels[rng.index(setup.coherence_levels.size())];
    return rng.coin() ? mag : -mag;
  };
  spec.coh_a = draw_coh();
  spec.coh_b = draw_coh();
  if (setup.task == TaskKind::CtxDM) {
    spec.context = rng.coin() ? Context::A : Context::B;
  } else {
    spec.context = Context::A;
  }
  return spec;
}

std::vector<TrialInputs> make_probe_set(const TaskSetup& setup, int n_trials,
                                        std::uint64_t seed) {
  std::vector<TrialInputs> probes;
  probes.reserve(n_trials);
  for (int i = 0; i < n_trials; ++i) {
    Rng rng = Rng::stream(seed, 0x70726f6265, i);  // "probe"
    TrialSpec spec = sample_trial_spec(setup, rng);
    probes.push_back(generate_trial(spec, rng));
  }
  return probes;
}

EvalResult evaluate_accuracy(const NetworkParams& p,
                             const std::vector<TrialInputs>& probes) {
  const int batch = static_cast<int>(probes.size());
  const int n = p.n_hidden;
  int t_max = 0;
  for (const auto& tr : probes) {
    t_max = std::max<int>(t_max, static_cast<int>(tr.stage_of_step.size()));
  }

  // argmax action per step for every trial; actions do not feed back into
  // the dynamics, so one batched sweep suffices.
  Mat h = Mat::Zero(n, batch);
  Mat u = Mat::Zero(kNumInputs, batch);
  MatI act(t_max, batch);
  for (int t = 0; t < t_max; ++t) {
    for (int b = 0; b < batch; ++b) {
      if (t < probes[b].inputs.rows()) {
        u.col(b) = probes[b].inputs.row(t).transpose();
      }
    }
    h = step_batch(p, h, u);
    const Mat logits = p.w_ho * h;
    for (int b = 0; b < batch; ++b) {
      int best = 0;
      logits.col(b).maxCoeff(&best);
      act(t, b) = best;
    }
  }

  EvalResult res;
  int correct = 0, choice_correct = 0;
  for (int b = 0; b < batch; ++b) {
    const auto& tr = probes[b];
    const int steps = static_cast<int>(tr.stage_of_step.size());
    bool aborted = false;
    for (int t = 0; t < steps; ++t) {
      if (tr.stage_of_step[t] != Stage::Decision && act(t, b) != kActFixate) {
        aborted = true;
        break;
      }
    }
    if (aborted) continue;
    const int decision = act(steps - 1, b);
    if (decision == tr.correct_action) ++correct;
    if (decision != kActFixate) {
      ++res.n_choice;
      if (decision == tr.correct_action) ++choice_correct;
    }
  }
  res.accuracy = batch > 0 ? static_cast<double>(correct) / batch : 0.0;
  res.conditional_accuracy =
      res.n_choice > 0 ? static_cast<double>(choice_correct) / res.n_choice
                       : 0.0;
  return res;
}

std::string to_string(TrainStatus s) {
  switch (s) {
    case TrainStatus::Success: return "success";
    case TrainStatus::Failure: return "failure";
    case TrainStatus::BudgetExceeded: return "budget-exceeded";
  }
  return "?";
}

void write_trace_csv(const std::string& path, const TrainingTrace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace: " + path);
  out << "update,loss,accuracy\n";
  char buf[128];
  for (const auto& row : trace.rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", row.update, row.loss,
                  row.accuracy);
    out << buf;
  }
}

}  // namespace rnnlab
