#include "rnnlab/task.hpp"

#include <cmath>
#include <stdexcept>

namespace rnnlab {

std::string to_string(TaskKind k) {
  return k == TaskKind::DM ? "dm" : "ctxdm";
}

std::string to_string(Context c) { return c == Context::A ? "A" : "B"; }

std::string to_string(Stage s) {
  switch (s) {
    case Stage::Fixation: return "fixation";
    case Stage::Stimulus: return "stimulus";
    case Stage::Delay: return "delay";
    case Stage::Decision: return "decision";
  }
  return "?";
}

TaskKind task_from_string(const std::string& s) {
  if (s == "dm") return TaskKind::DM;
  if (s == "ctxdm") return TaskKind::CtxDM;
  throw std::invalid_argument("unknown task: " + s);
}

void TrialSpec::validate() const {
  if (stages.fixation < 1 || stages.stimulus < 1 || stages.delay < 1 ||
      stages.decision < 1) {
    throw std::invalid_argument("all stage lengths must be >= 1");
  }
  if (noise_amplitude < 0.0) {
    throw std::invalid_argument("noise amplitude must be >= 0");
  }
  if (std::abs(coh_a) > 1.0 || std::abs(coh_b) > 1.0) {
    throw std::invalid_argument("coherences must lie in [-1, 1]");
  }
  if (task == TaskKind::DM && context != Context::A) {
    throw std::invalid_argument("DM trials run in context A");
  }
}

Stage TrialSpec::stage_of_step(int t) const {
  if (t < stages.fixation) return Stage::Fixation;
  t -= stages.fixation;
  if (t < stages.stimulus) return Stage::Stimulus;
  t -= stages.stimulus;
  if (t < stages.delay) return Stage::Delay;
  return Stage::Decision;
}

Vec pure_input(const TrialSpec& spec, Stage stage) {
  Vec u = Vec::Zero(kNumInputs);
  if (stage != Stage::Decision) {
    u[kChanFixation] = 1.0;
    if (spec.task == TaskKind::DM) {
      u[kChanCtxA] = 1.0;
    } else {
      u[spec.context == Context::A ? kChanCtxA : kChanCtxB] = 1.0;
    }
  }
  if (stage == Stage::Stimulus) {
    u[kChanA1] = 0.5 * (spec.gain + spec.coh_a);
    u[kChanA2] = 0.5 * (spec.gain - spec.coh_a);
    u[kChanB1] = 0.5 * (spec.gain + spec.coh_b);
    u[kChanB2] = 0.5 * (spec.gain - spec.coh_b);
  }
  return u;
}

TrialInputs generate_trial(const TrialSpec& spec, Rng& rng) {
  spec.validate();
  const int total = spec.total_steps();

  TrialInputs trial;
  trial.stage_of_step.resize(total);

  const double coh = spec.primary_coherence();
  if (coh > 0.0) {
    trial.correct_action = kActChoice1;
  } else if (coh < 0.0) {
    trial.correct_action = kActChoice2;
  } else {
    trial.correct_action = rng.coin() ? kActChoice1 : kActChoice2;
  }

  trial.inputs.resize(total, kNumInputs);
  for (int t = 0; t < total; ++t) {
    const Stage stage = spec.stage_of_step(t);
    trial.stage_of_step[t] = stage;
    Vec u = pure_input(spec, stage);
    for (int c = 0; c < kNumInputs; ++c) {
      trial.inputs(t, c) = u[c] + spec.noise_amplitude * rng.uniform_pm1();
    }
  }
  return trial;
}

double step_reward(Stage stage, int action, int correct_action, bool* abort) {
  if (abort) *abort = false;
  if (stage == Stage::Decision) {
    return action == correct_action ? 1.0 : 0.0;
  }
  if (action != kActFixate) {
    if (abort) *abort = true;
    return -1.0;
  }
  return 0.0;
}

}  // namespace rnnlab
