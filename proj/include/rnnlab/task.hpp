#pragma once

#include <string>
#include <vector>

#include "rnnlab/types.hpp"

namespace rnnlab {

// Input channel order is a wire contract shared with the checkpoint format:
// F, A1, A2, B1, B2, C_A, C_B.
constexpr int kNumInputs = 7;
constexpr int kNumActions = 3;

enum Channel : int {
  kChanFixation = 0,
  kChanA1 = 1,
  kChanA2 = 2,
  kChanB1 = 3,
  kChanB2 = 4,
  kChanCtxA = 5,
  kChanCtxB = 6,
};

enum Action : int { kActFixate = 0, kActChoice1 = 1, kActChoice2 = 2 };

enum class TaskKind { DM, CtxDM };
enum class Context { A, B };
enum class Stage { Fixation, Stimulus, Delay, Decision };

std::string to_string(TaskKind k);
std::string to_string(Context c);
std::string to_string(Stage s);
TaskKind task_from_string(const std::string& s);

struct StageLengths {
  int fixation = 5;
  int stimulus = 20;
  int delay = 10;
  int decision = 1;

  int total() const { return fixation + stimulus + delay + decision; }
};

// Configuration of a single trial. coh_a = A1 - A2 and coh_b = B1 - B2 with
// A1 + A2 = B1 + B2 = gain. For DM only the A pair is informative and the
// context cue C_A stays on; the B pair is still fed as a distractor.
struct TrialSpec {
  TaskKind task = TaskKind::DM;
  Context context = Context::A;
  double coh_a = 0.0;
  double coh_b = 0.0;
  StageLengths stages;
  double noise_amplitude = 0.05;
  double gain = 1.0;
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument
  Stage stage_of_step(int t) const;
  int total_steps() const { return stages.total(); }

  double primary_coherence() const {
    return context == Context::A ? coh_a : coh_b;
  }
  double secondary_coherence() const {
    return context == Context::A ? coh_b : coh_a;
  }
};

// Noise-free input for one stage of a trial.
Vec pure_input(const TrialSpec& spec, Stage stage);

struct TrialInputs {
  Mat inputs;                        // T x 7, noise included
  std::vector<Stage> stage_of_step;  // length T
  int correct_action = kActFixate;
};

// Draws the full input sequence (fresh uniform noise per step and channel)
// and the trial label. Zero primary coherence gets a fair-coin label so the
// coherence grid has no holes.
TrialInputs generate_trial(const TrialSpec& spec, Rng& rng);

// +1 for the correct choice at the decision stage, -1 and abort for any
// non-fixation action before it, 0 otherwise.
double step_reward(Stage stage, int action, int correct_action, bool* abort);

}  // namespace rnnlab
