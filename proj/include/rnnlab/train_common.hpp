#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rnnlab/rnn.hpp"
#include "rnnlab/task.hpp"

namespace rnnlab {

// Task-side configuration shared by both trainers. Coherence magnitudes are
// drawn uniformly from coherence_levels with a random sign; CtxDM trials
// also draw the context and the irrelevant coherence.
struct TaskSetup {
  TaskKind task = TaskKind::DM;
  double alpha = 0.05;
  StageLengths stages;
  double gain = 1.0;
  std::vector<double> coherence_levels = {0.05, 0.1, 0.2, 0.4};
};

TrialSpec sample_trial_spec(const TaskSetup& setup, Rng& rng);

// Fixed held-out probe trials used for accuracy evaluation.
std::vector<TrialInputs> make_probe_set(const TaskSetup& setup, int n_trials,
                                        std::uint64_t seed);

struct EvalResult {
  double accuracy = 0.0;              // correct decisions / probe trials
  double conditional_accuracy = 0.0;  // over non-aborted two-choice decisions
  int n_choice = 0;                   // trials that made a two-choice decision
};

// Argmax-policy accuracy over precomputed probe trials. Hidden dynamics do
// not depend on actions, so the whole probe set is evaluated batched.
EvalResult evaluate_accuracy(const NetworkParams& p,
                             const std::vector<TrialInputs>& probes);

enum class TrainStatus { Success, Failure, BudgetExceeded };

std::string to_string(TrainStatus s);

struct TraceRow {
  int update = 0;
  double loss = 0.0;
  double accuracy = 0.0;
};

struct TrainingTrace {
  std::vector<TraceRow> rows;
  TrainStatus status = TrainStatus::BudgetExceeded;
  int updates_used = 0;
  double final_accuracy = 0.0;
};

void write_trace_csv(const std::string& path, const TrainingTrace& trace);

struct TrainResult {
  NetworkParams params;
  TrainingTrace trace;
};

// Invoked at evaluation points when a checkpoint interval is configured.
using CheckpointHook =
    std::function<void(int update, double accuracy, const NetworkParams&)>;

}  // namespace rnnlab
