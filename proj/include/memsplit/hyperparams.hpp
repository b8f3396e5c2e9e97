#pragma once

#include <cstdint>
#include <string>

namespace memsplit {

// Three-phase learning-rate schedule: constant, linear anneal, constant.
// The final-phase rate is fixed at lr/100.
struct SchedulePhases {
  double constant_frac = 0.5;
  double anneal_frac = 0.4;
  double final_frac = 0.1;
};

struct Hyperparams {
  double lr = 0.1;
  double weight_decay = 0.0;
  double dropout = 0.0;
  double momentum = 0.9;
  int epochs = 60;
  SchedulePhases schedule;
  double label_smoothing = 0.0;
  int batch_size = 128;
  std::uint64_t seed = 0;
};

// Throws std::invalid_argument when a rate is out of range or the schedule
// fractions do not sum to 1.
void validate(const Hyperparams& hp);

// Epoch counts of the three phases, rounded so they sum to hp.epochs.
struct PhaseEpochs {
  int constant = 0;
  int anneal = 0;
  int final_phase = 0;
};
PhaseEpochs phase_epochs(const Hyperparams& hp);

// Learning rate for a 0-based epoch index. lr(0) = lr; the last anneal epoch
// and every final-phase epoch run at lr/100.
double lr_at_epoch(const Hyperparams& hp, int epoch);

// Canonical key=value serialization (used for cache keys and metadata).
std::string canonical_string(const Hyperparams& hp);

}  // namespace memsplit
