#include "memsplit/hyperparams.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace memsplit {

namespace {
constexpr double kFinalLrFactor = 0.01;  // final lr = initial / 100
}

void validate(const Hyperparams& hp) {
  auto bad = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (!(hp.lr > 0.0) || !std::isfinite(hp.lr)) bad("lr must be positive and finite");
  if (hp.weight_decay < 0.0 || !std::isfinite(hp.weight_decay)) bad("weight_decay must be >= 0");
  if (hp.dropout < 0.0 || hp.dropout >= 1.0) bad("dropout must be in [0, 1)");
  if (hp.momentum < 0.0 || hp.momentum >= 1.0) bad("momentum must be in [0, 1)");
  if (hp.epochs <= 0) bad("epochs must be positive");
  if (hp.label_smoothing < 0.0 || hp.label_smoothing >= 0.5)
    bad("label_smoothing must be in [0, 0.5)");
  if (hp.batch_size <= 0) bad("batch_size must be positive");
  const double sum = hp.schedule.constant_frac + hp.schedule.anneal_frac +
                     hp.schedule.final_frac;
  if (std::abs(sum - 1.0) > 1e-9) bad("schedule fractions must sum to 1");
  if (hp.schedule.constant_frac < 0.0 || hp.schedule.anneal_frac < 0.0 ||
      hp.schedule.final_frac < 0.0)
    bad("schedule fractions must be nonnegative");
}

PhaseEpochs phase_epochs(const Hyperparams& hp) {
  PhaseEpochs p;
  p.constant = static_cast<int>(std::lround(hp.schedule.constant_frac * hp.epochs));
  p.anneal = static_cast<int>(std::lround(hp.schedule.anneal_frac * hp.epochs));
  if (p.constant + p.anneal > hp.epochs) p.anneal = hp.epochs - p.constant;
  p.final_phase = hp.epochs - p.constant - p.anneal;
  return p;
}

double lr_at_epoch(const Hyperparams& hp, int epoch) {
  if (epoch < 0 || epoch >= hp.epochs)
    throw std::invalid_argument("epoch index outside [0, epochs)");
  const PhaseEpochs p = phase_epochs(hp);
  if (epoch < p.constant) return hp.lr;
  if (epoch < p.constant + p.anneal) {
    // Linear from lr toward lr/100, hitting lr/100 on the last anneal epoch.
    const double t = static_cast<double>(epoch - p.constant + 1) / p.anneal;
    return hp.lr * (1.0 - t * (1.0 - kFinalLrFactor));
  }
  return hp.lr * kFinalLrFactor;
}

std::string canonical_string(const Hyperparams& hp) {
  std::ostringstream os;
  os.precision(17);
  os << "lr=" << hp.lr << ";wd=" << hp.weight_decay << ";dr=" << hp.dropout
     << ";mom=" << hp.momentum << ";epochs=" << hp.epochs << ";sched="
     << hp.schedule.constant_frac << '/' << hp.schedule.anneal_frac << '/'
     << hp.schedule.final_frac << ";ls=" << hp.label_smoothing
     << ";batch=" << hp.batch_size;
  return os.str();
}

}  // namespace memsplit
