#pragma once

#include "memsplit/dataset.hpp"
#include "memsplit/hyperparams.hpp"
#include "memsplit/mlp.hpp"

namespace memsplit {

// Mini-batch SGD with momentum and the three-phase schedule. Deterministic in
// (data, hp, net.seed): epoch shuffles and dropout masks are derived from the
// seed, never from global state. Throws TrainingDivergenceError (with the
// epoch index) when the loss goes non-finite or above 1e6.
MlpNet train(MlpNet net, const DatasetSplit& data, const Hyperparams& hp);

// Accuracy of a single network on a data split (eval mode, argmax ties break
// toward the lowest class index).
double network_accuracy(const MlpNet& net, const SplitData& split);

}  // namespace memsplit
