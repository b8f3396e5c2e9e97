#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "memsplit/archspace.hpp"
#include "memsplit/hyperparams.hpp"
#include "memsplit/matrix.hpp"

namespace memsplit {

struct EpochStats {
  double train_loss = 0.0;
  double val_accuracy = 0.0;  // 0 when the split has no validation data
  double lr = 0.0;
};

// Weights stored row-major, w[out][in]; hidden layers use relu, the output
// layer a row-wise softmax.
struct LayerParams {
  int in = 0;
  int out = 0;
  std::vector<double> w;
  std::vector<double> b;
};

struct MlpNet {
  std::string family = "mlp";
  int k = 0;
  std::uint64_t seed = 0;
  std::vector<LayerParams> layers;
  std::vector<EpochStats> trace;

  int input_dim() const { return layers.front().in; }
  int output_dim() const { return layers.back().out; }
  std::int64_t param_total() const;
};

enum class Mode { kTrain, kEval };

// Fresh network with weights from the zero-mean uniform scheme with standard
// deviation 1/sqrt(fan_in) (bound sqrt(3/fan_in)); biases start at zero.
// Deterministic in (family, k, seed).
MlpNet init_network(const ArchFamily& mlp_family, int k, std::uint64_t seed);

// Class probability rows. Train mode applies inverted dropout at the given
// rate to hidden activations, with masks derived from dropout_seed. Eval mode
// ignores dropout entirely. Rejects non-finite inputs.
Matrix forward(const MlpNet& net, const Matrix& x, Mode mode, double dropout,
               std::uint64_t dropout_seed);

struct LossGrad {
  double loss = 0.0;
  std::vector<LayerParams> grads;  // same shapes as net.layers
};

// Label-smoothed cross-entropy averaged over the batch plus
// (wd/2) * ||W||^2 over weight matrices (biases are not decayed).
// Gradients are exact for the dropout mask drawn from dropout_seed.
LossGrad loss_and_grad(const MlpNet& net, const Matrix& x, const std::vector<int>& y,
                       const Hyperparams& hp, std::uint64_t dropout_seed);

// Run store serialization: <key>.weights (binary, little-endian doubles)
// plus <key>.json carrying family, k, seed, hyperparameters and the trace.
void save_member(const MlpNet& net, const Hyperparams& hp,
                 const std::filesystem::path& dir, const std::string& key);
MlpNet load_member(const std::filesystem::path& dir, const std::string& key,
                   Hyperparams* hp_out = nullptr);

}  // namespace memsplit
