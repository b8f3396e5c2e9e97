#include "memsplit/train.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "memsplit/errors.hpp"
#include "memsplit/rng.hpp"

namespace memsplit {

namespace {

constexpr double kDivergenceThreshold = 1e6;

Matrix gather_rows(const Matrix& x, const std::vector<int>& order, int begin, int end) {
  Matrix out(end - begin, x.cols);
  for (int r = begin; r < end; ++r) {
    auto src = x.row(order[r]);
    auto dst = out.row(r - begin);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  return out;
}

}  // namespace

double network_accuracy(const MlpNet& net, const SplitData& split) {
  if (split.size() == 0) return 0.0;
  const Matrix probs = forward(net, split.x, Mode::kEval, 0.0, 0);
  int correct = 0;
  for (int r = 0; r < probs.rows; ++r) {
    const double* p = probs.row(r).data();
    int arg = 0;
    for (int c = 1; c < probs.cols; ++c)
      if (p[c] > p[arg]) arg = c;
    if (arg == split.y[r]) ++correct;
  }
  return static_cast<double>(correct) / probs.rows;
}

MlpNet train(MlpNet net, const DatasetSplit& data, const Hyperparams& hp) {
  validate(hp);
  if (data.train.size() == 0) throw std::invalid_argument("empty training split");

  const int n = data.train.size();
  std::vector<LayerParams> velocity;
  velocity.reserve(net.layers.size());
  for (const LayerParams& l : net.layers) {
    LayerParams v;
    v.in = l.in;
    v.out = l.out;
    v.w.assign(l.w.size(), 0.0);
    v.b.assign(l.b.size(), 0.0);
    velocity.push_back(std::move(v));
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    const double lr = lr_at_epoch(hp, epoch);
    Rng shuffle_rng(seed_chain(hp.seed, {0x5BFFULL, static_cast<std::uint64_t>(epoch)}));
    shuffle_rng.shuffle(order);

    double loss_sum = 0.0;
    int n_batches = 0;
    for (int begin = 0; begin < n; begin += hp.batch_size) {
      const int end = std::min(begin + hp.batch_size, n);
      Matrix xb = gather_rows(data.train.x, order, begin, end);
      std::vector<int> yb(end - begin);
      for (int r = begin; r < end; ++r) yb[r - begin] = data.train.y[order[r]];

      const std::uint64_t dropout_seed =
          seed_chain(hp.seed, {0xD209ULL, static_cast<std::uint64_t>(epoch),
                               static_cast<std::uint64_t>(n_batches)});
      LossGrad lg = loss_and_grad(net, xb, yb, hp, dropout_seed);
      if (!std::isfinite(lg.loss) || lg.loss > kDivergenceThreshold)
        throw TrainingDivergenceError(
            "training diverged at epoch " + std::to_string(epoch) + " (loss " +
                std::to_string(lg.loss) + ")",
            epoch);

      for (std::size_t li = 0; li < net.layers.size(); ++li) {
        LayerParams& l = net.layers[li];
        LayerParams& v = velocity[li];
        const LayerParams& g = lg.grads[li];
        for (std::size_t i = 0; i < l.w.size(); ++i) {
          v.w[i] = hp.momentum * v.w[i] + g.w[i];
          l.w[i] -= lr * v.w[i];
        }
        for (std::size_t i = 0; i < l.b.size(); ++i) {
          v.b[i] = hp.momentum * v.b[i] + g.b[i];
          l.b[i] -= lr * v.b[i];
        }
      }
      loss_sum += lg.loss;
      ++n_batches;
    }

    EpochStats stats;
    stats.train_loss = loss_sum / n_batches;
    stats.val_accuracy = data.val.size() > 0 ? network_accuracy(net, data.val) : 0.0;
    stats.lr = lr;
    net.trace.push_back(stats);
  }
  return net;
}

}  // namespace memsplit
