#include "memsplit/mlp.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "memsplit/json_io.hpp"
#include "memsplit/rng.hpp"

namespace memsplit {

namespace {

constexpr std::uint32_t kWeightsMagic = 0x4D535057;  // "MSPW"
constexpr std::uint32_t kWeightsVersion = 1;

void check_same_shape(const MlpNet& net, const Matrix& x) {
  if (x.cols != net.input_dim())
    throw std::invalid_argument("input dimensionality " + std::to_string(x.cols) +
                                " does not match network input " +
                                std::to_string(net.input_dim()));
  for (double v : x.data)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite input rejected");
}

// z = a * W^T + b for one layer; a is rows x in, result rows x out.
void affine(const LayerParams& l, const Matrix& a, Matrix& z) {
  z = Matrix(a.rows, l.out);
  for (int r = 0; r < a.rows; ++r) {
    const double* ar = a.row(r).data();
    double* zr = z.row(r).data();
    for (int o = 0; o < l.out; ++o) {
      const double* wr = l.w.data() + static_cast<std::size_t>(o) * l.in;
      double acc = l.b[o];
      for (int i = 0; i < l.in; ++i) acc += wr[i] * ar[i];
      zr[o] = acc;
    }
  }
}

void softmax_rows(Matrix& m) {
  for (int r = 0; r < m.rows; ++r) {
    double* row = m.row(r).data();
    double mx = row[0];
    for (int c = 1; c < m.cols; ++c) mx = std::max(mx, row[c]);
    double sum = 0.0;
    for (int c = 0; c < m.cols; ++c) {
      row[c] = std::exp(row[c] - mx);
      sum += row[c];
    }
    for (int c = 0; c < m.cols; ++c) row[c] /= sum;
  }
}

// Inverted dropout scale per element: 0 (dropped) or 1/(1-rate).
Matrix dropout_scales(int rows, int cols, double rate, std::uint64_t seed) {
  Matrix m(rows, cols);
  Rng rng(seed);
  const double keep_scale = 1.0 / (1.0 - rate);
  for (double& v : m.data) v = (rng.uniform01() >= rate) ? keep_scale : 0.0;
  return m;
}

struct ForwardTrace {
  std::vector<Matrix> activations;  // post-relu, post-dropout; [0] is the input
  std::vector<Matrix> pre_acts;     // z per layer
  std::vector<Matrix> masks;        // dropout scales per hidden layer (may be empty)
  Matrix probs;
};

ForwardTrace forward_full(const MlpNet& net, const Matrix& x, Mode mode, double dropout,
                          std::uint64_t dropout_seed) {
  check_same_shape(net, x);
  const int n_layers = static_cast<int>(net.layers.size());
  const bool use_dropout = (mode == Mode::kTrain) && dropout > 0.0;

  ForwardTrace t;
  t.activations.reserve(n_layers);
  t.pre_acts.reserve(n_layers);
  t.activations.push_back(x);
  for (int li = 0; li < n_layers; ++li) {
    Matrix z;
    affine(net.layers[li], t.activations.back(), z);
    t.pre_acts.push_back(z);
    if (li + 1 == n_layers) {
      softmax_rows(z);
      t.probs = std::move(z);
      break;
    }
    for (double& v : z.data) v = v > 0.0 ? v : 0.0;
    if (use_dropout) {
      Matrix mask = dropout_scales(z.rows, z.cols, dropout,
                                   seed_chain(dropout_seed, {static_cast<std::uint64_t>(li)}));
      for (std::size_t i = 0; i < z.data.size(); ++i) z.data[i] *= mask.data[i];
      t.masks.push_back(std::move(mask));
    }
    t.activations.push_back(std::move(z));
  }
  return t;
}

}  // namespace

std::int64_t MlpNet::param_total() const {
  std::int64_t n = 0;
  for (const LayerParams& l : layers)
    n += static_cast<std::int64_t>(l.w.size()) + static_cast<std::int64_t>(l.b.size());
  return n;
}

MlpNet init_network(const ArchFamily& mlp_family, int k, std::uint64_t seed) {
  if (mlp_family.name != "mlp")
    throw std::invalid_argument("only the mlp family is trainable; got " + mlp_family.name);
  if (k < mlp_family.k_min || k > mlp_family.k_max)
    throw WidthRangeError("width factor " + std::to_string(k) + " outside mlp range");

  MlpNet net;
  net.k = k;
  net.seed = seed;
  net.layers.reserve(mlp_family.layers.size());
  for (std::size_t li = 0; li < mlp_family.layers.size(); ++li) {
    const LayerSpec& spec = mlp_family.layers[li];
    LayerParams l;
    l.in = static_cast<int>(spec.fan_in.at(k));
    l.out = static_cast<int>(spec.fan_out.at(k));
    l.w.resize(static_cast<std::size_t>(l.in) * l.out);
    l.b.assign(static_cast<std::size_t>(l.out), 0.0);
    Rng rng(seed_chain(seed, {0x1417ULL, static_cast<std::uint64_t>(li)}));
    const double bound = std::sqrt(3.0 / l.in);  // stddev 1/sqrt(fan_in)
    for (double& v : l.w) v = rng.uniform(-bound, bound);
    net.layers.push_back(std::move(l));
  }
  return net;
}

Matrix forward(const MlpNet& net, const Matrix& x, Mode mode, double dropout,
               std::uint64_t dropout_seed) {
  return forward_full(net, x, mode, dropout, dropout_seed).probs;
}

LossGrad loss_and_grad(const MlpNet& net, const Matrix& x, const std::vector<int>& y,
                       const Hyperparams& hp, std::uint64_t dropout_seed) {
  if (static_cast<int>(y.size()) != x.rows)
    throw std::invalid_argument("batch and label lengths differ");
  const int classes = net.output_dim();
  for (int label : y)
    if (label < 0 || label >= classes)
      throw std::invalid_argument("label outside [0, classes)");

  ForwardTrace t = forward_full(net, x, Mode::kTrain, hp.dropout, dropout_seed);
  const int batch = x.rows;
  const int n_layers = static_cast<int>(net.layers.size());
  const double eps = hp.label_smoothing;
  const double off_target = eps / classes;

  // Smoothed cross-entropy, averaged over the batch.
  double loss = 0.0;
  for (int r = 0; r < batch; ++r) {
    const double* p = t.probs.row(r).data();
    for (int c = 0; c < classes; ++c) {
      const double target = off_target + (c == y[r] ? 1.0 - eps : 0.0);
      if (target > 0.0) loss -= target * std::log(std::max(p[c], 1e-300));
    }
  }
  loss /= batch;

  LossGrad out;
  out.grads.resize(n_layers);
  for (int li = 0; li < n_layers; ++li) {
    out.grads[li].in = net.layers[li].in;
    out.grads[li].out = net.layers[li].out;
    out.grads[li].w.assign(net.layers[li].w.size(), 0.0);
    out.grads[li].b.assign(net.layers[li].b.size(), 0.0);
  }

  // dL/dz for the softmax + smoothed cross-entropy head.
  Matrix delta = t.probs;
  for (int r = 0; r < batch; ++r) {
    double* d = delta.row(r).data();
    for (int c = 0; c < classes; ++c) {
      const double target = off_target + (c == y[r] ? 1.0 - eps : 0.0);
      d[c] = (d[c] - target) / batch;
    }
  }

  for (int li = n_layers - 1; li >= 0; --li) {
    const LayerParams& l = net.layers[li];
    LayerParams& g = out.grads[li];
    const Matrix& a_prev = t.activations[li];
    for (int r = 0; r < batch; ++r) {
      const double* d = delta.row(r).data();
      const double* a = a_prev.row(r).data();
      for (int o = 0; o < l.out; ++o) {
        if (d[o] == 0.0) continue;
        double* gw = g.w.data() + static_cast<std::size_t>(o) * l.in;
        for (int i = 0; i < l.in; ++i) gw[i] += d[o] * a[i];
        g.b[o] += d[o];
      }
    }
    if (li == 0) break;
    // Propagate through the affine map, then dropout and relu of layer li-1.
    Matrix prev_delta(batch, l.in);
    for (int r = 0; r < batch; ++r) {
      const double* d = delta.row(r).data();
      double* pd = prev_delta.row(r).data();
      std::memset(pd, 0, sizeof(double) * l.in);
      for (int o = 0; o < l.out; ++o) {
        if (d[o] == 0.0) continue;
        const double* wr = l.w.data() + static_cast<std::size_t>(o) * l.in;
        for (int i = 0; i < l.in; ++i) pd[i] += d[o] * wr[i];
      }
    }
    const bool has_mask = !t.masks.empty();
    const Matrix& z_prev = t.pre_acts[li - 1];
    for (std::size_t i = 0; i < prev_delta.data.size(); ++i) {
      double v = prev_delta.data[i];
      if (has_mask) v *= t.masks[li - 1].data[i];
      prev_delta.data[i] = z_prev.data[i] > 0.0 ? v : 0.0;
    }
    delta = std::move(prev_delta);
  }

  // L2 penalty on weight matrices only.
  if (hp.weight_decay > 0.0) {
    double sq = 0.0;
    for (int li = 0; li < n_layers; ++li) {
      const auto& w = net.layers[li].w;
      auto& gw = out.grads[li].w;
      for (std::size_t i = 0; i < w.size(); ++i) {
        sq += w[i] * w[i];
        gw[i] += hp.weight_decay * w[i];
      }
    }
    loss += 0.5 * hp.weight_decay * sq;
  }

  out.loss = loss;
  return out;
}

void save_member(const MlpNet& net, const Hyperparams& hp,
                 const std::filesystem::path& dir, const std::string& key) {
  std::filesystem::create_directories(dir);

  std::ofstream wf(dir / (key + ".weights"), std::ios::binary);
  if (!wf) throw std::runtime_error("cannot write weights file for " + key);
  auto put_u32 = [&wf](std::uint32_t v) {
    wf.write(reinterpret_cast<const char*>(&v), sizeof(v));
  };
  put_u32(kWeightsMagic);
  put_u32(kWeightsVersion);
  put_u32(static_cast<std::uint32_t>(net.layers.size()));
  for (const LayerParams& l : net.layers) {
    put_u32(static_cast<std::uint32_t>(l.in));
    put_u32(static_cast<std::uint32_t>(l.out));
    wf.write(reinterpret_cast<const char*>(l.w.data()),
             static_cast<std::streamsize>(l.w.size() * sizeof(double)));
    wf.write(reinterpret_cast<const char*>(l.b.data()),
             static_cast<std::streamsize>(l.b.size() * sizeof(double)));
  }

  nlohmann::json meta;
  meta["family"] = net.family;
  meta["k"] = net.k;
  meta["seed"] = net.seed;
  meta["hyperparams"] = hp;
  nlohmann::json trace = nlohmann::json::array();
  for (const EpochStats& e : net.trace)
    trace.push_back({{"train_loss", e.train_loss},
                     {"val_accuracy", e.val_accuracy},
                     {"lr", e.lr}});
  meta["trace"] = std::move(trace);
  std::ofstream mf(dir / (key + ".json"));
  mf << meta.dump(2) << '\n';
}

MlpNet load_member(const std::filesystem::path& dir, const std::string& key,
                   Hyperparams* hp_out) {
  std::ifstream wf(dir / (key + ".weights"), std::ios::binary);
  if (!wf) throw std::runtime_error("missing weights file for " + key);
  auto get_u32 = [&wf]() {
    std::uint32_t v = 0;
    wf.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
  };
  if (get_u32() != kWeightsMagic || get_u32() != kWeightsVersion)
    throw std::runtime_error("bad weights file header for " + key);

  MlpNet net;
  const std::uint32_t n_layers = get_u32();
  net.layers.resize(n_layers);
  for (LayerParams& l : net.layers) {
    l.in = static_cast<int>(get_u32());
    l.out = static_cast<int>(get_u32());
    l.w.resize(static_cast<std::size_t>(l.in) * l.out);
    l.b.resize(l.out);
    wf.read(reinterpret_cast<char*>(l.w.data()),
            static_cast<std::streamsize>(l.w.size() * sizeof(double)));
    wf.read(reinterpret_cast<char*>(l.b.data()),
            static_cast<std::streamsize>(l.b.size() * sizeof(double)));
  }
  if (!wf) throw std::runtime_error("truncated weights file for " + key);

  std::ifstream mf(dir / (key + ".json"));
  if (!mf) throw std::runtime_error("missing metadata file for " + key);
  nlohmann::json meta = nlohmann::json::parse(mf);
  net.family = meta.at("family").get<std::string>();
  net.k = meta.at("k").get<int>();
  net.seed = meta.at("seed").get<std::uint64_t>();
  for (const auto& e : meta.at("trace"))
    net.trace.push_back({e.at("train_loss").get<double>(),
                         e.at("val_accuracy").get<double>(),
                         e.at("lr").get<double>()});
  if (hp_out) *hp_out = meta.at("hyperparams").get<Hyperparams>();
  return net;
}

}  // namespace memsplit
