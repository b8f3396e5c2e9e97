#include "memsplit/archspace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace memsplit {

QuadCoeffs ArchFamily::coeffs() const {
  QuadCoeffs q;
  for (const LayerSpec& l : layers) {
    // (p*k + c) * (p'*k + c') expanded exactly in integer arithmetic.
    q.a += l.fan_in.per_k * l.fan_out.per_k;
    q.b += l.fan_in.per_k * l.fan_out.constant + l.fan_in.constant * l.fan_out.per_k;
    q.c += l.fan_in.constant * l.fan_out.constant;
    if (l.has_bias) {
      q.b += l.fan_out.per_k;
      q.c += l.fan_out.constant;
    }
    q.b += l.aux.per_k;
    q.c += l.aux.constant;
  }
  return q;
}

namespace {

LayerSpec linear(std::string name, AffineDim in, AffineDim out, bool bias,
                 AffineDim aux = {}) {
  return LayerSpec{std::move(name), in, out, bias, aux};
}

// 3x3 convolution: kernel area folded into fan_in.
LayerSpec conv3x3(std::string name, AffineDim in_channels, AffineDim out_channels,
                  bool bias, AffineDim aux = {}) {
  return LayerSpec{std::move(name),
                   AffineDim{9 * in_channels.per_k, 9 * in_channels.constant},
                   out_channels, bias, aux};
}

LayerSpec conv1x1(std::string name, AffineDim in_channels, AffineDim out_channels,
                  AffineDim aux = {}) {
  return LayerSpec{std::move(name), in_channels, out_channels, false, aux};
}

}  // namespace

ArchFamily make_mlp(int inputs, int classes, const std::vector<int>& hidden_template,
                    int standard_k) {
  if (inputs <= 0 || classes < 2 || hidden_template.empty())
    throw std::invalid_argument("mlp family needs inputs > 0, classes >= 2, nonempty hidden template");
  for (int m : hidden_template)
    if (m <= 0) throw std::invalid_argument("mlp hidden template multipliers must be positive");

  ArchFamily f;
  f.name = "mlp";
  f.k_min = 1;
  f.k_max = 512;
  f.num_classes = classes;
  f.standard_k = standard_k;

  AffineDim prev{0, inputs};
  for (std::size_t i = 0; i < hidden_template.size(); ++i) {
    AffineDim width{hidden_template[i], 0};
    f.layers.push_back(linear("hidden" + std::to_string(i + 1), prev, width, true));
    prev = width;
  }
  f.layers.push_back(linear("out", prev, AffineDim{0, classes}, true));
  return f;
}

ArchFamily make_vgg16_cifar(int classes) {
  if (classes < 2) throw std::invalid_argument("vgg16-cifar needs classes >= 2");
  ArchFamily f;
  f.name = "vgg16-cifar";
  f.k_min = 2;
  f.k_max = 181;
  f.num_classes = classes;
  f.standard_k = 64;

  // 13 conv layers at stage widths [k,k,2k,2k,4k,4k,4k,8k,8k,8k,8k,8k,8k].
  const int stage[13] = {1, 1, 2, 2, 4, 4, 4, 8, 8, 8, 8, 8, 8};
  AffineDim prev{0, 3};
  for (int i = 0; i < 13; ++i) {
    AffineDim out{stage[i], 0};
    f.layers.push_back(conv3x3("conv" + std::to_string(i + 1), prev, out, true));
    prev = out;
  }
  f.layers.push_back(linear("fc1", AffineDim{8, 0}, AffineDim{8, 0}, true));
  f.layers.push_back(linear("fc2", AffineDim{8, 0}, AffineDim{8, 0}, true));
  f.layers.push_back(linear("fc3", AffineDim{8, 0}, AffineDim{0, classes}, true));
  return f;
}

ArchFamily make_wrn28(int classes) {
  if (classes < 2) throw std::invalid_argument("wrn28 needs classes >= 2");
  ArchFamily f;
  f.name = "wrn28";
  f.k_min = 5;
  f.k_max = 453;
  f.num_classes = classes;
  f.standard_k = 160;

  // Initial 3x3 conv with 16 fixed filters, then 3 groups of 4 basic blocks
  // at widths [k, 2k, 4k] (depth 28 = 6*4 + 4). Pre-activation batch norm
  // scale/shift is attached as aux to the conv it feeds; convs carry no bias.
  // The first block of each group has a 1x1 shortcut conv.
  f.layers.push_back(conv3x3("conv0", AffineDim{0, 3}, AffineDim{0, 16}, false));

  const AffineDim group_width[3] = {{1, 0}, {2, 0}, {4, 0}};
  AffineDim in{0, 16};
  for (int g = 0; g < 3; ++g) {
    const AffineDim w = group_width[g];
    for (int b = 0; b < 4; ++b) {
      const std::string tag = "g" + std::to_string(g + 1) + "b" + std::to_string(b + 1);
      const AffineDim block_in = (b == 0) ? in : w;
      f.layers.push_back(conv3x3(tag + "_conv1", block_in, w, false,
                                 AffineDim{2 * block_in.per_k, 2 * block_in.constant}));
      f.layers.push_back(conv3x3(tag + "_conv2", w, w, false,
                                 AffineDim{2 * w.per_k, 2 * w.constant}));
      if (b == 0) f.layers.push_back(conv1x1(tag + "_shortcut", block_in, w));
    }
    in = w;
  }
  // Final batch norm rides on the classifier layer.
  f.layers.push_back(linear("fc", AffineDim{4, 0}, AffineDim{0, classes}, true,
                            AffineDim{8, 0}));
  return f;
}

ArchFamily make_transformer6(int vocab_src, int vocab_tgt) {
  if (vocab_src <= 0 || vocab_tgt <= 0)
    throw std::invalid_argument("transformer6 needs positive vocabulary sizes");
  ArchFamily f;
  f.name = "transformer6";
  f.k_min = 32;
  f.k_max = 1048;
  f.vocab_src = vocab_src;
  f.vocab_tgt = vocab_tgt;
  f.standard_k = 512;

  // d_model = k, d_ffn = 2k, 4 heads (head count does not change the count:
  // the q/k/v/out projections are full k x k matrices). Sinusoidal positions
  // carry no parameters; decoder input and output embeddings are shared so
  // the target embedding is counted once.
  f.layers.push_back(linear("src_embed", AffineDim{0, vocab_src}, AffineDim{1, 0}, false));
  f.layers.push_back(linear("tgt_embed", AffineDim{0, vocab_tgt}, AffineDim{1, 0}, false));

  const AffineDim k1{1, 0}, k2{2, 0}, ln{2, 0};
  auto add_attention = [&](const std::string& tag) {
    f.layers.push_back(linear(tag + "_q", k1, k1, true));
    f.layers.push_back(linear(tag + "_k", k1, k1, true));
    f.layers.push_back(linear(tag + "_v", k1, k1, true));
    f.layers.push_back(linear(tag + "_out", k1, k1, true, ln));
  };
  auto add_ffn = [&](const std::string& tag) {
    f.layers.push_back(linear(tag + "_ffn1", k1, k2, true));
    f.layers.push_back(linear(tag + "_ffn2", k2, k1, true, ln));
  };
  for (int i = 1; i <= 6; ++i) {
    const std::string tag = "enc" + std::to_string(i);
    add_attention(tag + "_self");
    add_ffn(tag);
  }
  for (int i = 1; i <= 6; ++i) {
    const std::string tag = "dec" + std::to_string(i);
    add_attention(tag + "_self");
    add_attention(tag + "_cross");
    add_ffn(tag);
  }
  return f;
}

ArchFamily family_by_name(const std::string& name, const FamilyOptions& opts) {
  if (name == "mlp")
    return make_mlp(opts.mlp_inputs, opts.mlp_classes, opts.mlp_hidden_template,
                    opts.mlp_standard_k);
  if (name == "vgg16-cifar") return make_vgg16_cifar(opts.num_classes);
  if (name == "wrn28") return make_wrn28(opts.num_classes);
  if (name == "transformer6") return make_transformer6(opts.vocab_src, opts.vocab_tgt);
  throw std::invalid_argument("unknown architecture family: " + name);
}

std::vector<std::string> family_names() {
  return {"mlp", "vgg16-cifar", "wrn28", "transformer6"};
}

std::int64_t param_count(const ArchFamily& family, int k) {
  if (k < family.k_min || k > family.k_max)
    throw WidthRangeError("width factor " + std::to_string(k) + " outside [" +
                          std::to_string(family.k_min) + ", " +
                          std::to_string(family.k_max) + "] for " + family.name);
  return family.coeffs().eval(k);
}

WidthSolve solve_width(const ArchFamily& family, std::int64_t target_params) {
  const QuadCoeffs q = family.coeffs();
  const std::int64_t lo = q.eval(family.k_min);
  if (target_params < lo)
    throw BudgetTooSmallError("budget " + std::to_string(target_params) +
                              " below param_count(k_min=" + std::to_string(family.k_min) +
                              ") = " + std::to_string(lo) + " for " + family.name);
  if (target_params >= q.eval(family.k_max)) {
    return {family.k_max, target_params > q.eval(family.k_max)};
  }

  // Positive root of a*k^2 + b*k + (c - target) = 0; the nearest lattice
  // point is floor or ceil of the root. Ties break toward the smaller k.
  const double a = static_cast<double>(q.a);
  const double b = static_cast<double>(q.b);
  const double c = static_cast<double>(q.c - target_params);
  const double root = (-b + std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);

  int best_k = 0;
  std::int64_t best_err = -1;
  const int base = static_cast<int>(std::floor(root));
  for (int k = base - 1; k <= base + 2; ++k) {
    if (k < family.k_min || k > family.k_max) continue;
    const std::int64_t err = std::llabs(q.eval(k) - target_params);
    if (best_err < 0 || err < best_err) {
      best_err = err;
      best_k = k;
    }
  }
  return {best_k, false};
}

Budget standard_budget(const ArchFamily& family) {
  if (!family.standard_k)
    throw std::invalid_argument("family " + family.name + " has no standard width factor");
  return Budget{param_count(family, *family.standard_k), 1.0};
}

Budget make_budget(const ArchFamily& family, std::int64_t params) {
  if (params <= 0) throw std::invalid_argument("budget must be positive");
  const Budget std_b = standard_budget(family);
  return Budget{params, static_cast<double>(params) / static_cast<double>(std_b.params)};
}

}  // namespace memsplit
