#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "memsplit/errors.hpp"

namespace memsplit {

// A layer dimension that scales affinely with the width factor k.
// Convolutions fold the kernel area into fan_in (3x3 conv in->out has
// fan_in = 9*in), so weight count is always fan_in * fan_out.
struct AffineDim {
  std::int64_t per_k = 0;
  std::int64_t constant = 0;
  std::int64_t at(std::int64_t k) const { return per_k * k + constant; }
};

struct LayerSpec {
  std::string name;
  AffineDim fan_in;
  AffineDim fan_out;
  bool has_bias = false;
  AffineDim aux;  // normalization scale/shift attached to this layer
};

// param_count(k) = a*k^2 + b*k + c, exact over the integers.
struct QuadCoeffs {
  std::int64_t a = 0, b = 0, c = 0;
  std::int64_t eval(std::int64_t k) const { return (a * k + b) * k + c; }
};

struct ArchFamily {
  std::string name;
  std::vector<LayerSpec> layers;
  int k_min = 1;
  int k_max = 1;
  int num_classes = 0;  // classifier families
  int vocab_src = 0;    // transformer6 only
  int vocab_tgt = 0;
  std::optional<int> standard_k;

  QuadCoeffs coeffs() const;
};

struct Budget {
  std::int64_t params = 0;
  double standard_units = 0.0;
};

struct WidthSolve {
  int k = 0;
  bool clamped = false;  // target exceeded param_count(k_max)
};

// Per-family knobs that the config file may override.
struct FamilyOptions {
  int num_classes = 100;  // vgg16-cifar / wrn28 output classes
  int mlp_inputs = 16;
  int mlp_classes = 4;
  std::vector<int> mlp_hidden_template = {1, 2};  // hidden widths as multiples of k
  int mlp_standard_k = 16;
  // Vocabulary sizes calibrated so the k=512 configuration lands on the
  // family's standard budget; frozen as the defaults.
  int vocab_src = 8904;
  int vocab_tgt = 6636;
};

ArchFamily make_mlp(int inputs, int classes, const std::vector<int>& hidden_template,
                    int standard_k);
ArchFamily make_vgg16_cifar(int classes);
ArchFamily make_wrn28(int classes);
ArchFamily make_transformer6(int vocab_src, int vocab_tgt);

// name is one of: mlp, vgg16-cifar, wrn28, transformer6.
ArchFamily family_by_name(const std::string& name, const FamilyOptions& opts = {});
std::vector<std::string> family_names();

// Exact parameter count at width factor k. Throws WidthRangeError outside
// [k_min, k_max].
std::int64_t param_count(const ArchFamily& family, int k);

// Inverts param_count: nearest integer width for target_params, ties toward
// the smaller k. Throws BudgetTooSmallError below param_count(k_min); clamps
// to k_max (with the flag set) above param_count(k_max).
WidthSolve solve_width(const ArchFamily& family, std::int64_t target_params);

// Budget of the commonly used configuration (standard_k).
Budget standard_budget(const ArchFamily& family);

// Budget from a raw parameter count, with standard_units filled in.
Budget make_budget(const ArchFamily& family, std::int64_t params);

}  // namespace memsplit
