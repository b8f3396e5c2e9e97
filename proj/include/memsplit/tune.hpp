#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "memsplit/archspace.hpp"
#include "memsplit/dataset.hpp"
#include "memsplit/hyperparams.hpp"

namespace memsplit {

struct SearchDim {
  enum class Kind { kGrid, kInterval };
  enum class Scale { kLinear, kLog };

  std::string name;  // lr | weight_decay | dropout
  Kind kind = Kind::kGrid;
  std::vector<double> values;  // grid values in declared order
  double lo = 0.0;             // interval bounds, lo < hi
  double hi = 0.0;
  Scale scale = Scale::kLinear;
};

struct SearchSpace {
  std::vector<SearchDim> dims;
  std::string canonical_string() const;
};

struct Observation {
  std::vector<double> point;  // native-scale value per dim
  double score = 0.0;         // validation score, higher is better
  bool failed = false;
  std::string note;
};

struct SearchResult {
  Hyperparams best;
  double best_score = 0.0;
  std::vector<Observation> log;
};

// Scores a hyperparameter candidate; throws TrainingDivergenceError when the
// candidate cannot be trained (recorded as a failed observation).
using Objective = std::function<double(const Hyperparams&)>;

// base with the named dims overridden by the given values.
Hyperparams apply_point(const Hyperparams& base, const SearchSpace& space,
                        const std::vector<double>& values);

// Every combination once; ties break toward the lexicographically first
// combination in declared dim order.
SearchResult grid_search(const SearchSpace& space, const Hyperparams& base,
                         const Objective& objective);

// Two-stage shortcut: tune everything but weight decay at a fixed weight
// decay, then tune weight decay with the stage-1 winners.
SearchResult staged_grid_search(const SearchSpace& space, const Hyperparams& base,
                                const Objective& objective,
                                double stage1_weight_decay = 1e-4);

struct BoOptions {
  int iterations = 20;
  int init_points = 5;
  std::uint64_t seed = 0;
};

// Gaussian-process Bayesian optimization over continuous dims: quasi-random
// starts, then expected-improvement proposals from a refitted GP each round.
// Deterministic given the seed. Returns the best observed point.
SearchResult bo_search(const SearchSpace& space, const Hyperparams& base,
                       const Objective& objective, const BoOptions& opts);

// ---------------------------------------------------------------------------
// Gaussian process with a squared-exponential ARD kernel over the unit cube.
// Exposed so the EI/interpolation properties can be tested directly.
// ---------------------------------------------------------------------------
struct GpModel {
  std::vector<std::vector<double>> x;  // points in the unit cube
  std::vector<double> y;               // standardized targets
  std::vector<double> log_lengthscales;
  double log_signal_var = 0.0;
  double log_noise_var = -9.2103403719761836;  // 1e-4

  // Cholesky of K + (noise + jitter) I, doubling jitter from 1e-10 until the
  // factorization succeeds.
  void factorize();
  double log_marginal_likelihood();
  void posterior(const std::vector<double>& q, double* mean, double* var) const;
  // Marginal-likelihood ascent: seeded multi-start plus coordinate-wise
  // golden-section refinement. Noise variance is floored at 1e-6 here.
  void fit_hyperparams(std::uint64_t seed);

  double kernel(const std::vector<double>& a, const std::vector<double>& b) const;

 private:
  std::vector<double> chol_;
  std::vector<double> alpha_;
  double jitter_ = 0.0;
  bool factorized_ = false;
};

// EI of a posterior (mean, var) against the incumbent best. Nonnegative;
// zero at a noiselessly observed optimum.
double expected_improvement(double mean, double var, double best);

// ---------------------------------------------------------------------------
// Per-member-size tuning with a JSON-lines cache.
// ---------------------------------------------------------------------------
struct TuneRequest {
  const ArchFamily* family = nullptr;
  int k = 0;
  const DatasetSplit* data = nullptr;
  std::string method = "none";  // none (setting A) | grid | bo | staged-grid
  SearchSpace space;
  Hyperparams base;
  BoOptions bo;
  std::filesystem::path cache_file;  // empty disables caching
};

struct TunedHp {
  Hyperparams hp;
  double val_score = 0.0;
  bool cache_hit = false;
};

// Trains single networks of width k, scores them on the validation split and
// returns the winner. method "none" echoes the fixed base hyperparameters.
TunedHp tuned_hp_for_size(const TuneRequest& req);

// Paper presets: grid-search tables, BO ranges and the fixed no-tuning
// hyperparameters per family ("mlp" carries the desk-scale defaults).
SearchSpace table1_grid(const std::string& family);
SearchSpace bo_ranges(const std::string& family);
Hyperparams setting_a_defaults(const std::string& family);

}  // namespace memsplit
