#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "memsplit/archspace.hpp"
#include "memsplit/dataset.hpp"
#include "memsplit/ensemble.hpp"
#include "memsplit/tune.hpp"

namespace memsplit {

constexpr int kRecordSchemaVersion = 1;

// One completed sweep cell: ensemble of N width-k members at one budget.
struct SweepRecord {
  std::int64_t budget_params = 0;
  double budget_std_units = 0.0;
  int n_members = 0;  // N
  int k = 0;
  std::int64_t member_params = 0;
  int replicate = 0;
  std::vector<std::uint64_t> member_seeds;
  CalibratedQuality quality;

  std::string key() const;  // "b<params>-n<N>-r<replicate>"
  std::string to_jsonl() const;
  static SweepRecord from_jsonl(const std::string& line);
};

// Append-only JSON-lines store, one record per line, validated on load.
class RecordStore {
 public:
  explicit RecordStore(std::filesystem::path file);
  const std::filesystem::path& file() const { return file_; }
  // Throws DataCorruptionError naming the first bad line.
  std::vector<SweepRecord> load() const;
  void append(const SweepRecord& record);

 private:
  std::filesystem::path file_;
};

// Feasibility plan for one budget: member width per requested N; infeasible
// entries (member budget below param_count(k_min)) are marked, not solved.
struct CellPlan {
  int n_members = 0;
  int k = 0;
  std::int64_t member_params = 0;
  bool feasible = false;
  bool clamped = false;
};
std::vector<CellPlan> plan_sweep(const ArchFamily& family, const Budget& budget,
                                 std::span<const int> n_grid);

// Hyperparameter source: fixed values (setting A) or per-member-size tuning
// (setting B) through tuned_hp_for_size.
struct HpSource {
  char setting = 'A';
  Hyperparams fixed;
  std::string method;  // grid | bo | staged-grid (setting B)
  SearchSpace space;
  BoOptions bo;
  std::filesystem::path cache_file;
};

struct SweepOptions {
  std::vector<int> n_grid = {1, 2, 4, 8, 16};
  int replicates = 5;
  std::uint64_t root_seed = 42;
  int jobs = 1;
  bool retrain_on_full = false;  // train members on train U val
  bool save_members = false;
  std::filesystem::path run_dir;
  std::function<void(const std::string&)> log;  // progress sink, may be null
};

// Trains and evaluates every feasible (N, replicate) cell for one budget.
// Resumable: cells already present in the store are not recomputed. Records
// are committed in canonical cell order so reruns are byte-identical.
// Member seeds derive from (root_seed, budget, N, replicate, member index).
std::vector<SweepRecord> run_sweep(const ArchFamily& family, const Budget& budget,
                                   const HpSource& hp_source, const DatasetSplit& data,
                                   const SweepOptions& opts);

enum class Metric { kAccuracy, kCalibratedNll };

struct CurvePoint {
  int n_members = 0;
  int k = 0;
  std::int64_t member_params = 0;
  double mean = 0.0;
  double stddev = 0.0;
  int replicates = 0;
};

struct SplitCurve {
  std::int64_t budget_params = 0;
  double budget_std_units = 0.0;
  Metric metric = Metric::kAccuracy;
  std::vector<CurvePoint> points;  // ascending N
  int optimal_n = 0;
  bool msa_holds = false;
};

// Aggregates replicates per N and locates the optimal split. Ties (mean gap
// below 1e-12) break toward the smaller N. Records must share one budget.
SplitCurve optimal_split(std::span<const SweepRecord> records,
                         Metric metric = Metric::kAccuracy);

// Replicate-count protocol check (>= 3 everywhere, >= 1 at the largest N);
// returns a warning message or empty string.
std::string replicate_protocol_warning(const SplitCurve& curve);

struct TrajectoryRow {
  std::int64_t budget_params = 0;
  double budget_std_units = 0.0;
  int optimal_n = 0;
  int k = 0;
  std::int64_t member_params = 0;
  double mean_quality = 0.0;
};

// Fig.-4-style table: the optimal split per budget, ascending budget.
std::vector<TrajectoryRow> optimal_trajectory(std::span<const SplitCurve> curves);

// Deterministic member seed set for one cell (exposed for tests/oracles).
std::vector<std::uint64_t> derive_member_seeds(std::uint64_t root_seed,
                                               std::int64_t budget_params, int n_members,
                                               int replicate);

}  // namespace memsplit
