#include "memsplit/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "memsplit/errors.hpp"
#include "memsplit/json_io.hpp"
#include "memsplit/numeric.hpp"
#include "memsplit/rng.hpp"
#include "memsplit/train.hpp"

namespace memsplit {

std::string SweepRecord::key() const {
  return "b" + std::to_string(budget_params) + "-n" + std::to_string(n_members) +
         "-r" + std::to_string(replicate);
}

std::string SweepRecord::to_jsonl() const {
  nlohmann::json j;
  j["v"] = kRecordSchemaVersion;
  j["budget_params"] = budget_params;
  j["budget_std_units"] = budget_std_units;
  j["N"] = n_members;
  j["k"] = k;
  j["member_params"] = member_params;
  j["replicate"] = replicate;
  j["member_seeds"] = member_seeds;
  j["accuracy"] = quality.accuracy;
  j["nll"] = quality.nll;
  j["calibrated_nll"] = quality.calibrated_nll;
  j["temperature"] = quality.temperature;
  j["temperature_warning"] = quality.temperature_warning;
  return j.dump();
}

SweepRecord SweepRecord::from_jsonl(const std::string& line) {
  const nlohmann::json j = nlohmann::json::parse(line);
  if (j.at("v").get<int>() != kRecordSchemaVersion)
    throw std::runtime_error("unsupported record schema version");
  SweepRecord r;
  r.budget_params = j.at("budget_params").get<std::int64_t>();
  r.budget_std_units = j.at("budget_std_units").get<double>();
  r.n_members = j.at("N").get<int>();
  r.k = j.at("k").get<int>();
  r.member_params = j.at("member_params").get<std::int64_t>();
  r.replicate = j.at("replicate").get<int>();
  r.member_seeds = j.at("member_seeds").get<std::vector<std::uint64_t>>();
  r.quality.accuracy = j.at("accuracy").get<double>();
  r.quality.nll = j.at("nll").get<double>();
  r.quality.calibrated_nll = j.at("calibrated_nll").get<double>();
  r.quality.temperature = j.at("temperature").get<double>();
  r.quality.temperature_warning = j.at("temperature_warning").get<bool>();
  if (r.n_members <= 0 || static_cast<int>(r.member_seeds.size()) != r.n_members)
    throw std::runtime_error("record seed set does not match N");
  return r;
}

RecordStore::RecordStore(std::filesystem::path file) : file_(std::move(file)) {}

std::vector<SweepRecord> RecordStore::load() const {
  std::vector<SweepRecord> records;
  std::ifstream in(file_);
  if (!in) return records;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      records.push_back(SweepRecord::from_jsonl(line));
    } catch (const std::exception& e) {
      throw DataCorruptionError("corrupt record at " + file_.string() + ":" +
                                    std::to_string(line_no) + ": " + e.what(),
                                file_.string(), line_no);
    }
  }
  return records;
}

void RecordStore::append(const SweepRecord& record) {
  std::filesystem::create_directories(file_.parent_path());
  std::ofstream out(file_, std::ios::app);
  if (!out) throw std::runtime_error("cannot append to " + file_.string());
  out << record.to_jsonl() << '\n';
  out.flush();
}

std::vector<CellPlan> plan_sweep(const ArchFamily& family, const Budget& budget,
                                 std::span<const int> n_grid) {
  if (budget.params <= 0) throw std::invalid_argument("budget must be positive");
  std::vector<CellPlan> plan;
  for (int n : n_grid) {
    if (n <= 0) throw std::invalid_argument("ensemble sizes must be positive");
    CellPlan cell;
    cell.n_members = n;
    const std::int64_t member_budget = budget.params / n;
    try {
      const WidthSolve ws = solve_width(family, member_budget);
      cell.k = ws.k;
      cell.clamped = ws.clamped;
      cell.member_params = param_count(family, ws.k);
      cell.feasible = true;
    } catch (const BudgetTooSmallError&) {
      cell.feasible = false;
    }
    plan.push_back(cell);
  }
  return plan;
}

std::vector<std::uint64_t> derive_member_seeds(std::uint64_t root_seed,
                                               std::int64_t budget_params, int n_members,
                                               int replicate) {
  std::vector<std::uint64_t> seeds(n_members);
  for (int m = 0; m < n_members; ++m)
    seeds[m] = seed_chain(root_seed, {static_cast<std::uint64_t>(budget_params),
                                      static_cast<std::uint64_t>(n_members),
                                      static_cast<std::uint64_t>(replicate),
                                      static_cast<std::uint64_t>(m)});
  // Distinct initializations within an ensemble are part of the contract;
  // resolve (astronomically unlikely) collisions deterministically.
  std::set<std::uint64_t> seen;
  for (auto& s : seeds) {
    while (seen.count(s)) s = mix64(s + kSeedGamma);
    seen.insert(s);
  }
  return seeds;
}

namespace {

struct CellTask {
  int index = 0;  // canonical commit order
  int n_members = 0;
  int k = 0;
  std::int64_t member_params = 0;
  int replicate = 0;
  Hyperparams hp;
};

}  // namespace

std::vector<SweepRecord> run_sweep(const ArchFamily& family, const Budget& budget,
                                   const HpSource& hp_source, const DatasetSplit& data,
                                   const SweepOptions& opts) {
  if (family.name != "mlp")
    throw std::invalid_argument("run_sweep trains the mlp family only; use plan_sweep for " +
                                family.name);
  if (opts.replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  if (opts.run_dir.empty()) throw std::invalid_argument("run_sweep needs a run directory");

  auto log = [&](const std::string& msg) {
    if (opts.log) opts.log(msg);
  };

  const std::vector<CellPlan> plan = plan_sweep(family, budget, opts.n_grid);
  bool any_feasible = false;
  for (const CellPlan& c : plan) {
    if (c.feasible) {
      any_feasible = true;
    } else {
      log("skipping N=" + std::to_string(c.n_members) + " at budget " +
          std::to_string(budget.params) + ": member budget below param_count(k_min)");
    }
  }
  if (!any_feasible)
    throw std::invalid_argument("no feasible ensemble size for budget " +
                                std::to_string(budget.params));

  RecordStore store(opts.run_dir / "records.jsonl");
  std::map<std::string, SweepRecord> existing;
  for (SweepRecord& r : store.load()) existing.emplace(r.key(), std::move(r));

  // Hyperparameters per member size resolve up front (the tuning cache is not
  // safe for concurrent writers).
  std::map<int, Hyperparams> hp_by_k;
  for (const CellPlan& c : plan) {
    if (!c.feasible || hp_by_k.count(c.k)) continue;
    if (hp_source.setting == 'A') {
      hp_by_k[c.k] = hp_source.fixed;
    } else {
      TuneRequest req;
      req.family = &family;
      req.k = c.k;
      req.data = &data;
      req.method = hp_source.method;
      req.space = hp_source.space;
      req.base = hp_source.fixed;
      req.bo = hp_source.bo;
      req.cache_file = hp_source.cache_file;
      const TunedHp tuned = tuned_hp_for_size(req);
      hp_by_k[c.k] = tuned.hp;
      log("tuned hyperparameters for k=" + std::to_string(c.k) +
          (tuned.cache_hit ? " (cache hit)" : ""));
    }
  }

  // Canonical cell order: ascending N, then replicate.
  std::vector<CellTask> tasks;
  std::vector<SweepRecord> results;
  int index = 0;
  for (const CellPlan& c : plan) {
    if (!c.feasible) continue;
    for (int rep = 0; rep < opts.replicates; ++rep) {
      CellTask t;
      t.index = index++;
      t.n_members = c.n_members;
      t.k = c.k;
      t.member_params = c.member_params;
      t.replicate = rep;
      t.hp = hp_by_k.at(c.k);
      tasks.push_back(t);
    }
  }
  results.resize(tasks.size());

  const DatasetSplit* train_data = &data;
  DatasetSplit merged;
  if (opts.retrain_on_full && data.val.size() > 0) {
    merged = retrain_merge(data);
    train_data = &merged;
  }

  std::vector<char> done(tasks.size(), 0);
  std::mutex commit_mutex;
  std::size_t next_commit = 0;
  std::atomic<std::size_t> next_task{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next_task.fetch_add(1);
      if (i >= tasks.size()) return;
      {
        std::lock_guard<std::mutex> lk(failure_mutex);
        if (failure) return;
      }
      const CellTask& t = tasks[i];
      try {
        SweepRecord rec;
        rec.budget_params = budget.params;
        rec.budget_std_units = budget.standard_units;
        rec.n_members = t.n_members;
        rec.k = t.k;
        rec.member_params = t.member_params;
        rec.replicate = t.replicate;
        rec.member_seeds =
            derive_member_seeds(opts.root_seed, budget.params, t.n_members, t.replicate);

        const std::string key = rec.key();
        auto found = existing.find(key);
        if (found != existing.end()) {
          rec = found->second;
        } else {
          std::vector<MlpNet> members;
          members.reserve(t.n_members);
          for (int m = 0; m < t.n_members; ++m) {
            Hyperparams hp = t.hp;
            hp.seed = rec.member_seeds[m];
            MlpNet net = init_network(family, t.k, hp.seed);
            members.push_back(train(std::move(net), *train_data, hp));
            if (opts.save_members) {
              save_member(members.back(), hp, opts.run_dir / "members",
                          key + "-m" + std::to_string(m));
            }
          }
          rec.quality = evaluate(members, data.test, data.val.size() > 0 ? &data.val : nullptr);
        }

        std::unique_lock<std::mutex> lk(commit_mutex);
        results[i] = rec;
        done[i] = found != existing.end() ? 2 : 1;
        // Commit in canonical order so the record file is append-only,
        // resumable and byte-stable regardless of scheduling.
        while (next_commit < tasks.size() && done[next_commit]) {
          if (done[next_commit] == 1) {
            store.append(results[next_commit]);
            log("completed " + results[next_commit].key());
          }
          ++next_commit;
        }
        commit_cv.notify_all();
      } catch (...) {
        std::lock_guard<std::mutex> lk(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const int jobs = std::max(1, opts.jobs);
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  return results;
}

SplitCurve optimal_split(std::span<const SweepRecord> records, Metric metric) {
  if (records.empty()) throw std::invalid_argument("optimal_split needs records");
  const std::int64_t budget = records[0].budget_params;
  for (const SweepRecord& r : records)
    if (r.budget_params != budget)
      throw std::invalid_argument("optimal_split records must share one budget");

  std::map<int, std::vector<const SweepRecord*>> by_n;
  for (const SweepRecord& r : records) by_n[r.n_members].push_back(&r);

  SplitCurve curve;
  curve.budget_params = budget;
  curve.budget_std_units = records[0].budget_std_units;
  curve.metric = metric;

  for (const auto& [n, rs] : by_n) {
    std::vector<double> vals;
    vals.reserve(rs.size());
    for (const SweepRecord* r : rs)
      vals.push_back(metric == Metric::kAccuracy ? r->quality.accuracy
                                                 : r->quality.calibrated_nll);
    CurvePoint p;
    p.n_members = n;
    p.k = rs.front()->k;
    p.member_params = rs.front()->member_params;
    p.mean = mean_of(vals);
    p.stddev = stddev_of(vals);
    p.replicates = static_cast<int>(vals.size());
    curve.points.push_back(p);
  }

  // Argmax of mean accuracy (argmin for NLL); ties under 1e-12 keep the
  // smaller N because points ascend in N.
  const CurvePoint* best = &curve.points.front();
  for (const CurvePoint& p : curve.points) {
    const bool better = metric == Metric::kAccuracy ? p.mean > best->mean + 1e-12
                                                    : p.mean < best->mean - 1e-12;
    if (better) best = &p;
  }
  curve.optimal_n = best->n_members;
  curve.msa_holds = curve.optimal_n > 1;
  return curve;
}

std::string replicate_protocol_warning(const SplitCurve& curve) {
  std::string warning;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const CurvePoint& p = curve.points[i];
    const bool largest = i + 1 == curve.points.size();
    const int needed = largest ? 1 : 3;
    if (p.replicates < needed) {
      warning += "point N=" + std::to_string(p.n_members) + " has " +
                 std::to_string(p.replicates) + " replicate(s), protocol wants >= " +
                 std::to_string(needed) + "; ";
    }
  }
  return warning;
}

std::vector<TrajectoryRow> optimal_trajectory(std::span<const SplitCurve> curves) {
  if (curves.empty()) throw std::invalid_argument("optimal_trajectory needs curves");
  std::vector<TrajectoryRow> rows;
  for (const SplitCurve& c : curves) {
    const CurvePoint* opt = nullptr;
    for (const CurvePoint& p : c.points)
      if (p.n_members == c.optimal_n) opt = &p;
    TrajectoryRow row;
    row.budget_params = c.budget_params;
    row.budget_std_units = c.budget_std_units;
    row.optimal_n = c.optimal_n;
    row.k = opt->k;
    row.member_params = opt->member_params;
    row.mean_quality = opt->mean;
    rows.push_back(row);
  }
  std::sort(rows.begin(), rows.end(), [](const TrajectoryRow& a, const TrajectoryRow& b) {
    return a.budget_params < b.budget_params;
  });
  return rows;
}

}  // namespace memsplit
