#include "memsplit/ensemble.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "memsplit/numeric.hpp"

namespace memsplit {

namespace {

constexpr double kProbFloor = 1e-12;
constexpr double kLogTempLo = -2.995732273553991;  // log 0.05
constexpr double kLogTempHi = 2.995732273553991;   // log 20
constexpr double kLogTempTol = 1e-4;

// Floor at 1e-12 and renormalize rows, then take logs.
Matrix floored_log_probs(const Matrix& probs) {
  Matrix lp(probs.rows, probs.cols);
  for (int r = 0; r < probs.rows; ++r) {
    const double* p = probs.row(r).data();
    double* out = lp.row(r).data();
    double sum = 0.0;
    for (int c = 0; c < probs.cols; ++c) sum += std::max(p[c], kProbFloor);
    for (int c = 0; c < probs.cols; ++c)
      out[c] = std::log(std::max(p[c], kProbFloor) / sum);
  }
  return lp;
}

double nll_of_log_probs(const Matrix& lp, const std::vector<int>& labels,
                        double temperature) {
  const double inv_t = 1.0 / temperature;
  double total = 0.0;
  std::vector<double> scaled(lp.cols);
  for (int r = 0; r < lp.rows; ++r) {
    const double* row = lp.row(r).data();
    for (int c = 0; c < lp.cols; ++c) scaled[c] = row[c] * inv_t;
    total += logsumexp(scaled) - scaled[labels[r]];
  }
  return total / lp.rows;
}

}  // namespace

Matrix ensemble_predict(std::span<const MlpNet> members, const Matrix& x) {
  if (members.empty()) throw std::invalid_argument("empty ensemble");
  for (const MlpNet& m : members)
    if (m.family != members[0].family || m.k != members[0].k)
      throw std::invalid_argument("ensemble members must share family and width factor");

  Matrix sum = forward(members[0], x, Mode::kEval, 0.0, 0);
  for (std::size_t i = 1; i < members.size(); ++i) {
    const Matrix p = forward(members[i], x, Mode::kEval, 0.0, 0);
    for (std::size_t j = 0; j < sum.data.size(); ++j) sum.data[j] += p.data[j];
  }
  const double inv_n = 1.0 / static_cast<double>(members.size());
  for (double& v : sum.data) v *= inv_n;
  return sum;
}

double accuracy_of(const Matrix& probs, const std::vector<int>& labels) {
  if (probs.rows == 0) throw std::invalid_argument("empty probability table");
  if (static_cast<int>(labels.size()) != probs.rows)
    throw std::invalid_argument("probability rows and label count differ");
  int correct = 0;
  for (int r = 0; r < probs.rows; ++r) {
    const double* p = probs.row(r).data();
    int arg = 0;
    for (int c = 1; c < probs.cols; ++c)
      if (p[c] > p[arg]) arg = c;
    if (arg == labels[r]) ++correct;
  }
  return static_cast<double>(correct) / probs.rows;
}

double nll_at_temperature(const Matrix& probs, const std::vector<int>& labels,
                          double temperature) {
  if (probs.rows == 0 || static_cast<int>(labels.size()) != probs.rows)
    throw std::invalid_argument("bad probability table for NLL");
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  return nll_of_log_probs(floored_log_probs(probs), labels, temperature);
}

TemperatureFit fit_temperature(const Matrix& probs, const std::vector<int>& labels) {
  if (probs.rows == 0 || static_cast<int>(labels.size()) != probs.rows)
    throw std::invalid_argument("bad probability table for temperature fit");
  const std::set<int> distinct(labels.begin(), labels.end());
  if (distinct.size() < 2) return {1.0, true};

  const Matrix lp = floored_log_probs(probs);
  auto objective = [&](double log_t) {
    return nll_of_log_probs(lp, labels, std::exp(log_t));
  };
  const MinResult m =
      golden_section_minimize(objective, kLogTempLo, kLogTempHi, kLogTempTol);
  // Never do worse than the unscaled probabilities.
  if (nll_of_log_probs(lp, labels, 1.0) <= m.fx) return {1.0, false};
  return {std::exp(m.x), false};
}

CalibratedQuality evaluate_probs(const Matrix& test_probs,
                                 const std::vector<int>& test_labels,
                                 const Matrix* val_probs,
                                 const std::vector<int>* val_labels) {
  if (test_probs.rows == 0) throw std::invalid_argument("empty test set");
  CalibratedQuality q;
  q.accuracy = accuracy_of(test_probs, test_labels);
  q.nll = nll_at_temperature(test_probs, test_labels, 1.0);
  if (val_probs != nullptr && val_probs->rows > 0) {
    const TemperatureFit fit = fit_temperature(*val_probs, *val_labels);
    q.temperature = fit.temperature;
    q.temperature_warning = fit.warning;
  }
  q.calibrated_nll = nll_at_temperature(test_probs, test_labels, q.temperature);
  // A temperature fitted on validation data may not transfer; never report
  // a calibrated NLL above the unscaled one.
  if (q.calibrated_nll > q.nll) {
    q.temperature = 1.0;
    q.calibrated_nll = q.nll;
  }
  return q;
}

CalibratedQuality evaluate(std::span<const MlpNet> members, const SplitData& test,
                           const SplitData* val) {
  if (test.size() == 0) throw std::invalid_argument("empty test set");
  const Matrix test_probs = ensemble_predict(members, test.x);
  if (val != nullptr && val->size() > 0) {
    const Matrix val_probs = ensemble_predict(members, val->x);
    return evaluate_probs(test_probs, test.y, &val_probs, &val->y);
  }
  return evaluate_probs(test_probs, test.y, nullptr, nullptr);
}

}  // namespace memsplit
