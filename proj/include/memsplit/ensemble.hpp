#pragma once

#include <span>
#include <vector>

#include "memsplit/dataset.hpp"
#include "memsplit/matrix.hpp"
#include "memsplit/mlp.hpp"

namespace memsplit {

// Post-softmax prediction averaging: the arithmetic mean of member
// probability rows, summed in ascending member-index order so results are
// bit-reproducible. Members must share family and width factor.
Matrix ensemble_predict(std::span<const MlpNet> members, const Matrix& x);

struct CalibratedQuality {
  double accuracy = 0.0;
  double nll = 0.0;             // mean NLL at temperature 1
  double calibrated_nll = 0.0;  // mean NLL at the fitted temperature
  double temperature = 1.0;
  bool temperature_warning = false;  // degenerate validation data
};

struct TemperatureFit {
  double temperature = 1.0;
  bool warning = false;
};

// Scalar temperature minimizing the mean NLL of softmax(log p / T) over
// T in [0.05, 20] (golden-section on log T, tolerance 1e-4). Probabilities
// are floored at 1e-12 and renormalized first. Fitting never does worse
// than T = 1; scaling never changes a row's argmax. Validation data with a
// single distinct label yields T = 1 with the warning flag set.
TemperatureFit fit_temperature(const Matrix& probs, const std::vector<int>& labels);

// Mean NLL of the temperature-scaled probabilities (floor 1e-12,
// renormalize, scale log-probabilities by 1/T).
double nll_at_temperature(const Matrix& probs, const std::vector<int>& labels,
                          double temperature);

// Fraction of argmax-correct rows; ties break toward the lowest class index.
double accuracy_of(const Matrix& probs, const std::vector<int>& labels);

// Accuracy and (calibrated) NLL on the test split; the temperature is fitted
// on the validation split, or fixed at 1 when val is null or empty.
CalibratedQuality evaluate(std::span<const MlpNet> members, const SplitData& test,
                           const SplitData* val);

// Same metrics for an already-computed probability table (used by oracles
// and the CLI report path).
CalibratedQuality evaluate_probs(const Matrix& test_probs, const std::vector<int>& test_labels,
                                 const Matrix* val_probs, const std::vector<int>* val_labels);

}  // namespace memsplit
