#pragma once

#include <stdexcept>
#include <string>

namespace memsplit {

// Width factor outside a family's [k_min, k_max].
struct WidthRangeError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Requested budget below the parameter count at k_min.
struct BudgetTooSmallError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Training loss went non-finite or above the divergence threshold.
struct TrainingDivergenceError : std::runtime_error {
  int epoch;
  TrainingDivergenceError(const std::string& msg, int epoch_idx)
      : std::runtime_error(msg), epoch(epoch_idx) {}
};

// Persisted record file failed validation. line_no is 1-based.
struct DataCorruptionError : std::runtime_error {
  std::string file;
  long line_no;
  DataCorruptionError(const std::string& msg, std::string file_name, long line)
      : std::runtime_error(msg), file(std::move(file_name)), line_no(line) {}
};

}  // namespace memsplit
