#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "memsplit/matrix.hpp"

namespace memsplit {

// Descriptor string form (config-addressable):
//   <generator>:dim=16,classes=4,noise=0.3,train=4000,val=400,test=4000,seed=1
// Generators: gaussian-blobs, two-spirals, noisy-xor.
struct DatasetDesc {
  std::string generator = "gaussian-blobs";
  int dim = 16;
  int classes = 4;
  double noise = 0.3;
  int n_train = 4000;
  int n_val = 400;
  int n_test = 4000;
  std::uint64_t seed = 1;

  std::string to_string() const;
  static DatasetDesc parse(const std::string& descriptor);
};

struct SplitData {
  Matrix x;
  std::vector<int> y;
  int size() const { return x.rows; }
};

struct DatasetSplit {
  SplitData train;
  SplitData val;
  SplitData test;
  DatasetDesc desc;
};

// Deterministic generation: same descriptor, same bytes. Splits are carved
// from one sample stream by construction index (train, then val, then test),
// labels cycle within each split so class counts stay balanced within +/-1.
DatasetSplit generate(const DatasetDesc& desc);

// Validation merged into training (train = train U val, val empty, test kept).
DatasetSplit retrain_merge(const DatasetSplit& split);

// Class centroids of the gaussian-blobs generator: classes <= dim, pairwise
// distance exactly 1. Exposed so evaluation oracles can form true posteriors.
std::vector<std::vector<double>> blob_centroids(int dim, int classes);

// CSV layout: header x0..xD-1,label then one row per example.
void export_csv(const SplitData& split, std::ostream& out);

}  // namespace memsplit
