#include "memsplit/dataset.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "memsplit/rng.hpp"

namespace memsplit {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void validate(const DatasetDesc& d) {
  require(d.generator == "gaussian-blobs" || d.generator == "two-spirals" ||
              d.generator == "noisy-xor",
          "unknown dataset generator: " + d.generator);
  require(d.dim >= 1, "dataset dim must be >= 1");
  require(d.classes >= 2, "dataset needs >= 2 classes");
  require(d.noise >= 0.0, "noise must be nonnegative");
  require(d.n_train >= d.classes, "train split smaller than class count");
  require(d.n_test >= d.classes, "test split smaller than class count");
  require(d.n_val == 0 || d.n_val >= d.classes,
          "val split smaller than class count (use 0 to disable)");
  if (d.generator == "gaussian-blobs")
    require(d.classes <= d.dim, "gaussian-blobs needs classes <= dim");
  else {
    require(d.classes == 2, d.generator + " is a 2-class generator");
    require(d.dim >= 2, d.generator + " needs dim >= 2");
  }
}

// One sample conditioned on its label; consumes a fixed walk of the stream.
void sample_point(const DatasetDesc& d,
                  const std::vector<std::vector<double>>& centroids, int label,
                  Rng& rng, double* out) {
  if (d.generator == "gaussian-blobs") {
    for (int j = 0; j < d.dim; ++j) out[j] = centroids[label][j] + d.noise * rng.normal();
    return;
  }
  if (d.generator == "two-spirals") {
    // Interleaved Archimedean arms, 1.5 turns, class 1 rotated by pi.
    const double t = rng.uniform01();
    const double theta = 3.0 * std::numbers::pi * t + (label == 1 ? std::numbers::pi : 0.0);
    const double r = 0.1 + 0.9 * t;
    out[0] = r * std::cos(theta) + d.noise * rng.normal();
    out[1] = r * std::sin(theta) + d.noise * rng.normal();
    for (int j = 2; j < d.dim; ++j) out[j] = d.noise * rng.normal();
    return;
  }
  // noisy-xor: four gaussian corners at (+-1/2, +-1/2); label = sign xor.
  const bool flip = rng.uniform01() < 0.5;
  const double s0 = flip ? -0.5 : 0.5;
  const double s1 = (label == 1) ? -s0 : s0;
  out[0] = s0 + d.noise * rng.normal();
  out[1] = s1 + d.noise * rng.normal();
  for (int j = 2; j < d.dim; ++j) out[j] = d.noise * rng.normal();
}

SplitData make_split(const DatasetDesc& d,
                     const std::vector<std::vector<double>>& centroids, int n,
                     Rng& rng) {
  SplitData s;
  s.x = Matrix(n, d.dim);
  s.y.resize(n);
  for (int i = 0; i < n; ++i) {
    const int label = i % d.classes;
    s.y[i] = label;
    sample_point(d, centroids, label, rng, s.x.row(i).data());
  }
  return s;
}

}  // namespace

std::vector<std::vector<double>> blob_centroids(int dim, int classes) {
  require(classes >= 2 && classes <= dim, "gaussian-blobs needs 2 <= classes <= dim");
  std::vector<std::vector<double>> c(classes, std::vector<double>(dim, 0.0));
  for (int i = 0; i < classes; ++i) c[i][i] = kInvSqrt2;  // pairwise distance 1
  return c;
}

DatasetSplit generate(const DatasetDesc& desc) {
  validate(desc);
  std::vector<std::vector<double>> centroids;
  if (desc.generator == "gaussian-blobs")
    centroids = blob_centroids(desc.dim, desc.classes);

  Rng rng(seed_chain(desc.seed, {0xDA7AULL}));
  DatasetSplit split;
  split.desc = desc;
  split.train = make_split(desc, centroids, desc.n_train, rng);
  split.val = make_split(desc, centroids, desc.n_val, rng);
  split.test = make_split(desc, centroids, desc.n_test, rng);
  return split;
}

DatasetSplit retrain_merge(const DatasetSplit& split) {
  if (split.val.size() == 0)
    throw std::invalid_argument("retrain_merge needs a nonempty validation split");
  DatasetSplit merged;
  merged.desc = split.desc;
  merged.test = split.test;

  const int n = split.train.size() + split.val.size();
  merged.train.x = Matrix(n, split.train.x.cols);
  merged.train.y.reserve(n);
  int r = 0;
  for (const SplitData* part : {&split.train, &split.val}) {
    for (int i = 0; i < part->size(); ++i, ++r) {
      auto dst = merged.train.x.row(r);
      auto src = part->x.row(i);
      std::copy(src.begin(), src.end(), dst.begin());
      merged.train.y.push_back(part->y[i]);
    }
  }
  merged.val.x = Matrix(0, split.train.x.cols);
  return merged;
}

std::string DatasetDesc::to_string() const {
  std::ostringstream os;
  os << generator << ":dim=" << dim << ",classes=" << classes << ",noise=" << noise
     << ",train=" << n_train << ",val=" << n_val << ",test=" << n_test
     << ",seed=" << seed;
  return os.str();
}

DatasetDesc DatasetDesc::parse(const std::string& descriptor) {
  DatasetDesc d;
  const auto colon = descriptor.find(':');
  d.generator = descriptor.substr(0, colon);
  if (colon == std::string::npos) {
    validate(d);
    return d;
  }
  std::istringstream rest(descriptor.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    const auto eq = item.find('=');
    require(eq != std::string::npos, "bad dataset descriptor item: " + item);
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    require(key == "dim" || key == "classes" || key == "noise" || key == "train" ||
                key == "val" || key == "test" || key == "seed",
            "unknown dataset descriptor key: " + key);
    try {
      if (key == "dim") d.dim = std::stoi(value);
      else if (key == "classes") d.classes = std::stoi(value);
      else if (key == "noise") d.noise = std::stod(value);
      else if (key == "train") d.n_train = std::stoi(value);
      else if (key == "val") d.n_val = std::stoi(value);
      else if (key == "test") d.n_test = std::stoi(value);
      else d.seed = std::stoull(value);
    } catch (const std::logic_error&) {
      throw std::invalid_argument("bad dataset descriptor value: " + item);
    }
  }
  validate(d);
  return d;
}

void export_csv(const SplitData& split, std::ostream& out) {
  for (int j = 0; j < split.x.cols; ++j) out << 'x' << j << ',';
  out << "label\n";
  out.precision(17);
  for (int i = 0; i < split.size(); ++i) {
    for (int j = 0; j < split.x.cols; ++j) out << split.x.at(i, j) << ',';
    out << split.y[i] << '\n';
  }
}

}  // namespace memsplit
