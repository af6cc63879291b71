#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmsev/rng.hpp"
#include "mmsev/types.hpp"

namespace mmsev::forest {

struct ForestParams {
  int n_trees = 100;
  int max_depth = -1;        // -1: unlimited
  int min_samples_leaf = 1;
  int mtry = 0;              // features tried per split; 0: ceil(cols/3)
  bool bootstrap = true;
  std::uint64_t seed = 0;

  int resolved_mtry(std::size_t cols) const;
  void validate(std::size_t cols) const;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // midpoint between consecutive distinct values
  double value = 0.0;         // leaf: mean of training targets
  std::int32_t left = -1;
  std::int32_t right = -1;

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // pre-order, root at index 0

  double predict(std::span<const double> x) const;
  bool operator==(const RegressionTree&) const = default;
};

struct PredictionWithConfidence {
  double mean = 0.0;
  double stddev = 0.0;  // population std over per-tree outputs
  Modality modality = Modality::audio;
};

// Greedy CART split on an mtry feature subset: minimizes summed child SSE
// over midpoint thresholds; ties go to the lower feature index, then the
// lower threshold. Stops on max_depth, min_samples_leaf, or zero variance.
RegressionTree fit_tree(const Matrix& x, std::span<const double> y,
                        const ForestParams& params, SplitMix64& rng);

struct Forest {
  ForestParams params;  // mtry stored resolved
  Modality modality = Modality::audio;
  bool includes_gender = false;  // gender column appended at training time
  std::uint64_t n_features = 0;
  std::vector<RegressionTree> trees;

  PredictionWithConfidence predict(std::span<const double> x) const;
};

// Tree i trains on a bootstrap sample drawn from a stream derived from
// (seed, i), so results are identical under any parallel schedule.
Forest fit_forest(const Matrix& x, std::span<const double> y,
                  const ForestParams& params, Modality modality,
                  bool includes_gender = false, int n_jobs = 1);

// Versioned binary layout: magic, version, params, pre-order trees.
// Round trips bit-exactly.
std::string serialize_model(const Forest& forest);
Forest deserialize_model(std::string_view bytes);

void save_model(const std::filesystem::path& path, const Forest& forest);
Forest load_model(const std::filesystem::path& path);

}  // namespace mmsev::forest
