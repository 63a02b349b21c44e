#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rolescope/metrics.hpp"
#include "rolescope/roles.hpp"

// One-vs-rest logistic regression over role vectors: deterministic
// full-batch gradient descent on standardized features, softmax over the
// per-label scores for ranked predictions.

namespace rolescope {

struct Hyperparams {
  int epochs = 500;
  double learning_rate = 0.1;
  double l2 = 1e-4;
};

struct Model {
  int version = 1;
  std::vector<std::string> labels; // sorted lexicographically
  std::vector<std::array<double, kRoleCount>> weights; // one row per label
  std::vector<double> biases;
  std::array<double, kRoleCount> feature_means{};
  std::array<double, kRoleCount> feature_stds{}; // all > 0; flat features get 1
  Hyperparams hyper;
  std::uint64_t seed = 42;
};

// Requires at least two distinct labels, each with at least one example;
// throws std::invalid_argument otherwise. Examples are order-normalized
// by (path, label) first, so the result is a pure function of the set.
Model train(std::vector<LabeledExample> examples, std::uint64_t seed,
            const Hyperparams& hyper = {});

// Labels with probabilities, descending; ties break lexicographically.
// Probabilities are softmax outputs and sum to 1.
struct PredictionRanking {
  std::vector<std::pair<std::string, double>> ranked;
};

PredictionRanking predict(const Model& m, const RoleVector& v);

struct SplitEval {
  double train_fraction = 0;
  int trials = 0;
  double top1_mean = 0, top1_std = 0;
  double top2_mean = 0, top2_std = 0;
  std::vector<std::pair<double, double>> per_trial; // (top1, top2)
};

// Per trial: seeded shuffle, stratified split by label, train on the
// first fraction, test on the rest. Trial t uses seed + t. top-k error is
// the fraction of test examples whose true label is absent from the k
// highest-probability predictions.
SplitEval evaluate_split(const std::vector<LabeledExample>& examples,
                         double train_fraction, int trials,
                         std::uint64_t seed, const Hyperparams& hyper = {});

// Versioned JSON document; loading rejects unknown versions.
std::string model_to_json(const Model& m);
Model model_from_json(const std::string& text);

} // namespace rolescope
