#include "rolescope/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace rolescope {

namespace {

using Features = std::array<double, kRoleCount>;

Features standardized(const Model& m, const RoleVector& v) {
  Features x{};
  for (int i = 0; i < kRoleCount; ++i)
    x[i] = (v.percentages[i] - m.feature_means[i]) / m.feature_stds[i];
  return x;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

} // namespace

Model train(std::vector<LabeledExample> examples, std::uint64_t seed,
            const Hyperparams& hyper) {
  std::sort(examples.begin(), examples.end(),
            [](const LabeledExample& a, const LabeledExample& b) {
              if (a.vector.source != b.vector.source)
                return a.vector.source < b.vector.source;
              return a.label < b.label;
            });

  Model m;
  m.hyper = hyper;
  m.seed = seed;
  for (const LabeledExample& ex : examples) {
    if (ex.label.empty()) throw std::invalid_argument("empty label");
    if (std::find(m.labels.begin(), m.labels.end(), ex.label) ==
        m.labels.end())
      m.labels.push_back(ex.label);
  }
  std::sort(m.labels.begin(), m.labels.end());
  if (m.labels.size() < 2)
    throw std::invalid_argument(
        "training needs at least two distinct labels, got " +
        std::to_string(m.labels.size()));

  const size_t n = examples.size();
  for (int i = 0; i < kRoleCount; ++i) {
    double mean = 0;
    for (const LabeledExample& ex : examples)
      mean += ex.vector.percentages[i];
    mean /= static_cast<double>(n);
    double var = 0;
    for (const LabeledExample& ex : examples) {
      const double d = ex.vector.percentages[i] - mean;
      var += d * d;
    }
    var /= static_cast<double>(n);
    m.feature_means[i] = mean;
    m.feature_stds[i] = var > 0 ? std::sqrt(var) : 1.0;
  }

  std::vector<Features> xs(n);
  for (size_t i = 0; i < n; ++i) xs[i] = standardized(m, examples[i].vector);

  const size_t k = m.labels.size();
  m.weights.assign(k, Features{});
  m.biases.assign(k, 0.0);

  // One binary logistic problem per label; the objective is convex, so a
  // zero start keeps training deterministic.
  for (size_t c = 0; c < k; ++c) {
    Features& w = m.weights[c];
    double& b = m.biases[c];
    std::vector<double> y(n);
    for (size_t i = 0; i < n; ++i)
      y[i] = examples[i].label == m.labels[c] ? 1.0 : 0.0;
    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
      Features grad{};
      double grad_b = 0;
      for (size_t i = 0; i < n; ++i) {
        double z = b;
        for (int j = 0; j < kRoleCount; ++j) z += w[j] * xs[i][j];
        const double err = sigmoid(z) - y[i];
        for (int j = 0; j < kRoleCount; ++j) grad[j] += err * xs[i][j];
        grad_b += err;
      }
      for (int j = 0; j < kRoleCount; ++j) {
        grad[j] = grad[j] / static_cast<double>(n) + hyper.l2 * w[j];
        w[j] -= hyper.learning_rate * grad[j];
      }
      b -= hyper.learning_rate * (grad_b / static_cast<double>(n));
    }
  }
  return m;
}

PredictionRanking predict(const Model& m, const RoleVector& v) {
  const Features x = standardized(m, v);
  std::vector<double> scores(m.labels.size());
  for (size_t c = 0; c < m.labels.size(); ++c) {
    double z = m.biases[c];
    for (int j = 0; j < kRoleCount; ++j) z += m.weights[c][j] * x[j];
    scores[c] = z;
  }
  const double zmax = *std::max_element(scores.begin(), scores.end());
  double total = 0;
  for (double& z : scores) {
    z = std::exp(z - zmax);
    total += z;
  }
  PredictionRanking out;
  for (size_t c = 0; c < m.labels.size(); ++c)
    out.ranked.emplace_back(m.labels[c], scores[c] / total);
  std::sort(out.ranked.begin(), out.ranked.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  return out;
}

SplitEval evaluate_split(const std::vector<LabeledExample>& examples,
                         double train_fraction, int trials,
                         std::uint64_t seed, const Hyperparams& hyper) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("train fraction must be in (0, 1)");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");

  std::map<std::string, std::vector<size_t>> by_label;
  for (size_t i = 0; i < examples.size(); ++i)
    by_label[examples[i].label].push_back(i);
  if (by_label.size() < 2)
    throw std::invalid_argument("evaluation needs at least two labels");

  SplitEval eval;
  eval.train_fraction = train_fraction;
  eval.trials = trials;

  for (int t = 0; t < trials; ++t) {
    std::vector<LabeledExample> train_set, test_set;
    bool drawn = false;
    for (int attempt = 0; attempt < 100 && !drawn; ++attempt) {
      std::mt19937_64 rng(seed + static_cast<std::uint64_t>(t) +
                          static_cast<std::uint64_t>(attempt) * 7919);
      train_set.clear();
      test_set.clear();
      drawn = true;
      for (auto& [label, indices] : by_label) {
        std::vector<size_t> order = indices;
        std::shuffle(order.begin(), order.end(), rng);
        auto n_train = static_cast<size_t>(
            std::lround(train_fraction * static_cast<double>(order.size())));
        n_train = std::clamp<size_t>(n_train, 1, order.size());
        if (n_train == 0) { // unreachable with the clamp; kept as the guard
          drawn = false;
          break;
        }
        for (size_t i = 0; i < order.size(); ++i)
          (i < n_train ? train_set : test_set).push_back(examples[order[i]]);
      }
    }
    if (!drawn)
      throw std::runtime_error("could not stratify the training split");
    if (test_set.empty())
      throw std::runtime_error("split left no test examples");

    const Model m = train(train_set, seed, hyper);
    int top1_miss = 0, top2_miss = 0;
    for (const LabeledExample& ex : test_set) {
      const PredictionRanking r = predict(m, ex.vector);
      if (r.ranked.empty() || r.ranked[0].first != ex.label) ++top1_miss;
      const bool in_top2 =
          (!r.ranked.empty() && r.ranked[0].first == ex.label) ||
          (r.ranked.size() > 1 && r.ranked[1].first == ex.label);
      if (!in_top2) ++top2_miss;
    }
    const double denom = static_cast<double>(test_set.size());
    eval.per_trial.emplace_back(top1_miss / denom, top2_miss / denom);
  }

  double s1 = 0, s2 = 0;
  for (auto& [a, b] : eval.per_trial) {
    s1 += a;
    s2 += b;
  }
  eval.top1_mean = s1 / trials;
  eval.top2_mean = s2 / trials;
  double v1 = 0, v2 = 0;
  for (auto& [a, b] : eval.per_trial) {
    v1 += (a - eval.top1_mean) * (a - eval.top1_mean);
    v2 += (b - eval.top2_mean) * (b - eval.top2_mean);
  }
  eval.top1_std = std::sqrt(v1 / trials);
  eval.top2_std = std::sqrt(v2 / trials);
  return eval;
}

std::string model_to_json(const Model& m) {
  nlohmann::json j;
  j["version"] = m.version;
  j["labels"] = m.labels;
  j["weights"] = m.weights;
  j["biases"] = m.biases;
  j["feature_means"] = m.feature_means;
  j["feature_stds"] = m.feature_stds;
  j["hyperparameters"] = {{"epochs", m.hyper.epochs},
                          {"learning_rate", m.hyper.learning_rate},
                          {"l2", m.hyper.l2}};
  j["seed"] = m.seed;
  return j.dump(2) + "\n";
}

Model model_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.contains("version") || !j["version"].is_number_integer() ||
      j["version"].get<int>() != 1)
    throw std::runtime_error("unsupported model version");
  Model m;
  m.version = 1;
  m.labels = j.at("labels").get<std::vector<std::string>>();
  m.weights =
      j.at("weights").get<std::vector<std::array<double, kRoleCount>>>();
  m.biases = j.at("biases").get<std::vector<double>>();
  m.feature_means = j.at("feature_means").get<std::array<double, kRoleCount>>();
  m.feature_stds = j.at("feature_stds").get<std::array<double, kRoleCount>>();
  m.hyper.epochs = j.at("hyperparameters").at("epochs").get<int>();
  m.hyper.learning_rate =
      j.at("hyperparameters").at("learning_rate").get<double>();
  m.hyper.l2 = j.at("hyperparameters").at("l2").get<double>();
  m.seed = j.at("seed").get<std::uint64_t>();
  if (m.labels.size() < 2)
    throw std::runtime_error("model must carry at least two labels");
  if (m.weights.size() != m.labels.size() ||
      m.biases.size() != m.labels.size())
    throw std::runtime_error("model dimensions are inconsistent");
  for (double s : m.feature_stds)
    if (!(s > 0)) throw std::runtime_error("model has non-positive feature std");
  return m;
}

} // namespace rolescope
