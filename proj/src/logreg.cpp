#include <algorithm>
#include <cmath>
#include <numeric>

#include "redrep/errors.hpp"
#include "redrep/models.hpp"
#include "redrep/rng.hpp"

namespace redrep {

namespace {

void check_vector(const FeatureVector& vector, std::size_t num_features) {
  for (const auto& [id, value] : vector.entries) {
    if (id >= num_features) {
      throw DimensionMismatch("feature id " + std::to_string(id) +
                              " outside model with " + std::to_string(num_features) +
                              " features");
    }
    (void)value;
  }
}

std::array<double, kNumLabels> label_scores(const LogRegModel& model,
                                            const FeatureVector& vector) {
  std::array<double, kNumLabels> scores{};
  for (std::size_t label = 0; label < kNumLabels; ++label) {
    double score = 0.0;
    for (const auto& [id, value] : vector.entries) {
      score += model.at(label, id) * value;
    }
    scores[label] = score;
  }
  return scores;
}

std::array<double, kNumLabels> softmax(const std::array<double, kNumLabels>& scores) {
  const double max_score = *std::max_element(scores.begin(), scores.end());
  std::array<double, kNumLabels> probs{};
  double sum = 0.0;
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    probs[i] = std::exp(scores[i] - max_score);
    sum += probs[i];
  }
  for (double& p : probs) p /= sum;
  return probs;
}

}  // namespace

std::array<double, kNumLabels> logreg_predict(const LogRegModel& model,
                                              const FeatureVector& vector) {
  check_vector(vector, model.num_features);
  return softmax(label_scores(model, vector));
}

Label logreg_argmax(const LogRegModel& model, const FeatureVector& vector) {
  check_vector(vector, model.num_features);
  const std::array<double, kNumLabels> scores = label_scores(model, vector);
  std::size_t best = 0;
  for (std::size_t label = 1; label < kNumLabels; ++label) {
    if (scores[label] > scores[best]) best = label;
  }
  return static_cast<Label>(best);
}

double logreg_loss_grad(const LogRegModel& model, const std::vector<TokenSample>& batch,
                        double l2, std::vector<double>& grad) {
  if (batch.empty()) throw EmptyData("empty batch");
  grad.assign(model.weights.size(), 0.0);

  double loss = 0.0;
  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  for (const auto& [vector, gold] : batch) {
    check_vector(vector, model.num_features);
    const std::array<double, kNumLabels> scores = label_scores(model, vector);
    const double max_score = *std::max_element(scores.begin(), scores.end());
    double log_sum = 0.0;
    for (double s : scores) log_sum += std::exp(s - max_score);
    log_sum = max_score + std::log(log_sum);
    loss += (log_sum - scores[static_cast<std::size_t>(gold)]) * inv_batch;

    for (std::size_t label = 0; label < kNumLabels; ++label) {
      const double p = std::exp(scores[label] - log_sum);
      const double delta = (p - (label == static_cast<std::size_t>(gold) ? 1.0 : 0.0));
      for (const auto& [id, value] : vector.entries) {
        grad[label * model.num_features + id] += delta * value * inv_batch;
      }
    }
  }

  if (l2 > 0.0) {
    for (std::size_t i = 0; i < grad.size(); ++i) {
      loss += 0.5 * l2 * model.weights[i] * model.weights[i];
      grad[i] += l2 * model.weights[i];
    }
  }
  return loss;
}

LogRegModel logreg_train(const std::vector<TokenSample>& data, std::size_t num_features,
                         const TrainConfig& config) {
  if (data.empty()) throw EmptyData("logreg_train needs at least one example");
  for (const auto& [vector, label] : data) {
    check_vector(vector, num_features);
    (void)label;
  }

  LogRegModel model;
  model.num_features = num_features;
  model.weights.assign(kNumLabels * num_features, 0.0);

  std::vector<double> grad;
  std::vector<double> accum(model.weights.size(), 0.0);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(config.seed);

  std::vector<TokenSample> batch;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    if (config.shuffle) rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      batch.clear();
      for (std::size_t k = start; k < stop; ++k) batch.push_back(data[order[k]]);
      logreg_loss_grad(model, batch, config.l2, grad);
      for (std::size_t i = 0; i < model.weights.size(); ++i) {
        if (grad[i] == 0.0) continue;
        accum[i] += grad[i] * grad[i];
        model.weights[i] -= config.learning_rate * grad[i] / (std::sqrt(accum[i]) + 1e-8);
      }
    }
  }
  return model;
}

}  // namespace redrep
