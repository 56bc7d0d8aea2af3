#include <algorithm>
#include <cmath>
#include <numeric>

#include "redrep/errors.hpp"
#include "redrep/models.hpp"
#include "redrep/rng.hpp"

namespace redrep {

namespace {

constexpr std::size_t L = kNumLabels;

void check_vectors(const std::vector<FeatureVector>& vectors, std::size_t num_features) {
  if (vectors.empty()) throw EmptyData("empty token sequence");
  for (const FeatureVector& vector : vectors) {
    for (const auto& [id, value] : vector.entries) {
      if (id >= num_features) {
        throw DimensionMismatch("feature id " + std::to_string(id) +
                                " outside model with " + std::to_string(num_features) +
                                " features");
      }
      (void)value;
    }
  }
}

// log(sum_i exp(x_i)) over the four labels.
double log_sum_exp(const std::array<double, L>& x) {
  const double m = *std::max_element(x.begin(), x.end());
  if (!std::isfinite(m)) return m;
  double sum = 0.0;
  for (double v : x) sum += std::exp(v - m);
  return m + std::log(sum);
}

// Unary emission scores for every (position, label).
std::vector<std::array<double, L>> unary_scores(const CrfModel& model,
                                                const std::vector<FeatureVector>& vectors) {
  std::vector<std::array<double, L>> scores(vectors.size());
  for (std::size_t t = 0; t < vectors.size(); ++t) {
    for (std::size_t y = 0; y < L; ++y) {
      double s = 0.0;
      for (const auto& [id, value] : vectors[t].entries) {
        s += model.unary_at(y, id) * value;
      }
      scores[t][y] = s;
    }
  }
  return scores;
}

std::vector<std::array<double, L>> forward_lattice(
    const CrfModel& model, const std::vector<std::array<double, L>>& unary) {
  const std::size_t n = unary.size();
  std::vector<std::array<double, L>> alpha(n);
  for (std::size_t y = 0; y < L; ++y) alpha[0][y] = model.begin[y] + unary[0][y];
  for (std::size_t t = 1; t < n; ++t) {
    for (std::size_t y = 0; y < L; ++y) {
      std::array<double, L> terms;
      for (std::size_t p = 0; p < L; ++p) {
        terms[p] = alpha[t - 1][p] + model.trans_at(p, y);
      }
      alpha[t][y] = log_sum_exp(terms) + unary[t][y];
    }
  }
  return alpha;
}

std::vector<std::array<double, L>> backward_lattice(
    const CrfModel& model, const std::vector<std::array<double, L>>& unary) {
  const std::size_t n = unary.size();
  std::vector<std::array<double, L>> beta(n);
  for (std::size_t y = 0; y < L; ++y) beta[n - 1][y] = model.end[y];
  for (std::size_t t = n - 1; t-- > 0;) {
    for (std::size_t y = 0; y < L; ++y) {
      std::array<double, L> terms;
      for (std::size_t q = 0; q < L; ++q) {
        terms[q] = model.trans_at(y, q) + unary[t + 1][q] + beta[t + 1][q];
      }
      beta[t][y] = log_sum_exp(terms);
    }
  }
  return beta;
}

}  // namespace

double crf_log_partition(const CrfModel& model, const std::vector<FeatureVector>& vectors) {
  check_vectors(vectors, model.num_features);
  const auto unary = unary_scores(model, vectors);
  const auto alpha = forward_lattice(model, unary);
  std::array<double, L> last;
  for (std::size_t y = 0; y < L; ++y) last[y] = alpha.back()[y] + model.end[y];
  return log_sum_exp(last);
}

double crf_log_partition_backward(const CrfModel& model,
                                  const std::vector<FeatureVector>& vectors) {
  check_vectors(vectors, model.num_features);
  const auto unary = unary_scores(model, vectors);
  const auto beta = backward_lattice(model, unary);
  std::array<double, L> first;
  for (std::size_t y = 0; y < L; ++y) first[y] = model.begin[y] + unary[0][y] + beta[0][y];
  return log_sum_exp(first);
}

std::vector<std::array<double, L>> crf_marginals(const CrfModel& model,
                                                 const std::vector<FeatureVector>& vectors) {
  check_vectors(vectors, model.num_features);
  const auto unary = unary_scores(model, vectors);
  const auto alpha = forward_lattice(model, unary);
  const auto beta = backward_lattice(model, unary);
  std::array<double, L> last;
  for (std::size_t y = 0; y < L; ++y) last[y] = alpha.back()[y] + model.end[y];
  const double log_z = log_sum_exp(last);

  std::vector<std::array<double, L>> marginals(vectors.size());
  for (std::size_t t = 0; t < vectors.size(); ++t) {
    for (std::size_t y = 0; y < L; ++y) {
      marginals[t][y] = std::exp(alpha[t][y] + beta[t][y] - log_z);
    }
  }
  return marginals;
}

void CrfGradient::reset() {
  std::fill(unary.begin(), unary.end(), 0.0);
  transitions.fill(0.0);
  begin.fill(0.0);
  end.fill(0.0);
}

void CrfGradient::add_scaled(const CrfGradient& other, double scale) {
  for (std::size_t i = 0; i < unary.size(); ++i) {
    if (other.unary[i] != 0.0) unary[i] += scale * other.unary[i];
  }
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    transitions[i] += scale * other.transitions[i];
  }
  for (std::size_t i = 0; i < L; ++i) {
    begin[i] += scale * other.begin[i];
    end[i] += scale * other.end[i];
  }
}

double crf_loglik_grad(const CrfModel& model, const std::vector<FeatureVector>& vectors,
                       const std::vector<Label>& labels, double l2, CrfGradient& grad) {
  check_vectors(vectors, model.num_features);
  if (labels.size() != vectors.size()) {
    throw DimensionMismatch("labels not aligned with vectors");
  }
  if (grad.unary.size() != model.unary.size()) grad = CrfGradient(model.num_features);
  grad.reset();

  const std::size_t n = vectors.size();
  const auto unary = unary_scores(model, vectors);
  const auto alpha = forward_lattice(model, unary);
  const auto beta = backward_lattice(model, unary);
  std::array<double, L> last;
  for (std::size_t y = 0; y < L; ++y) last[y] = alpha.back()[y] + model.end[y];
  const double log_z = log_sum_exp(last);

  // Gold path score.
  double gold = model.begin[static_cast<std::size_t>(labels[0])];
  gold += unary[0][static_cast<std::size_t>(labels[0])];
  for (std::size_t t = 1; t < n; ++t) {
    gold += model.trans_at(static_cast<std::size_t>(labels[t - 1]),
                           static_cast<std::size_t>(labels[t]));
    gold += unary[t][static_cast<std::size_t>(labels[t])];
  }
  gold += model.end[static_cast<std::size_t>(labels[n - 1])];

  // Observed minus expected, unary block.
  for (std::size_t t = 0; t < n; ++t) {
    std::array<double, L> posterior;
    for (std::size_t y = 0; y < L; ++y) {
      posterior[y] = std::exp(alpha[t][y] + beta[t][y] - log_z);
    }
    const std::size_t gold_label = static_cast<std::size_t>(labels[t]);
    for (std::size_t y = 0; y < L; ++y) {
      const double delta = (y == gold_label ? 1.0 : 0.0) - posterior[y];
      if (delta == 0.0) continue;
      for (const auto& [id, value] : vectors[t].entries) {
        grad.unary[y * model.num_features + id] += delta * value;
      }
    }
  }

  // Begin / end blocks.
  for (std::size_t y = 0; y < L; ++y) {
    const double first_post = std::exp(alpha[0][y] + beta[0][y] - log_z);
    grad.begin[y] += (y == static_cast<std::size_t>(labels[0]) ? 1.0 : 0.0) - first_post;
    const double last_post = std::exp(alpha[n - 1][y] + beta[n - 1][y] - log_z);
    grad.end[y] += (y == static_cast<std::size_t>(labels[n - 1]) ? 1.0 : 0.0) - last_post;
  }

  // Transition block via pairwise marginals.
  for (std::size_t t = 1; t < n; ++t) {
    for (std::size_t p = 0; p < L; ++p) {
      for (std::size_t q = 0; q < L; ++q) {
        const double pair_post = std::exp(alpha[t - 1][p] + model.trans_at(p, q) +
                                          unary[t][q] + beta[t][q] - log_z);
        const bool on_gold = static_cast<std::size_t>(labels[t - 1]) == p &&
                             static_cast<std::size_t>(labels[t]) == q;
        grad.transitions[p * L + q] += (on_gold ? 1.0 : 0.0) - pair_post;
      }
    }
  }

  double loglik = gold - log_z;
  if (l2 > 0.0) {
    double norm2 = 0.0;
    for (std::size_t i = 0; i < model.unary.size(); ++i) {
      norm2 += model.unary[i] * model.unary[i];
      grad.unary[i] -= l2 * model.unary[i];
    }
    for (std::size_t i = 0; i < model.transitions.size(); ++i) {
      norm2 += model.transitions[i] * model.transitions[i];
      grad.transitions[i] -= l2 * model.transitions[i];
    }
    for (std::size_t i = 0; i < L; ++i) {
      norm2 += model.begin[i] * model.begin[i] + model.end[i] * model.end[i];
      grad.begin[i] -= l2 * model.begin[i];
      grad.end[i] -= l2 * model.end[i];
    }
    loglik -= 0.5 * l2 * norm2;
  }
  return loglik;
}

ViterbiResult crf_viterbi(const CrfModel& model, const std::vector<FeatureVector>& vectors) {
  check_vectors(vectors, model.num_features);
  const std::size_t n = vectors.size();
  const auto unary = unary_scores(model, vectors);

  std::vector<std::array<double, L>> delta(n);
  std::vector<std::array<std::uint8_t, L>> backptr(n);
  for (std::size_t y = 0; y < L; ++y) delta[0][y] = model.begin[y] + unary[0][y];
  for (std::size_t t = 1; t < n; ++t) {
    for (std::size_t y = 0; y < L; ++y) {
      // Strict > keeps the earliest label on ties.
      double best = delta[t - 1][0] + model.trans_at(0, y);
      std::uint8_t best_prev = 0;
      for (std::size_t p = 1; p < L; ++p) {
        const double candidate = delta[t - 1][p] + model.trans_at(p, y);
        if (candidate > best) {
          best = candidate;
          best_prev = static_cast<std::uint8_t>(p);
        }
      }
      delta[t][y] = best + unary[t][y];
      backptr[t][y] = best_prev;
    }
  }

  double best_score = delta[n - 1][0] + model.end[0];
  std::size_t best_label = 0;
  for (std::size_t y = 1; y < L; ++y) {
    const double candidate = delta[n - 1][y] + model.end[y];
    if (candidate > best_score) {
      best_score = candidate;
      best_label = y;
    }
  }

  ViterbiResult result;
  result.score = best_score;
  result.labels.resize(n);
  std::size_t current = best_label;
  for (std::size_t t = n; t-- > 0;) {
    result.labels[t] = static_cast<Label>(current);
    if (t > 0) current = backptr[t][current];
  }
  return result;
}

CrfTrainResult crf_train(const std::vector<SequenceSample>& data, std::size_t num_features,
                         const TrainConfig& config) {
  if (data.empty()) throw EmptyData("crf_train needs at least one sequence");
  for (const SequenceSample& sample : data) {
    check_vectors(sample.vectors, num_features);
    if (sample.labels.size() != sample.vectors.size()) {
      throw DimensionMismatch("labels not aligned with vectors");
    }
  }

  CrfModel model;
  model.num_features = num_features;
  model.unary.assign(kNumLabels * num_features, 0.0);

  CrfGradient batch_grad(num_features);
  CrfGradient seq_grad(num_features);
  std::vector<double> accum_unary(model.unary.size(), 0.0);
  std::array<double, kNumLabels * kNumLabels> accum_trans{};
  std::array<double, kNumLabels> accum_begin{}, accum_end{};

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(config.seed);

  CrfTrainResult result;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    if (config.shuffle) rng.shuffle(order);
    double epoch_loglik = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      const double inv_batch = 1.0 / static_cast<double>(stop - start);
      batch_grad.reset();
      for (std::size_t k = start; k < stop; ++k) {
        const SequenceSample& sample = data[order[k]];
        epoch_loglik += crf_loglik_grad(model, sample.vectors, sample.labels, 0.0, seq_grad);
        batch_grad.add_scaled(seq_grad, inv_batch);
      }

      // Gradient ascent with per-parameter adaptive steps; L2 applied once
      // per batch on the full parameter vector.
      auto ascend = [&](double& param, double& accum, double g) {
        g -= config.l2 * param;
        if (g == 0.0) return;
        accum += g * g;
        param += config.learning_rate * g / (std::sqrt(accum) + 1e-8);
      };
      for (std::size_t i = 0; i < model.unary.size(); ++i) {
        ascend(model.unary[i], accum_unary[i], batch_grad.unary[i]);
      }
      for (std::size_t i = 0; i < model.transitions.size(); ++i) {
        ascend(model.transitions[i], accum_trans[i], batch_grad.transitions[i]);
      }
      for (std::size_t i = 0; i < kNumLabels; ++i) {
        ascend(model.begin[i], accum_begin[i], batch_grad.begin[i]);
        ascend(model.end[i], accum_end[i], batch_grad.end[i]);
      }
    }
    result.epoch_mean_loglik.push_back(epoch_loglik / static_cast<double>(data.size()));
  }
  result.model = std::move(model);
  return result;
}

}  // namespace redrep
