// Trainable classifiers over sparse feature vectors: a per-token multinomial
// logistic regression baseline and a linear-chain CRF with exact inference.
//
// All training is deterministic given (data order, seed, config). Both
// optimizers use per-parameter adaptive steps (accumulated squared gradient),
// which behaves well on sparse indicator features without tuning.

#ifndef REDREP_MODELS_HPP
#define REDREP_MODELS_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "redrep/corpus.hpp"
#include "redrep/features.hpp"
#include "redrep/rir.hpp"

namespace redrep {

struct TrainConfig {
  std::size_t epochs = 5;
  std::size_t batch_size = 8;
  double learning_rate = 0.1;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
  bool shuffle = true;
};

// ---------------------------------------------------------------------------
// Logistic regression
// ---------------------------------------------------------------------------

struct LogRegModel {
  std::size_t num_features = 0;
  std::vector<double> weights;  // kNumLabels x num_features, row-major

  double& at(std::size_t label, std::size_t feature) {
    return weights[label * num_features + feature];
  }
  double at(std::size_t label, std::size_t feature) const {
    return weights[label * num_features + feature];
  }
};

using TokenSample = std::pair<FeatureVector, Label>;

LogRegModel logreg_train(const std::vector<TokenSample>& data, std::size_t num_features,
                         const TrainConfig& config);

// Softmax over label scores; probabilities sum to 1.
std::array<double, kNumLabels> logreg_predict(const LogRegModel& model,
                                              const FeatureVector& vector);

// Argmax with ties broken by the fixed label order.
Label logreg_argmax(const LogRegModel& model, const FeatureVector& vector);

// Mean cross-entropy over the batch plus (l2/2)||W||^2, with its exact
// gradient written to grad (same layout as weights). Exposed so the
// finite-difference oracle can check it directly.
double logreg_loss_grad(const LogRegModel& model, const std::vector<TokenSample>& batch,
                        double l2, std::vector<double>& grad);

// ---------------------------------------------------------------------------
// Linear-chain CRF
// ---------------------------------------------------------------------------

struct CrfModel {
  std::size_t num_features = 0;
  std::vector<double> unary;  // kNumLabels x num_features, row-major
  std::array<double, kNumLabels * kNumLabels> transitions{};  // [from][to]
  std::array<double, kNumLabels> begin{};
  std::array<double, kNumLabels> end{};

  double& unary_at(std::size_t label, std::size_t feature) {
    return unary[label * num_features + feature];
  }
  double unary_at(std::size_t label, std::size_t feature) const {
    return unary[label * num_features + feature];
  }
  double& trans_at(std::size_t from, std::size_t to) {
    return transitions[from * kNumLabels + to];
  }
  double trans_at(std::size_t from, std::size_t to) const {
    return transitions[from * kNumLabels + to];
  }
};

struct SequenceSample {
  std::vector<FeatureVector> vectors;
  std::vector<Label> labels;
};

// log sum over all label sequences of exp(score), forward recursion in
// log-space. The backward variant exists for the dual-recursion check.
double crf_log_partition(const CrfModel& model, const std::vector<FeatureVector>& vectors);
double crf_log_partition_backward(const CrfModel& model,
                                  const std::vector<FeatureVector>& vectors);

// Per-position posterior marginals from forward-backward.
std::vector<std::array<double, kNumLabels>> crf_marginals(
    const CrfModel& model, const std::vector<FeatureVector>& vectors);

struct CrfGradient {
  std::vector<double> unary;
  std::array<double, kNumLabels * kNumLabels> transitions{};
  std::array<double, kNumLabels> begin{};
  std::array<double, kNumLabels> end{};

  explicit CrfGradient(std::size_t num_features = 0)
      : unary(kNumLabels * num_features, 0.0) {}
  void reset();
  void add_scaled(const CrfGradient& other, double scale);
};

// Regularized conditional log-likelihood (gold score - log partition -
// (l2/2)||theta||^2) and its gradient (observed - expected - l2*theta).
double crf_loglik_grad(const CrfModel& model, const std::vector<FeatureVector>& vectors,
                       const std::vector<Label>& labels, double l2, CrfGradient& grad);

struct ViterbiResult {
  std::vector<Label> labels;
  double score = 0.0;
};

// Maximum-scoring sequence; ties prefer the earlier label in the fixed
// order at each backtrack step.
ViterbiResult crf_viterbi(const CrfModel& model, const std::vector<FeatureVector>& vectors);

struct CrfTrainResult {
  CrfModel model;
  std::vector<double> epoch_mean_loglik;  // unregularized, per epoch
};

CrfTrainResult crf_train(const std::vector<SequenceSample>& data, std::size_t num_features,
                         const TrainConfig& config);

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

enum class ModelKind : std::uint8_t { LogReg = 0, Crf = 1 };

std::string_view model_kind_name(ModelKind kind);

// Everything predict needs: the parameters plus the frozen feature index and
// the extraction configuration they were trained with.
struct ModelBundle {
  ModelKind kind = ModelKind::Crf;
  FeatureIndex index;
  TemplateSet templates;
  RirConfig rir;
  LogRegModel logreg;
  CrfModel crf;
};

void save_model(const ModelBundle& bundle, const std::string& path);
ModelBundle load_model(const std::string& path);

// Predict labels for one sentence with whichever model the bundle holds.
std::vector<Label> predict_sentence(const ModelBundle& bundle, const Sentence& sentence);

}  // namespace redrep

#endif  // REDREP_MODELS_HPP
