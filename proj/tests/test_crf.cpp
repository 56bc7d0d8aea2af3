#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "redrep/errors.hpp"
#include "redrep/models.hpp"
#include "redrep/pipeline.hpp"
#include "redrep/rng.hpp"
#include "test_helpers.hpp"

using namespace redrep;
using redrep::testing::make_random_corpus;
using redrep::testing::make_sentence;

namespace {

constexpr std::size_t L = kNumLabels;

CrfModel zero_crf(std::size_t features) {
  CrfModel model;
  model.num_features = features;
  model.unary.assign(L * features, 0.0);
  return model;
}

CrfModel random_crf(Rng& rng, std::size_t features, double scale = 1.0) {
  CrfModel model = zero_crf(features);
  auto draw = [&] { return (rng.next_double() * 2.0 - 1.0) * scale; };
  for (double& w : model.unary) w = draw();
  for (double& w : model.transitions) w = draw();
  for (double& w : model.begin) w = draw();
  for (double& w : model.end) w = draw();
  return model;
}

std::vector<FeatureVector> random_vectors(Rng& rng, std::size_t length,
                                          std::size_t features) {
  std::vector<FeatureVector> vectors(length);
  for (FeatureVector& vector : vectors) {
    for (std::uint32_t id = 0; id < features; ++id) {
      if (rng.bernoulli(0.5)) vector.add(id, rng.next_double() * 2.0 - 1.0);
    }
    if (vector.entries.empty()) vector.add(0, 1.0);
  }
  return vectors;
}

// Independent scorer for the exhaustive oracles. The additions follow the
// same left-to-right association as the Viterbi recursion so that equal
// paths produce bitwise-equal scores.
double path_score(const CrfModel& model, const std::vector<FeatureVector>& vectors,
                  const std::vector<std::size_t>& labels) {
  auto unary = [&](std::size_t t, std::size_t y) {
    double s = 0.0;
    for (const auto& [id, value] : vectors[t].entries) {
      s += model.unary_at(y, id) * value;
    }
    return s;
  };
  double score = model.begin[labels[0]];
  score += unary(0, labels[0]);
  for (std::size_t t = 1; t < vectors.size(); ++t) {
    score += model.trans_at(labels[t - 1], labels[t]);
    score += unary(t, labels[t]);
  }
  score += model.end[labels[vectors.size() - 1]];
  return score;
}

// All 4^n scores, enumerated with position 0 cycling fastest. Increasing
// sequence index therefore orders sequences by the label at the last
// position first -- the same order Viterbi's backtrack tie-break induces.
std::vector<double> all_scores(const CrfModel& model,
                               const std::vector<FeatureVector>& vectors) {
  const std::size_t n = vectors.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= L;
  std::vector<double> scores(total);
  std::vector<std::size_t> labels(n);
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t rest = k;
    for (std::size_t t = 0; t < n; ++t) {
      labels[t] = rest % L;
      rest /= L;
    }
    scores[k] = path_score(model, vectors, labels);
  }
  return scores;
}

double brute_log_partition(const CrfModel& model,
                           const std::vector<FeatureVector>& vectors) {
  const std::vector<double> scores = all_scores(model, vectors);
  double max_score = scores[0];
  for (double s : scores) max_score = std::max(max_score, s);
  double sum = 0.0;
  for (double s : scores) sum += std::exp(s - max_score);
  return max_score + std::log(sum);
}

std::vector<Label> brute_viterbi(const CrfModel& model,
                                 const std::vector<FeatureVector>& vectors) {
  const std::vector<double> scores = all_scores(model, vectors);
  std::size_t best = 0;
  for (std::size_t k = 1; k < scores.size(); ++k) {
    if (scores[k] > scores[best]) best = k;
  }
  std::vector<Label> labels(vectors.size());
  for (std::size_t t = 0; t < vectors.size(); ++t) {
    labels[t] = static_cast<Label>(best % L);
    best /= L;
  }
  return labels;
}

}  // namespace

TEST_SUITE("crf") {

TEST_CASE("log partition of a zero model over one token is log(4)") {
  const CrfModel model = zero_crf(2);
  FeatureVector vector;
  vector.add(0);
  CHECK(crf_log_partition(model, {vector}) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("log partition matches exhaustive enumeration") {
  Rng rng(41);
  for (int round = 0; round < 50; ++round) {
    const CrfModel model = random_crf(rng, 4);
    const auto vectors = random_vectors(rng, 1 + rng.below(5), 4);
    const double exact = brute_log_partition(model, vectors);
    CHECK(crf_log_partition(model, vectors) == doctest::Approx(exact).epsilon(1e-8));
  }
}

TEST_CASE("forward and backward recursions agree") {
  Rng rng(42);
  for (int round = 0; round < 50; ++round) {
    const CrfModel model = random_crf(rng, 4);
    const auto vectors = random_vectors(rng, 1 + rng.below(6), 4);
    const double forward = crf_log_partition(model, vectors);
    const double backward = crf_log_partition_backward(model, vectors);
    CHECK(forward == doctest::Approx(backward).epsilon(1e-8));
  }
}

TEST_CASE("position marginals sum to one") {
  Rng rng(43);
  for (int round = 0; round < 30; ++round) {
    const CrfModel model = random_crf(rng, 4);
    const auto vectors = random_vectors(rng, 1 + rng.below(6), 4);
    for (const auto& row : crf_marginals(model, vectors)) {
      double sum = 0.0;
      for (double p : row) {
        CHECK(p >= 0.0);
        sum += p;
      }
      CHECK(std::abs(sum - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("log partition dominates every single path score") {
  Rng rng(44);
  for (int round = 0; round < 30; ++round) {
    const CrfModel model = random_crf(rng, 4);
    const auto vectors = random_vectors(rng, 1 + rng.below(5), 4);
    const double log_z = crf_log_partition(model, vectors);
    for (double score : all_scores(model, vectors)) {
      CHECK(log_z > score);
    }
  }
}

TEST_CASE("gradient matches central finite differences") {
  Rng rng(45);
  CrfGradient grad;
  for (int round = 0; round < 20; ++round) {
    const std::size_t features = 4;
    const CrfModel model = random_crf(rng, features);
    const std::size_t length = 1 + rng.below(4);
    const auto vectors = random_vectors(rng, length, features);
    std::vector<Label> labels(length);
    for (Label& label : labels) label = kLabelOrder[rng.below(L)];
    const double l2 = (round % 2 == 0) ? 0.0 : 1e-3;

    crf_loglik_grad(model, vectors, labels, l2, grad);

    const double step = 1e-5;
    CrfGradient scratch;
    auto numeric_for = [&](auto&& mutate) {
      CrfModel plus = model, minus = model;
      mutate(plus, step);
      mutate(minus, -step);
      return (crf_loglik_grad(plus, vectors, labels, l2, scratch) -
              crf_loglik_grad(minus, vectors, labels, l2, scratch)) /
             (2.0 * step);
    };
    auto check = [&](double numeric, double analytic) {
      const double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-8});
      CHECK(std::abs(numeric - analytic) / denom < 1e-4);
    };

    for (std::size_t i = 0; i < model.unary.size(); ++i) {
      check(numeric_for([&](CrfModel& m, double d) { m.unary[i] += d; }), grad.unary[i]);
    }
    for (std::size_t i = 0; i < model.transitions.size(); ++i) {
      check(numeric_for([&](CrfModel& m, double d) { m.transitions[i] += d; }),
            grad.transitions[i]);
    }
    for (std::size_t i = 0; i < L; ++i) {
      check(numeric_for([&](CrfModel& m, double d) { m.begin[i] += d; }), grad.begin[i]);
      check(numeric_for([&](CrfModel& m, double d) { m.end[i] += d; }), grad.end[i]);
    }
  }
}

TEST_CASE("unregularized log-likelihood is never positive") {
  Rng rng(46);
  CrfGradient grad;
  for (int round = 0; round < 50; ++round) {
    const CrfModel model = random_crf(rng, 4);
    const std::size_t length = 1 + rng.below(5);
    const auto vectors = random_vectors(rng, length, 4);
    std::vector<Label> labels(length);
    for (Label& label : labels) label = kLabelOrder[rng.below(L)];
    CHECK(crf_loglik_grad(model, vectors, labels, 0.0, grad) <= 0.0);
  }
}

TEST_CASE("viterbi matches exhaustive argmax with the same tie-break") {
  Rng rng(47);
  for (int round = 0; round < 50; ++round) {
    const CrfModel model = random_crf(rng, 4);
    const auto vectors = random_vectors(rng, 1 + rng.below(5), 4);
    const ViterbiResult result = crf_viterbi(model, vectors);
    CHECK(result.labels == brute_viterbi(model, vectors));
  }
}

TEST_CASE("viterbi on a length-1 input picks the best unary+begin+end label") {
  Rng rng(48);
  const CrfModel model = random_crf(rng, 3);
  FeatureVector vector;
  vector.add(1, 0.5);
  const ViterbiResult result = crf_viterbi(model, {vector});
  CHECK(result.labels == brute_viterbi(model, {vector}));
  CHECK(result.score == doctest::Approx(path_score(
      model, {vector}, {static_cast<std::size_t>(result.labels[0])})));
}

TEST_CASE("all-zero parameters decode to all-reduplication") {
  const CrfModel model = zero_crf(3);
  Rng rng(49);
  const auto vectors = random_vectors(rng, 6, 3);  // values irrelevant
  const ViterbiResult result = crf_viterbi(model, vectors);
  for (Label label : result.labels) CHECK(label == Label::Redup);
}

TEST_CASE("training is deterministic and its objective improves") {
  // Tiny separable task: feature 0 -> REDUP, feature 1 -> REP, feature 2 -> O.
  std::vector<SequenceSample> data;
  Rng rng(50);
  for (int i = 0; i < 16; ++i) {
    SequenceSample sample;
    const std::size_t length = 2 + rng.below(3);
    for (std::size_t t = 0; t < length; ++t) {
      FeatureVector vector;
      const std::uint32_t which = static_cast<std::uint32_t>(rng.below(3));
      vector.add(which);
      sample.vectors.push_back(vector);
      sample.labels.push_back(which == 0   ? Label::Redup
                              : which == 1 ? Label::Rep
                                           : Label::O);
    }
    data.push_back(std::move(sample));
  }

  TrainConfig config;
  config.epochs = 8;
  config.learning_rate = 0.01;
  config.seed = 4242;
  const CrfTrainResult first = crf_train(data, 3, config);
  const CrfTrainResult second = crf_train(data, 3, config);
  CHECK(first.model.unary == second.model.unary);
  CHECK(first.model.transitions == second.model.transitions);
  CHECK(first.model.begin == second.model.begin);
  CHECK(first.model.end == second.model.end);
  CHECK(first.epoch_mean_loglik == second.epoch_mean_loglik);

  REQUIRE(first.epoch_mean_loglik.size() == 8);
  CHECK(first.epoch_mean_loglik.back() > first.epoch_mean_loglik.front());
  for (std::size_t e = 1; e < first.epoch_mean_loglik.size(); ++e) {
    // non-decreasing to within optimizer noise
    CHECK(first.epoch_mean_loglik[e] >= first.epoch_mean_loglik[e - 1] - 0.05);
  }
}

TEST_CASE("crf errors") {
  const CrfModel model = zero_crf(2);
  CHECK_THROWS_AS(crf_log_partition(model, {}), EmptyData);
  FeatureVector bad;
  bad.add(7);
  CHECK_THROWS_AS(crf_log_partition(model, {bad}), DimensionMismatch);
  FeatureVector ok;
  ok.add(0);
  CrfGradient grad;
  CHECK_THROWS_AS(crf_loglik_grad(model, {ok, ok}, {Label::O}, 0.0, grad),
                  DimensionMismatch);
  CHECK_THROWS_AS(crf_train({}, 2, TrainConfig{}), EmptyData);
}

TEST_CASE("save/load round-trips a trained model bit-exactly") {
  // Train a small real bundle end to end, then compare parameters and
  // decode outputs after a disk round-trip.
  std::vector<Sentence> sentences;
  Rng rng(51);
  const std::vector<std::string> words = {"alpha", "beta", "gamma", "delta"};
  for (int i = 0; i < 30; ++i) {
    std::vector<std::string> surface;
    std::vector<Label> labels;
    const std::size_t length = 2 + rng.below(4);
    for (std::size_t t = 0; t < length; ++t) {
      surface.push_back(words[rng.below(words.size())]);
      labels.push_back(kLabelOrder[rng.below(L)]);
    }
    sentences.push_back(make_sentence("t" + std::to_string(i), surface, labels));
  }
  const LabeledCorpus corpus(std::move(sentences));

  TrainConfig config;
  config.epochs = 2;
  config.seed = 99;
  const ModelBundle bundle = train_bundle(corpus, ModelKind::Crf,
                                          TemplateSet::defaults(true), 1, RirConfig{},
                                          config);

  const std::string path = "/tmp/redrep_test_model.rr";
  save_model(bundle, path);
  const ModelBundle loaded = load_model(path);

  CHECK(loaded.kind == ModelKind::Crf);
  CHECK(loaded.templates == bundle.templates);
  CHECK(loaded.index.names() == bundle.index.names());
  CHECK(loaded.crf.unary == bundle.crf.unary);
  CHECK(loaded.crf.transitions == bundle.crf.transitions);
  CHECK(loaded.crf.begin == bundle.crf.begin);
  CHECK(loaded.crf.end == bundle.crf.end);

  const LabeledCorpus probes = make_random_corpus(52, 100);
  for (const Sentence& sentence : probes.sentences()) {
    CHECK(predict_sentence(bundle, sentence) == predict_sentence(loaded, sentence));
  }
  std::remove(path.c_str());
}

TEST_CASE("model files with unknown versions or truncation are rejected") {
  const std::string path = "/tmp/redrep_bad_model.rr";
  {
    std::ofstream out(path);
    out << "redrep-model v999 crf\n";
  }
  CHECK_THROWS_AS(load_model(path), UnsupportedVersion);

  // truncated real file
  LogRegModel logreg;
  logreg.num_features = 2;
  logreg.weights.assign(kNumLabels * 2, 0.25);
  ModelBundle bundle;
  bundle.kind = ModelKind::LogReg;
  bundle.index = FeatureIndex::from_names({"W0=x"}, 1);
  bundle.templates = TemplateSet::defaults(false);
  bundle.logreg = logreg;
  save_model(bundle, path);
  std::ifstream in(path, std::ios::binary);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  in.close();
  {
    std::ofstream out(path, std::ios::binary);
    out << content.substr(0, content.size() / 2);
  }
  CHECK_THROWS_AS(load_model(path), CorruptFile);

  {
    std::ofstream out(path);
    out << "something else entirely\n";
  }
  CHECK_THROWS_AS(load_model(path), CorruptFile);
  std::remove(path.c_str());
}

}  // TEST_SUITE
