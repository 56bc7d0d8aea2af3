#include "redrep/pipeline.hpp"

#include "redrep/errors.hpp"

namespace redrep {

namespace {

std::vector<FeatureVector> sentence_vectors(const Sentence& sentence,
                                            const FeatureIndex& index,
                                            const TemplateSet& templates,
                                            const RirConfig& rir) {
  std::vector<RirTokenRecord> records;
  if (templates.use_rir) {
    records = annotate_rir_features(sentence, find_spans(sentence, rir));
  }
  return extract_features(sentence, records, index, templates);
}

}  // namespace

ModelBundle train_bundle(const LabeledCorpus& corpus, ModelKind kind,
                         const TemplateSet& templates, std::size_t min_count,
                         const RirConfig& rir, const TrainConfig& train_config) {
  if (!corpus.fully_labeled()) {
    throw UnlabeledCorpus("training requires gold labels on every sentence");
  }

  ModelBundle bundle;
  bundle.kind = kind;
  bundle.templates = templates;
  bundle.rir = rir;
  bundle.index = fit_feature_index(corpus, templates, min_count, rir);

  if (kind == ModelKind::Crf) {
    std::vector<SequenceSample> data;
    data.reserve(corpus.size());
    for (const Sentence& sentence : corpus.sentences()) {
      SequenceSample sample;
      sample.vectors = sentence_vectors(sentence, bundle.index, templates, rir);
      sample.labels = sentence.labels;
      data.push_back(std::move(sample));
    }
    bundle.crf = crf_train(data, bundle.index.size(), train_config).model;
  } else {
    std::vector<TokenSample> data;
    for (const Sentence& sentence : corpus.sentences()) {
      auto vectors = sentence_vectors(sentence, bundle.index, templates, rir);
      for (std::size_t t = 0; t < vectors.size(); ++t) {
        data.push_back({std::move(vectors[t]), sentence.labels[t]});
      }
    }
    bundle.logreg = logreg_train(data, bundle.index.size(), train_config);
  }
  return bundle;
}

EvalReport evaluate_model(const ModelBundle& bundle, const LabeledCorpus& test) {
  if (!test.fully_labeled()) {
    throw UnlabeledCorpus("evaluation requires gold labels on every sentence");
  }
  std::vector<std::vector<Label>> gold, pred;
  gold.reserve(test.size());
  pred.reserve(test.size());
  for (const Sentence& sentence : test.sentences()) {
    gold.push_back(sentence.labels);
    pred.push_back(predict_sentence(bundle, sentence));
  }
  return compute_metrics(build_confusion(gold, pred));
}

EvalReport evaluate_predictions(const LabeledCorpus& gold, const LabeledCorpus& pred) {
  if (!gold.fully_labeled() || !pred.fully_labeled()) {
    throw UnlabeledCorpus("both corpora must carry labels");
  }
  std::vector<std::vector<Label>> gold_labels, pred_labels;
  for (const Sentence& sentence : gold.sentences()) gold_labels.push_back(sentence.labels);
  for (const Sentence& sentence : pred.sentences()) pred_labels.push_back(sentence.labels);
  return compute_metrics(build_confusion(gold_labels, pred_labels));
}

AblationReport run_ablation(const LabeledCorpus& train, const LabeledCorpus& test,
                            ModelKind kind, const TemplateSet& base_templates,
                            std::size_t min_count, const RirConfig& rir,
                            const TrainConfig& train_config) {
  TemplateSet without = base_templates;
  without.use_rir = false;
  for (Template t : {Template::RirInReparandum, Template::RirInRepair,
                     Template::RirInterregnumWord, Template::RirGapLen,
                     Template::RirLeftWord, Template::RirRightWord}) {
    without.disable(t);
  }
  TemplateSet with = without;
  with.use_rir = true;
  for (Template t : {Template::RirInReparandum, Template::RirInRepair,
                     Template::RirInterregnumWord, Template::RirGapLen,
                     Template::RirLeftWord, Template::RirRightWord}) {
    with.enable(t);
  }

  AblationReport report;
  report.without_rir = evaluate_model(
      train_bundle(train, kind, without, min_count, rir, train_config), test);
  report.with_rir = evaluate_model(
      train_bundle(train, kind, with, min_count, rir, train_config), test);
  report.macro_f1_delta = report.with_rir.macro_f1 - report.without_rir.macro_f1;
  return report;
}

}  // namespace redrep
