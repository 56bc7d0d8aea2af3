// Experiment flow shared by the CLI and the test harnesses: fit-and-train on
// a labeled corpus, evaluate a trained bundle, and the paired RiR ablation.

#ifndef REDREP_PIPELINE_HPP
#define REDREP_PIPELINE_HPP

#include <cstdint>

#include "redrep/corpus.hpp"
#include "redrep/eval.hpp"
#include "redrep/models.hpp"

namespace redrep {

// Fits a feature index on the corpus, extracts vectors, trains the requested
// model kind, and packages everything needed for prediction.
ModelBundle train_bundle(const LabeledCorpus& corpus, ModelKind kind,
                         const TemplateSet& templates, std::size_t min_count,
                         const RirConfig& rir, const TrainConfig& train_config);

// Token-level evaluation of a trained bundle against gold labels.
EvalReport evaluate_model(const ModelBundle& bundle, const LabeledCorpus& test);

EvalReport evaluate_predictions(const LabeledCorpus& gold, const LabeledCorpus& pred);

struct AblationReport {
  EvalReport without_rir;
  EvalReport with_rir;
  double macro_f1_delta = 0.0;
};

// Trains the same model kind twice on identical data and seeds, once with the
// base templates only and once with the RIR_* templates added, and reports
// both scores plus the macro-F1 delta.
AblationReport run_ablation(const LabeledCorpus& train, const LabeledCorpus& test,
                            ModelKind kind, const TemplateSet& base_templates,
                            std::size_t min_count, const RirConfig& rir,
                            const TrainConfig& train_config);

}  // namespace redrep

#endif  // REDREP_PIPELINE_HPP
