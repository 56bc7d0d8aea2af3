// Token-level scoring: confusion matrices, per-class and macro
// precision/recall/F1, multi-run aggregation, and Fleiss' kappa.
//
// The macro average covers reduplication, repetition, and other. O is the
// background class: it contributes false positives/negatives to the other
// classes but has no row of its own in the macro.

#ifndef REDREP_EVAL_HPP
#define REDREP_EVAL_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "redrep/corpus.hpp"

namespace redrep {

struct ConfusionMatrix {
  // counts[gold][predicted], fixed label order.
  std::array<std::array<std::int64_t, kNumLabels>, kNumLabels> counts{};

  std::int64_t total() const;
  bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix build_confusion(const std::vector<std::vector<Label>>& gold,
                                const std::vector<std::vector<Label>>& pred);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool zero_division = false;  // a denominator was 0 and the convention applied
};

struct EvalReport {
  ClassMetrics redup;
  ClassMetrics rep;
  ClassMetrics other;
  double macro_p = 0.0;
  double macro_r = 0.0;
  double macro_f1 = 0.0;
  std::int64_t token_count = 0;
  std::array<std::int64_t, kNumLabels> gold_counts{};  // diagnostics, O included
};

EvalReport compute_metrics(const ConfusionMatrix& matrix);

// items x categories rating counts; every row must sum to the rater count.
struct AgreementTable {
  std::vector<std::vector<std::int64_t>> rows;
  std::int64_t raters = 0;
};

// Throws DegenerateAgreement when all ratings fall in a single category
// (expected agreement 1, kappa undefined).
double fleiss_kappa(const AgreementTable& table);

// Ordered metric names and their accessors, shared by the JSON report and
// the multi-run aggregation.
std::vector<std::pair<std::string, double>> report_metrics(const EvalReport& report);

struct MetricStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample (n-1); 0 when runs == 1
};

struct RunSummary {
  std::vector<EvalReport> runs;
  std::vector<std::pair<std::string, MetricStats>> metrics;  // same order as report_metrics

  const MetricStats& metric(std::string_view name) const;
};

// Runs the experiment with seeds base_seed .. base_seed+runs-1. Failures are
// rethrown annotated with the run index.
RunSummary multi_run(const std::function<EvalReport(std::uint64_t)>& experiment,
                     std::size_t runs, std::uint64_t base_seed);

}  // namespace redrep

#endif  // REDREP_EVAL_HPP
