#include "redrep/eval.hpp"

#include <cmath>

#include "redrep/errors.hpp"

namespace redrep {

std::int64_t ConfusionMatrix::total() const {
  std::int64_t sum = 0;
  for (const auto& row : counts) {
    for (std::int64_t cell : row) sum += cell;
  }
  return sum;
}

ConfusionMatrix build_confusion(const std::vector<std::vector<Label>>& gold,
                                const std::vector<std::vector<Label>>& pred) {
  if (gold.size() != pred.size()) {
    throw ShapeMismatch("sentence counts differ: " + std::to_string(gold.size()) +
                        " vs " + std::to_string(pred.size()));
  }
  ConfusionMatrix matrix;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].size() != pred[i].size()) {
      throw ShapeMismatch("sentence " + std::to_string(i) + " lengths differ");
    }
    for (std::size_t t = 0; t < gold[i].size(); ++t) {
      ++matrix.counts[static_cast<std::size_t>(gold[i][t])]
                     [static_cast<std::size_t>(pred[i][t])];
    }
  }
  return matrix;
}

namespace {

ClassMetrics class_metrics(const ConfusionMatrix& matrix, std::size_t cls) {
  std::int64_t tp = matrix.counts[cls][cls];
  std::int64_t fp = 0, fn = 0;
  for (std::size_t other = 0; other < kNumLabels; ++other) {
    if (other == cls) continue;
    fp += matrix.counts[other][cls];
    fn += matrix.counts[cls][other];
  }
  ClassMetrics metrics;
  if (tp + fp > 0) {
    metrics.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  } else {
    metrics.zero_division = true;
  }
  if (tp + fn > 0) {
    metrics.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  } else {
    metrics.zero_division = true;
  }
  if (metrics.precision + metrics.recall > 0) {
    metrics.f1 = 2.0 * metrics.precision * metrics.recall /
                 (metrics.precision + metrics.recall);
  } else {
    metrics.zero_division = true;
  }
  return metrics;
}

}  // namespace

EvalReport compute_metrics(const ConfusionMatrix& matrix) {
  EvalReport report;
  report.redup = class_metrics(matrix, static_cast<std::size_t>(Label::Redup));
  report.rep = class_metrics(matrix, static_cast<std::size_t>(Label::Rep));
  report.other = class_metrics(matrix, static_cast<std::size_t>(Label::Other));
  report.macro_p = (report.redup.precision + report.rep.precision + report.other.precision) / 3.0;
  report.macro_r = (report.redup.recall + report.rep.recall + report.other.recall) / 3.0;
  report.macro_f1 = (report.redup.f1 + report.rep.f1 + report.other.f1) / 3.0;
  report.token_count = matrix.total();
  for (std::size_t gold = 0; gold < kNumLabels; ++gold) {
    for (std::size_t pred = 0; pred < kNumLabels; ++pred) {
      report.gold_counts[gold] += matrix.counts[gold][pred];
    }
  }
  return report;
}

double fleiss_kappa(const AgreementTable& table) {
  if (table.rows.empty() || table.raters < 2) {
    throw InvalidConfig("fleiss_kappa needs >= 1 item and >= 2 raters per item");
  }
  const std::size_t categories = table.rows.front().size();
  const double n = static_cast<double>(table.raters);
  const double items = static_cast<double>(table.rows.size());

  std::vector<double> category_mass(categories, 0.0);
  double mean_item_agreement = 0.0;
  for (const std::vector<std::int64_t>& row : table.rows) {
    if (row.size() != categories) throw InvalidConfig("ragged agreement table");
    std::int64_t row_sum = 0;
    double same_pairs = 0.0;
    for (std::size_t j = 0; j < categories; ++j) {
      row_sum += row[j];
      same_pairs += static_cast<double>(row[j]) * static_cast<double>(row[j]);
      category_mass[j] += static_cast<double>(row[j]);
    }
    if (row_sum != table.raters) {
      throw InvalidConfig("agreement table row does not sum to the rater count");
    }
    mean_item_agreement += (same_pairs - n) / (n * (n - 1.0));
  }
  mean_item_agreement /= items;

  double expected_agreement = 0.0;
  for (double mass : category_mass) {
    const double proportion = mass / (items * n);
    expected_agreement += proportion * proportion;
  }

  if (expected_agreement >= 1.0) {
    throw DegenerateAgreement("all ratings in a single category");
  }
  return (mean_item_agreement - expected_agreement) / (1.0 - expected_agreement);
}

std::vector<std::pair<std::string, double>> report_metrics(const EvalReport& report) {
  return {
      {"redup_p", report.redup.precision}, {"redup_r", report.redup.recall},
      {"redup_f1", report.redup.f1},       {"rep_p", report.rep.precision},
      {"rep_r", report.rep.recall},        {"rep_f1", report.rep.f1},
      {"other_p", report.other.precision}, {"other_r", report.other.recall},
      {"other_f1", report.other.f1},       {"macro_p", report.macro_p},
      {"macro_r", report.macro_r},         {"macro_f1", report.macro_f1},
  };
}

const MetricStats& RunSummary::metric(std::string_view name) const {
  for (const auto& [key, stats] : metrics) {
    if (key == name) return stats;
  }
  throw Error("unknown metric \"" + std::string(name) + "\"");
}

RunSummary multi_run(const std::function<EvalReport(std::uint64_t)>& experiment,
                     std::size_t runs, std::uint64_t base_seed) {
  if (runs < 1) throw InvalidConfig("multi_run needs runs >= 1");

  RunSummary summary;
  for (std::size_t i = 0; i < runs; ++i) {
    try {
      summary.runs.push_back(experiment(base_seed + i));
    } catch (const std::exception& e) {
      throw Error("run " + std::to_string(i) + " (seed " +
                  std::to_string(base_seed + i) + ") failed: " + e.what());
    }
  }

  const auto first = report_metrics(summary.runs.front());
  for (std::size_t m = 0; m < first.size(); ++m) {
    double mean = 0.0;
    for (const EvalReport& run : summary.runs) {
      mean += report_metrics(run)[m].second;
    }
    mean /= static_cast<double>(runs);
    double variance = 0.0;
    if (runs > 1) {
      for (const EvalReport& run : summary.runs) {
        const double d = report_metrics(run)[m].second - mean;
        variance += d * d;
      }
      variance /= static_cast<double>(runs - 1);
    }
    summary.metrics.push_back({first[m].first, {mean, std::sqrt(variance)}});
  }
  return summary;
}

}  // namespace redrep
