#include "redrep/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "redrep/corpus.hpp"
#include "redrep/errors.hpp"
#include "redrep/eval.hpp"
#include "redrep/models.hpp"
#include "redrep/pipeline.hpp"
#include "redrep/rir.hpp"
#include "redrep/synth.hpp"

namespace redrep::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

// ---------------------------------------------------------------------------
// Settings: flag > config file > default, echoed into every report.
// ---------------------------------------------------------------------------

using ConfigMap = std::map<std::string, std::string>;

ConfigMap load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  ConfigMap config;
  std::string line;
  auto trim = [](std::string s) {
    const auto begin = s.find_first_not_of(" \t\r");
    const auto end = s.find_last_not_of(" \t\r");
    return begin == std::string::npos ? std::string() : s.substr(begin, end - begin + 1);
  };
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    const std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": expected key = value");
    }
    config[trim(trimmed.substr(0, eq))] = trim(trimmed.substr(eq + 1));
  }
  return config;
}

// Registers string-typed options on a subcommand and resolves each one to
// flag value, config-file value, or default, in that order.
class Options {
 public:
  explicit Options(CLI::App* app) : app_(app) {}

  void add(const std::string& flag, const std::string& key, std::string default_value,
           const std::string& help) {
    entries_.push_back({nullptr, key});
    storage_.push_back(std::move(default_value));
    entries_.back().option =
        app_->add_option(flag, storage_.back(), help + " [" + key + "]");
  }

  ConfigMap resolve(const ConfigMap& file_config) const {
    ConfigMap settings;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto& entry = entries_[i];
      if (entry.option->count() > 0) {
        settings[entry.key] = storage_[i];
      } else if (auto it = file_config.find(entry.key); it != file_config.end()) {
        settings[entry.key] = it->second;
      } else {
        settings[entry.key] = storage_[i];
      }
    }
    return settings;
  }

 private:
  struct Entry {
    CLI::Option* option;
    std::string key;
  };
  CLI::App* app_;
  std::vector<Entry> entries_;
  std::deque<std::string> storage_;  // stable addresses for CLI11 bindings
};

class Settings {
 public:
  explicit Settings(ConfigMap values) : values_(std::move(values)) {}

  const ConfigMap& map() const { return values_; }

  const std::string& str(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw UsageError("missing setting " + key);
    return it->second;
  }

  std::uint64_t u64(const std::string& key) const {
    const std::string& text = str(key);
    std::uint64_t value = 0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) {
      throw UsageError(key + ": expected a non-negative integer, got \"" + text + "\"");
    }
    return value;
  }

  std::size_t size(const std::string& key) const {
    return static_cast<std::size_t>(u64(key));
  }

  double dbl(const std::string& key) const {
    const std::string& text = str(key);
    double value = 0.0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) {
      throw UsageError(key + ": expected a number, got \"" + text + "\"");
    }
    return value;
  }

  bool onoff(const std::string& key) const {
    const std::string& text = str(key);
    if (text == "on" || text == "true" || text == "1") return true;
    if (text == "off" || text == "false" || text == "0") return false;
    throw UsageError(key + ": expected on|off, got \"" + text + "\"");
  }

  json echo() const {
    json config = json::object();
    for (const auto& [key, value] : values_) config[key] = value;
    return config;
  }

 private:
  ConfigMap values_;
};

void require(const Settings& settings, const std::string& key) {
  if (settings.str(key).empty()) {
    throw UsageError("required setting " + key + " is empty; pass the matching flag");
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw Error("failed writing " + path);
}

void write_report(const std::string& path, const json& report) {
  if (path.empty()) return;
  write_text_file(path, report.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Shared option groups and their decoding
// ---------------------------------------------------------------------------

void add_rir_options(Options& options) {
  options.add("--max-interregnum-len", "rir.max_interregnum_len", "2",
              "largest gap between the copies");
  options.add("--max-phrase-len", "rir.max_phrase_len", "3",
              "longest duplicated phrase");
  options.add("--match-on", "rir.match_on", "normalized",
              "compare normalized or surface forms");
}

RirConfig rir_from(const Settings& settings) {
  RirConfig config;
  config.max_interregnum_len = settings.size("rir.max_interregnum_len");
  config.max_phrase_len = settings.size("rir.max_phrase_len");
  const std::string& field = settings.str("rir.match_on");
  if (field == "normalized") {
    config.match_on = MatchField::Normalized;
  } else if (field == "surface") {
    config.match_on = MatchField::Surface;
  } else {
    throw UsageError("rir.match_on: expected normalized|surface");
  }
  if (config.max_phrase_len < 1) throw UsageError("rir.max_phrase_len must be >= 1");
  return config;
}

void add_feature_options(Options& options) {
  options.add("--rir", "features.rir", "on", "include RiR structure features");
  options.add("--templates", "features.templates", "",
              "comma-separated template names (empty = defaults)");
  options.add("--min-count", "features.min_count", "1",
              "drop features seen fewer times");
}

TemplateSet templates_from(const Settings& settings) {
  const bool use_rir = settings.onoff("features.rir");
  const std::string& csv = settings.str("features.templates");
  try {
    return csv.empty() ? TemplateSet::defaults(use_rir) : TemplateSet::parse(csv, use_rir);
  } catch (const InvalidConfig& e) {
    throw UsageError(e.what());
  }
}

// Everything but the seed flag, whose name depends on the subcommand.
void add_train_options(Options& options) {
  options.add("--model-kind", "train.model", "crf", "crf or logreg");
  options.add("--epochs", "train.epochs", "5", "training epochs");
  options.add("--batch-size", "train.batch_size", "8", "mini-batch size");
  options.add("--learning-rate", "train.learning_rate", "0.1", "base step size");
  options.add("--l2", "train.l2", "0.0001", "L2 regularization strength");
  options.add("--shuffle", "train.shuffle", "on", "shuffle between epochs");
}

TrainConfig train_from(const Settings& settings) {
  TrainConfig config;
  config.epochs = settings.size("train.epochs");
  config.batch_size = settings.size("train.batch_size");
  config.learning_rate = settings.dbl("train.learning_rate");
  config.l2 = settings.dbl("train.l2");
  config.seed = settings.u64("train.seed");
  config.shuffle = settings.onoff("train.shuffle");
  if (config.epochs < 1 || config.batch_size < 1 || config.learning_rate <= 0.0 ||
      config.l2 < 0.0) {
    throw UsageError("train config: need epochs >= 1, batch_size >= 1, "
                     "learning_rate > 0, l2 >= 0");
  }
  return config;
}

ModelKind model_kind_from(const Settings& settings) {
  const std::string& kind = settings.str("train.model");
  if (kind == "crf") return ModelKind::Crf;
  if (kind == "logreg") return ModelKind::LogReg;
  throw UsageError("train.model: expected crf|logreg");
}

std::vector<std::string> read_word_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lexicon " + path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.push_back(line);
  }
  return words;
}

json report_json(const EvalReport& report) {
  json out = json::object();
  for (const auto& [key, value] : report_metrics(report)) out[key] = value;
  return out;
}

void print_report(std::ostream& os, const EvalReport& report) {
  auto row = [&](const char* name, const ClassMetrics& m) {
    os << name << "\tP=" << m.precision << "\tR=" << m.recall << "\tF1=" << m.f1
       << (m.zero_division ? "\t(zero-division)" : "") << "\n";
  };
  row("reduplication", report.redup);
  row("repetition", report.rep);
  row("other", report.other);
  os << "macro\tP=" << report.macro_p << "\tR=" << report.macro_r
     << "\tF1=" << report.macro_f1 << "\n";
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_synth(const Settings& settings) {
  require(settings, "synth.out");
  SynthConfig config = SynthConfig::defaults();
  config.seed = settings.u64("synth.seed");
  config.n_sentences = settings.size("synth.n");
  config.min_len = settings.size("synth.min_len");
  config.max_len = settings.size("synth.max_len");
  config.p_redup = settings.dbl("synth.p_redup");
  config.p_rep = settings.dbl("synth.p_rep");
  config.p_other = settings.dbl("synth.p_other");
  config.p_interregnum = settings.dbl("synth.p_interregnum");
  config.p_confusion = settings.dbl("synth.p_confusion");
  config.language = language_from_name(settings.str("synth.lang"));
  if (!settings.str("synth.general_lexicon").empty()) {
    config.general_lexicon = read_word_list(settings.str("synth.general_lexicon"));
  }
  if (!settings.str("synth.reduplicable_lexicon").empty()) {
    config.reduplicable_lexicon =
        read_word_list(settings.str("synth.reduplicable_lexicon"));
  }
  if (!settings.str("synth.interregnum_lexicon").empty()) {
    config.interregnum_lexicon =
        read_word_list(settings.str("synth.interregnum_lexicon"));
  }
  if (!settings.str("synth.other_lexicon").empty()) {
    config.other_lexicon = read_word_list(settings.str("synth.other_lexicon"));
  }

  const SynthResult result = generate_corpus(config);
  write_conll_file(result.corpus, settings.str("synth.out"));
  if (!settings.str("synth.trace").empty()) {
    write_text_file(settings.str("synth.trace"), write_trace(result.trace));
  }

  const CorpusStats& stats = result.corpus.stats();
  std::cout << "wrote " << stats.sentence_count << " sentences, " << stats.token_count
            << " tokens to " << settings.str("synth.out") << "\n";
  for (Label label : kLabelOrder) {
    std::cout << "  " << label_name(label) << ": "
              << stats.label_counts[static_cast<std::size_t>(label)] << "\n";
  }
  return 0;
}

int cmd_split(const Settings& settings) {
  require(settings, "split.in");
  require(settings, "split.train_out");
  require(settings, "split.val_out");
  require(settings, "split.test_out");

  SplitSpec spec;
  const std::string& ratios = settings.str("split.ratios");
  std::array<double, 3> parsed{};
  std::size_t pos = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    std::size_t comma = ratios.find(',', pos);
    if (comma == std::string::npos) comma = ratios.size();
    const std::string part = ratios.substr(pos, comma - pos);
    const auto result =
        std::from_chars(part.data(), part.data() + part.size(), parsed[i]);
    if (result.ec != std::errc{} || result.ptr != part.data() + part.size()) {
      throw UsageError("split.ratios: expected three comma-separated numbers");
    }
    pos = comma + 1;
  }
  spec.train_ratio = parsed[0];
  spec.val_ratio = parsed[1];
  spec.test_ratio = parsed[2];
  spec.seed = settings.u64("split.seed");
  spec.stratify = settings.onoff("split.stratify");

  const LabeledCorpus corpus = read_conll_file(settings.str("split.in"));
  const SplitResult split = stratified_split(corpus, spec);
  write_conll_file(split.train, settings.str("split.train_out"));
  write_conll_file(split.validation, settings.str("split.val_out"));
  write_conll_file(split.test, settings.str("split.test_out"));
  std::cout << "split " << corpus.size() << " sentences into " << split.train.size()
            << "/" << split.validation.size() << "/" << split.test.size() << "\n";
  return 0;
}

int cmd_train(const Settings& settings) {
  require(settings, "train.train");
  require(settings, "train.out");

  const LabeledCorpus corpus = read_conll_file(settings.str("train.train"));
  const ModelBundle bundle =
      train_bundle(corpus, model_kind_from(settings), templates_from(settings),
                   settings.size("features.min_count"), rir_from(settings),
                   train_from(settings));
  save_model(bundle, settings.str("train.out"));
  std::cout << "trained " << model_kind_name(bundle.kind) << " on " << corpus.size()
            << " sentences (" << bundle.index.size() << " features) -> "
            << settings.str("train.out") << "\n";
  return 0;
}

int cmd_predict(const Settings& settings) {
  require(settings, "predict.model");
  require(settings, "predict.in");
  require(settings, "predict.out");

  const ModelBundle bundle = load_model(settings.str("predict.model"));
  const LabeledCorpus input = read_conll_file(settings.str("predict.in"));
  std::vector<Sentence> output;
  output.reserve(input.size());
  for (const Sentence& sentence : input.sentences()) {
    Sentence copy = sentence;
    copy.labels = predict_sentence(bundle, sentence);
    output.push_back(std::move(copy));
  }
  write_conll_file(LabeledCorpus(std::move(output)), settings.str("predict.out"));
  std::cout << "predicted " << input.size() << " sentences -> "
            << settings.str("predict.out") << "\n";
  return 0;
}

int cmd_eval(const Settings& settings) {
  const std::size_t runs = settings.size("eval.runs");
  if (runs < 1) throw UsageError("eval.runs must be >= 1");

  json report_out;
  EvalReport printed;

  const bool pred_mode = !settings.str("eval.pred").empty();
  const bool model_mode = !settings.str("eval.model").empty();
  const bool retrain_mode = !settings.str("eval.train").empty();
  if (pred_mode + model_mode + retrain_mode != 1) {
    throw UsageError("pass exactly one of --pred (with --gold), --model, or --train");
  }

  if (pred_mode) {
    require(settings, "eval.gold");
    if (runs != 1) throw UsageError("--runs needs --train (retraining mode)");
    const LabeledCorpus gold = read_conll_file(settings.str("eval.gold"));
    const LabeledCorpus pred = read_conll_file(settings.str("eval.pred"));
    printed = evaluate_predictions(gold, pred);
    report_out = report_json(printed);
    report_out["runs"] = 1;
    report_out["macro_f1_std"] = 0.0;
  } else if (model_mode) {
    require(settings, "eval.test");
    if (runs != 1) throw UsageError("--runs needs --train (retraining mode)");
    const ModelBundle bundle = load_model(settings.str("eval.model"));
    const LabeledCorpus test = read_conll_file(settings.str("eval.test"));
    printed = evaluate_model(bundle, test);
    report_out = report_json(printed);
    report_out["runs"] = 1;
    report_out["macro_f1_std"] = 0.0;
  } else {
    require(settings, "eval.test");
    const LabeledCorpus train = read_conll_file(settings.str("eval.train"));
    const LabeledCorpus test = read_conll_file(settings.str("eval.test"));
    const ModelKind kind = model_kind_from(settings);
    const TemplateSet templates = templates_from(settings);
    const RirConfig rir = rir_from(settings);
    const std::size_t min_count = settings.size("features.min_count");
    TrainConfig train_config = train_from(settings);

    const RunSummary summary = multi_run(
        [&](std::uint64_t seed) {
          TrainConfig seeded = train_config;
          seeded.seed = seed;
          return evaluate_model(
              train_bundle(train, kind, templates, min_count, rir, seeded), test);
        },
        runs, settings.u64("eval.seed"));

    report_out = json::object();
    for (const auto& [key, stats] : summary.metrics) report_out[key] = stats.mean;
    report_out["runs"] = runs;
    report_out["macro_f1_std"] = summary.metric("macro_f1").stddev;
    printed = summary.runs.front();
    for (std::size_t i = 0; i < summary.runs.size(); ++i) {
      std::cout << "run " << i << " macro_f1 = " << summary.runs[i].macro_f1 << "\n";
    }
  }

  if (retrain_mode) {
    std::cout << "mean over " << runs << " runs: macro_f1 = "
              << report_out["macro_f1"].get<double>() << " +/- "
              << report_out["macro_f1_std"].get<double>() << "\n";
  } else {
    print_report(std::cout, printed);
  }
  report_out["command"] = "eval";
  report_out["config"] = settings.echo();
  write_report(settings.str("eval.report"), report_out);
  return 0;
}

int cmd_kappa(const Settings& settings) {
  require(settings, "kappa.table");
  std::ifstream in(settings.str("kappa.table"));
  if (!in) throw Error("cannot open " + settings.str("kappa.table"));

  AgreementTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::vector<std::int64_t> row;
    std::int64_t value;
    while (fields >> value) row.push_back(value);
    if (!fields.eof()) throw Error("agreement table has non-numeric entries");
    if (!row.empty()) table.rows.push_back(std::move(row));
  }
  if (table.rows.empty()) throw Error("agreement table is empty");
  table.raters = 0;
  for (std::int64_t count : table.rows.front()) table.raters += count;

  const double kappa = fleiss_kappa(table);
  std::cout << "items = " << table.rows.size() << ", raters = " << table.raters
            << "\nfleiss_kappa = " << kappa << "\n";

  json report;
  report["fleiss_kappa"] = kappa;
  report["items"] = table.rows.size();
  report["raters"] = table.raters;
  report["command"] = "kappa";
  report["config"] = settings.echo();
  write_report(settings.str("kappa.report"), report);
  return 0;
}

int cmd_verify_stats(const Settings& settings) {
  require(settings, "verify.in");
  require(settings, "verify.fixture");

  std::ifstream fixture_file(settings.str("verify.fixture"));
  if (!fixture_file) throw Error("cannot open " + settings.str("verify.fixture"));
  json fixture;
  try {
    fixture_file >> fixture;
  } catch (const json::exception& e) {
    throw Error("bad fixture JSON: " + std::string(e.what()));
  }

  std::vector<StatExpectation> expected;
  if (fixture.contains("sentences")) {
    expected.push_back({"sentences", fixture["sentences"].get<std::int64_t>()});
  }
  if (fixture.contains("words")) {
    expected.push_back({"words", fixture["words"].get<std::int64_t>()});
  }
  if (fixture.contains("labels")) {
    for (Label label : kLabelOrder) {
      const std::string name(label_name(label));
      if (fixture["labels"].contains(name)) {
        expected.push_back({"label." + name, fixture["labels"][name].get<std::int64_t>()});
      }
    }
  }
  if (fixture.contains("languages")) {
    for (std::size_t i = 0; i < kNumLanguages; ++i) {
      const std::string name(language_name(static_cast<LanguageTag>(i)));
      if (fixture["languages"].contains(name)) {
        expected.push_back(
            {"lang." + name, fixture["languages"][name].get<std::int64_t>()});
      }
    }
  }

  const LabeledCorpus corpus = read_conll_file(settings.str("verify.in"));
  const VerificationReport report = verify_statistics(corpus, expected);
  json rows = json::array();
  for (const VerificationRow& row : report.rows) {
    std::cout << (row.pass ? "[ok]   " : "[FAIL] ") << row.name << ": expected "
              << row.expected << ", observed " << row.observed << "\n";
    rows.push_back({{"name", row.name},
                    {"expected", row.expected},
                    {"observed", row.observed},
                    {"pass", row.pass}});
  }
  std::cout << "overall: " << (report.pass ? "PASS" : "FAIL") << "\n";

  json out;
  out["rows"] = rows;
  out["pass"] = report.pass;
  out["command"] = "verify-stats";
  out["config"] = settings.echo();
  write_report(settings.str("verify.report"), out);
  return 0;
}

int cmd_inspect_spans(const Settings& settings) {
  require(settings, "inspect.in");
  const RirConfig rir = rir_from(settings);
  std::set<std::string> editing_lexicon;
  if (!settings.str("inspect.editing_lexicon").empty()) {
    for (std::string& word : read_word_list(settings.str("inspect.editing_lexicon"))) {
      editing_lexicon.insert(std::move(word));
    }
  }

  const LabeledCorpus corpus = read_conll_file(settings.str("inspect.in"));
  auto range = [](const TokenRange& r) {
    return "[" + std::to_string(r.begin) + "," + std::to_string(r.end) + ")";
  };
  for (const Sentence& sentence : corpus.sentences()) {
    for (const RiRSpan& span : find_spans(sentence, rir)) {
      const Label label = heuristic_classify(span, sentence, editing_lexicon);
      std::cout << sentence.id << '\t' << range(span.reparandum) << '\t'
                << range(span.interregnum) << '\t' << range(span.repair) << '\t'
                << label_name(label) << "\n";
    }
  }
  return 0;
}

int cmd_ablation(const Settings& settings) {
  require(settings, "ablation.train");
  require(settings, "ablation.test");

  const LabeledCorpus train = read_conll_file(settings.str("ablation.train"));
  const LabeledCorpus test = read_conll_file(settings.str("ablation.test"));

  // Base templates: the configured set with RiR stripped; run_ablation adds
  // the RIR_* group back for the second run.
  const std::string& csv = settings.str("features.templates");
  TemplateSet base;
  try {
    base = csv.empty() ? TemplateSet::defaults(false) : TemplateSet::parse(csv, false);
  } catch (const InvalidConfig& e) {
    throw UsageError(e.what());
  }

  const AblationReport report =
      run_ablation(train, test, model_kind_from(settings), base,
                   settings.size("features.min_count"), rir_from(settings),
                   train_from(settings));

  std::cout << "without RiR:\n";
  print_report(std::cout, report.without_rir);
  std::cout << "with RiR:\n";
  print_report(std::cout, report.with_rir);
  std::cout << "macro_f1 delta = " << report.macro_f1_delta << "\n";

  json out;
  out["without_rir"] = report_json(report.without_rir);
  out["with_rir"] = report_json(report.with_rir);
  out["macro_f1_delta"] = report.macro_f1_delta;
  out["command"] = "ablation";
  out["config"] = settings.echo();
  write_report(settings.str("ablation.report"), out);
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"redrep: reduplication vs. repetition token classification"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path,
                 "config file of key = value lines (default: $REDREP_CONFIG)");

  struct Command {
    CLI::App* app;
    Options options;
    int (*handler)(const Settings&);
  };
  std::vector<Command> commands;
  commands.reserve(16);

  auto add_command = [&](const char* name, const char* help,
                         int (*handler)(const Settings&)) -> Options& {
    CLI::App* sub = app.add_subcommand(name, help);
    commands.push_back({sub, Options(sub), handler});
    return commands.back().options;
  };

  {
    Options& o = add_command("synth", "generate a labeled synthetic corpus", cmd_synth);
    o.add("--out", "synth.out", "", "output corpus file");
    o.add("--trace", "synth.trace", "", "optional injection trace file");
    o.add("--seed", "synth.seed", "0", "generation seed");
    o.add("--n", "synth.n", "1000", "number of sentences");
    o.add("--min-len", "synth.min_len", "5", "minimum carrier length");
    o.add("--max-len", "synth.max_len", "12", "maximum carrier length");
    o.add("--p-redup", "synth.p_redup", "0.2", "P(inject reduplication)");
    o.add("--p-rep", "synth.p_rep", "0.2", "P(inject repetition)");
    o.add("--p-other", "synth.p_other", "0.1", "P(inject number/abbrev double)");
    o.add("--p-interregnum", "synth.p_interregnum", "0.5",
          "P(repetition carries an interregnum)");
    o.add("--p-confusion", "synth.p_confusion", "0.1", "P(inject confusion chain)");
    o.add("--lang", "synth.lang", "other", "language tag for generated sentences");
    o.add("--general-lexicon", "synth.general_lexicon", "", "word list file");
    o.add("--reduplicable-lexicon", "synth.reduplicable_lexicon", "", "word list file");
    o.add("--interregnum-lexicon", "synth.interregnum_lexicon", "", "word list file");
    o.add("--other-lexicon", "synth.other_lexicon", "", "word list file");
  }
  {
    Options& o = add_command("split", "stratified train/validation/test split", cmd_split);
    o.add("--in", "split.in", "", "input corpus");
    o.add("--train-out", "split.train_out", "", "training split output");
    o.add("--val-out", "split.val_out", "", "validation split output");
    o.add("--test-out", "split.test_out", "", "test split output");
    o.add("--ratios", "split.ratios", "0.8,0.1,0.1", "three ratios summing to 1");
    o.add("--seed", "split.seed", "0", "shuffle seed");
    o.add("--stratify", "split.stratify", "on", "stratify by label signature");
  }
  {
    Options& o = add_command("train", "train a model on a labeled corpus", cmd_train);
    o.add("--train", "train.train", "", "training corpus");
    o.add("--out", "train.out", "", "model output path");
    o.add("--model", "train.model", "crf", "crf or logreg");
    add_feature_options(o);
    add_rir_options(o);
    o.add("--epochs", "train.epochs", "5", "training epochs");
    o.add("--batch-size", "train.batch_size", "8", "mini-batch size");
    o.add("--learning-rate", "train.learning_rate", "0.1", "base step size");
    o.add("--l2", "train.l2", "0.0001", "L2 regularization strength");
    o.add("--seed", "train.seed", "0", "training seed");
    o.add("--shuffle", "train.shuffle", "on", "shuffle between epochs");
  }
  {
    Options& o = add_command("predict", "label a corpus with a trained model", cmd_predict);
    o.add("--model", "predict.model", "", "model file");
    o.add("--in", "predict.in", "", "input corpus");
    o.add("--out", "predict.out", "", "output corpus with predicted labels");
  }
  {
    Options& o = add_command("eval", "score predictions or models", cmd_eval);
    o.add("--gold", "eval.gold", "", "gold corpus (with --pred)");
    o.add("--pred", "eval.pred", "", "predicted corpus (with --gold)");
    o.add("--model", "eval.model", "", "trained model file (with --test)");
    o.add("--train", "eval.train", "", "training corpus for retraining mode");
    o.add("--test", "eval.test", "", "test corpus");
    o.add("--runs", "eval.runs", "1", "seeded retraining runs to average");
    o.add("--seed", "eval.seed", "0", "base seed for --runs");
    o.add("--report", "eval.report", "", "JSON report path");
    add_train_options(o);
    o.add("--train-seed", "train.seed", "0", "seed for single retraining runs");
    add_feature_options(o);
    add_rir_options(o);
  }
  {
    Options& o = add_command("kappa", "Fleiss' kappa over a rating table", cmd_kappa);
    o.add("--table", "kappa.table", "", "items x categories counts, one item per line");
    o.add("--report", "kappa.report", "", "JSON report path");
  }
  {
    Options& o =
        add_command("verify-stats", "check corpus statistics against a fixture",
                    cmd_verify_stats);
    o.add("--in", "verify.in", "", "corpus file");
    o.add("--fixture", "verify.fixture", "", "expected statistics (JSON)");
    o.add("--report", "verify.report", "", "JSON report path");
  }
  {
    Options& o = add_command("inspect-spans", "list detected RiR spans", cmd_inspect_spans);
    o.add("--in", "inspect.in", "", "corpus file");
    o.add("--editing-lexicon", "inspect.editing_lexicon", "",
          "word list recorded in heuristic traces");
    add_rir_options(o);
  }
  {
    Options& o = add_command("ablation", "paired with/without-RiR training", cmd_ablation);
    o.add("--train", "ablation.train", "", "training corpus");
    o.add("--test", "ablation.test", "", "test corpus");
    o.add("--report", "ablation.report", "", "JSON report path");
    add_train_options(o);
    o.add("--seed", "train.seed", "0", "training seed (identical for both runs)");
    add_feature_options(o);
    add_rir_options(o);
  }

  try {
    app.parse(argc, argv);

    ConfigMap file_config;
    if (config_path.empty()) {
      if (const char* env = std::getenv("REDREP_CONFIG")) config_path = env;
    }
    if (!config_path.empty()) file_config = load_config_file(config_path);

    for (Command& command : commands) {
      if (command.app->parsed()) {
        const Settings settings(command.options.resolve(file_config));
        return command.handler(settings);
      }
    }
    throw UsageError("no subcommand given");
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace redrep::cli
