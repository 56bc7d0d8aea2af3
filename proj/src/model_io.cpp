#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "redrep/errors.hpp"
#include "redrep/models.hpp"

namespace redrep {

namespace {

constexpr std::string_view kMagic = "redrep-model";
constexpr std::string_view kVersion = "v1";

// Shortest decimal form that round-trips to the same double.
void append_double(std::string& out, double value) {
  char buffer[40];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  out.append(buffer, result.ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) {
    throw CorruptFile("bad numeric literal \"" + std::string(text) + "\"");
  }
  return value;
}

void append_row(std::string& out, const double* values, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    if (i > 0) out += ' ';
    append_double(out, values[i]);
  }
  out += '\n';
}

class LineReader {
 public:
  explicit LineReader(std::string text) : text_(std::move(text)) {}

  std::string_view next() {
    if (pos_ >= text_.size()) throw CorruptFile("unexpected end of model file");
    std::size_t eol = text_.find('\n', pos_);
    if (eol == std::string::npos) eol = text_.size();
    std::string_view line(text_.data() + pos_, eol - pos_);
    pos_ = eol + 1;
    return line;
  }

  bool exhausted() const { return pos_ >= text_.size(); }

 private:
  std::string text_;
  std::size_t pos_ = 0;
};

std::vector<std::string_view> split_fields(std::string_view line, char sep = ' ') {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t next = line.find(sep, pos);
    if (next == std::string_view::npos) next = line.size();
    if (next > pos) fields.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
  return fields;
}

void parse_row(std::string_view line, double* values, std::size_t count) {
  const auto fields = split_fields(line);
  if (fields.size() != count) {
    throw CorruptFile("expected " + std::to_string(count) + " values, got " +
                      std::to_string(fields.size()));
  }
  for (std::size_t i = 0; i < count; ++i) values[i] = parse_double(fields[i]);
}

}  // namespace

std::string_view model_kind_name(ModelKind kind) {
  return kind == ModelKind::LogReg ? "logreg" : "crf";
}

void save_model(const ModelBundle& bundle, const std::string& path) {
  const std::size_t features = bundle.index.size();
  std::string out;
  out += kMagic;
  out += ' ';
  out += kVersion;
  out += ' ';
  out += model_kind_name(bundle.kind);
  out += "\nlabels";
  for (Label label : kLabelOrder) {
    out += ' ';
    out += label_name(label);
  }
  const std::string template_list = bundle.templates.to_string();
  out += "\ntemplates ";
  out += template_list.empty() ? "-" : template_list;
  out += bundle.templates.use_rir ? " rir=on" : " rir=off";
  out += "\nrir max_interregnum_len=" + std::to_string(bundle.rir.max_interregnum_len) +
         " max_phrase_len=" + std::to_string(bundle.rir.max_phrase_len) + " match_on=" +
         (bundle.rir.match_on == MatchField::Normalized ? "normalized" : "surface");
  out += "\nfeatures " + std::to_string(features) + "\n";
  for (std::size_t i = 0; i < features; ++i) {
    out += std::to_string(i);
    out += ' ';
    out += bundle.index.name_of(static_cast<std::uint32_t>(i));
    out += '\n';
  }

  if (bundle.kind == ModelKind::LogReg) {
    out += "params " + std::to_string(bundle.logreg.weights.size()) + "\n";
    for (std::size_t row = 0; row < kNumLabels; ++row) {
      append_row(out, bundle.logreg.weights.data() + row * features, features);
    }
  } else {
    const std::size_t total = bundle.crf.unary.size() + bundle.crf.transitions.size() +
                              bundle.crf.begin.size() + bundle.crf.end.size();
    out += "params " + std::to_string(total) + "\n";
    for (std::size_t row = 0; row < kNumLabels; ++row) {
      append_row(out, bundle.crf.unary.data() + row * features, features);
    }
    for (std::size_t row = 0; row < kNumLabels; ++row) {
      append_row(out, bundle.crf.transitions.data() + row * kNumLabels, kNumLabels);
    }
    append_row(out, bundle.crf.begin.data(), kNumLabels);
    append_row(out, bundle.crf.end.data(), kNumLabels);
  }

  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open " + path + " for writing");
  file << out;
  if (!file) throw Error("failed writing " + path);
}

ModelBundle load_model(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open " + path);
  std::ostringstream buffer;
  buffer << file.rdbuf();
  LineReader reader(buffer.str());

  const auto header = split_fields(reader.next());
  if (header.size() != 3 || header[0] != kMagic) {
    throw CorruptFile("not a redrep model file");
  }
  if (header[1] != kVersion) {
    throw UnsupportedVersion("model file version \"" + std::string(header[1]) + "\"");
  }

  ModelBundle bundle;
  if (header[2] == "logreg") {
    bundle.kind = ModelKind::LogReg;
  } else if (header[2] == "crf") {
    bundle.kind = ModelKind::Crf;
  } else {
    throw CorruptFile("unknown model kind \"" + std::string(header[2]) + "\"");
  }

  const auto labels = split_fields(reader.next());
  if (labels.size() != 1 + kNumLabels || labels[0] != "labels") {
    throw CorruptFile("bad labels line");
  }
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    if (labels[i + 1] != label_name(kLabelOrder[i])) {
      throw CorruptFile("unexpected label order");
    }
  }

  const auto templates = split_fields(reader.next());
  if (templates.size() != 3 || templates[0] != "templates") {
    throw CorruptFile("bad templates line");
  }
  const bool use_rir = templates[2] == "rir=on";
  bundle.templates = templates[1] == "-" ? TemplateSet{0, use_rir}
                                         : TemplateSet::parse(templates[1], use_rir);

  const auto rir = split_fields(reader.next());
  if (rir.size() != 4 || rir[0] != "rir") throw CorruptFile("bad rir line");
  auto value_of = [](std::string_view field, std::string_view key) {
    if (!field.starts_with(key) || field.size() <= key.size() ||
        field[key.size()] != '=') {
      throw CorruptFile("bad rir field \"" + std::string(field) + "\"");
    }
    return field.substr(key.size() + 1);
  };
  bundle.rir.max_interregnum_len =
      static_cast<std::size_t>(parse_double(value_of(rir[1], "max_interregnum_len")));
  bundle.rir.max_phrase_len =
      static_cast<std::size_t>(parse_double(value_of(rir[2], "max_phrase_len")));
  bundle.rir.match_on = value_of(rir[3], "match_on") == "surface" ? MatchField::Surface
                                                                  : MatchField::Normalized;

  const auto features_header = split_fields(reader.next());
  if (features_header.size() != 2 || features_header[0] != "features") {
    throw CorruptFile("bad features line");
  }
  const std::size_t feature_count =
      static_cast<std::size_t>(parse_double(features_header[1]));
  if (feature_count == 0) throw CorruptFile("feature index is empty");

  std::vector<std::string> names;
  names.reserve(feature_count);
  for (std::size_t i = 0; i < feature_count; ++i) {
    const std::string_view line = reader.next();
    const std::size_t space = line.find(' ');
    if (space == std::string_view::npos) throw CorruptFile("bad feature line");
    if (static_cast<std::size_t>(parse_double(line.substr(0, space))) != i) {
      throw CorruptFile("feature ids must be dense and ascending");
    }
    names.emplace_back(line.substr(space + 1));
  }
  if (names.back() != FeatureIndex::kOovName) {
    throw CorruptFile("feature index must end with the OOV entry");
  }
  names.pop_back();
  bundle.index = FeatureIndex::from_names(std::move(names), 1);

  const auto params_header = split_fields(reader.next());
  if (params_header.size() != 2 || params_header[0] != "params") {
    throw CorruptFile("bad params line");
  }
  const std::size_t param_count =
      static_cast<std::size_t>(parse_double(params_header[1]));

  const std::size_t features = bundle.index.size();
  if (bundle.kind == ModelKind::LogReg) {
    if (param_count != kNumLabels * features) throw CorruptFile("bad param count");
    bundle.logreg.num_features = features;
    bundle.logreg.weights.assign(param_count, 0.0);
    for (std::size_t row = 0; row < kNumLabels; ++row) {
      parse_row(reader.next(), bundle.logreg.weights.data() + row * features, features);
    }
  } else {
    const std::size_t expected =
        kNumLabels * features + kNumLabels * kNumLabels + 2 * kNumLabels;
    if (param_count != expected) throw CorruptFile("bad param count");
    bundle.crf.num_features = features;
    bundle.crf.unary.assign(kNumLabels * features, 0.0);
    for (std::size_t row = 0; row < kNumLabels; ++row) {
      parse_row(reader.next(), bundle.crf.unary.data() + row * features, features);
    }
    for (std::size_t row = 0; row < kNumLabels; ++row) {
      parse_row(reader.next(), bundle.crf.transitions.data() + row * kNumLabels, kNumLabels);
    }
    parse_row(reader.next(), bundle.crf.begin.data(), kNumLabels);
    parse_row(reader.next(), bundle.crf.end.data(), kNumLabels);
  }
  return bundle;
}

std::vector<Label> predict_sentence(const ModelBundle& bundle, const Sentence& sentence) {
  std::vector<RirTokenRecord> records;
  if (bundle.templates.use_rir) {
    records = annotate_rir_features(sentence, find_spans(sentence, bundle.rir));
  }
  const std::vector<FeatureVector> vectors =
      extract_features(sentence, records, bundle.index, bundle.templates);

  std::vector<Label> labels;
  labels.reserve(vectors.size());
  if (bundle.kind == ModelKind::Crf) {
    return crf_viterbi(bundle.crf, vectors).labels;
  }
  for (const FeatureVector& vector : vectors) {
    labels.push_back(logreg_argmax(bundle.logreg, vector));
  }
  return labels;
}

}  // namespace redrep
