#include "redrep/features.hpp"

#include <algorithm>
#include <map>

#include "redrep/errors.hpp"

namespace redrep {

namespace {

constexpr std::string_view kTemplateNames[kNumTemplates] = {
    "W0",   "W-1",  "W+1",  "EQ_PREV", "EQ_NEXT", "PREFIX3", "SUFFIX3",
    "RIR_IN_REPARANDUM", "RIR_IN_REPAIR", "RIR_INTERREGNUM_WORD",
    "RIR_GAP_LEN", "RIR_LEFT_WORD", "RIR_RIGHT_WORD"};

bool is_rir_template(Template t) {
  return static_cast<unsigned>(t) >= static_cast<unsigned>(Template::RirInReparandum);
}

// First/last `count` code points of a UTF-8 string (code points, not bytes:
// Devanagari and Telugu characters are multibyte).
std::string_view utf8_prefix(std::string_view s, std::size_t count) {
  std::size_t i = 0, seen = 0;
  while (i < s.size() && seen < count) {
    ++i;
    while (i < s.size() && (static_cast<unsigned char>(s[i]) & 0xC0) == 0x80) ++i;
    ++seen;
  }
  return s.substr(0, i);
}

std::string_view utf8_suffix(std::string_view s, std::size_t count) {
  std::size_t i = s.size(), seen = 0;
  while (i > 0 && seen < count) {
    --i;
    while (i > 0 && (static_cast<unsigned char>(s[i]) & 0xC0) == 0x80) --i;
    ++seen;
  }
  return s.substr(i);
}

}  // namespace

std::string_view template_name(Template t) {
  return kTemplateNames[static_cast<std::size_t>(t)];
}

Template template_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kNumTemplates; ++i) {
    if (kTemplateNames[i] == name) return static_cast<Template>(i);
  }
  throw InvalidConfig("unknown feature template \"" + std::string(name) + "\"");
}

TemplateSet TemplateSet::defaults(bool use_rir) {
  TemplateSet set;
  set.use_rir = use_rir;
  for (Template t : {Template::W0, Template::WPrev, Template::WNext, Template::EqPrev,
                     Template::EqNext, Template::Prefix3, Template::Suffix3}) {
    set.enable(t);
  }
  if (use_rir) {
    for (Template t : {Template::RirInReparandum, Template::RirInRepair,
                       Template::RirInterregnumWord, Template::RirGapLen,
                       Template::RirLeftWord, Template::RirRightWord}) {
      set.enable(t);
    }
  }
  return set;
}

TemplateSet TemplateSet::parse(std::string_view csv, bool use_rir) {
  TemplateSet set;
  set.use_rir = use_rir;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    std::size_t comma = csv.find(',', pos);
    if (comma == std::string_view::npos) comma = csv.size();
    std::string_view item = csv.substr(pos, comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) {
      const Template t = template_from_name(item);
      if (!is_rir_template(t) || use_rir) set.enable(t);
    }
    pos = comma + 1;
  }
  return set;
}

std::string TemplateSet::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < kNumTemplates; ++i) {
    if (!enabled(static_cast<Template>(i))) continue;
    if (!out.empty()) out += ',';
    out += kTemplateNames[i];
  }
  return out;
}

FeatureIndex FeatureIndex::from_names(std::vector<std::string> sorted_names,
                                      std::size_t min_count) {
  FeatureIndex index;
  index.names_ = std::move(sorted_names);
  index.names_.emplace_back(kOovName);
  index.ids_.reserve(index.names_.size());
  for (std::size_t i = 0; i < index.names_.size(); ++i) {
    index.ids_.emplace(index.names_[i], static_cast<std::uint32_t>(i));
  }
  index.min_count_ = min_count;
  index.frozen_ = true;
  return index;
}

std::uint32_t FeatureIndex::id_of(std::string_view name) const {
  if (!frozen_) throw IndexNotFrozen("feature index must be frozen before lookups");
  auto it = ids_.find(std::string(name));
  return it == ids_.end() ? oov_id() : it->second;
}

std::int64_t FeatureIndex::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  return it == ids_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

void FeatureVector::add(std::uint32_t id, double value) {
  auto it = std::lower_bound(entries.begin(), entries.end(), id,
                             [](const auto& entry, std::uint32_t key) {
                               return entry.first < key;
                             });
  if (it != entries.end() && it->first == id) {
    it->second += value;
  } else {
    entries.insert(it, {id, value});
  }
}

void emit_token_features(const Sentence& sentence,
                         const std::vector<RirTokenRecord>& rir_records,
                         const TemplateSet& templates, std::size_t position,
                         const std::function<void(std::string)>& sink) {
  const std::vector<Token>& tokens = sentence.tokens;
  const std::string& word = tokens[position].normalized;

  auto neighbor = [&](std::size_t pos, int delta) -> const std::string& {
    static const std::string bos = kBosWord;
    static const std::string eos = kEosWord;
    if (delta < 0) return pos == 0 ? bos : tokens[pos - 1].normalized;
    return pos + 1 >= tokens.size() ? eos : tokens[pos + 1].normalized;
  };

  if (templates.enabled(Template::W0)) sink("W0=" + word);
  if (templates.enabled(Template::WPrev)) sink("W-1=" + neighbor(position, -1));
  if (templates.enabled(Template::WNext)) sink("W+1=" + neighbor(position, +1));
  if (templates.enabled(Template::EqPrev) && position > 0 &&
      tokens[position - 1].normalized == word && !word.empty()) {
    sink("EQ_PREV");
  }
  if (templates.enabled(Template::EqNext) && position + 1 < tokens.size() &&
      tokens[position + 1].normalized == word && !word.empty()) {
    sink("EQ_NEXT");
  }
  if (templates.enabled(Template::Prefix3) && !word.empty()) {
    sink("PREFIX3=" + std::string(utf8_prefix(word, 3)));
  }
  if (templates.enabled(Template::Suffix3) && !word.empty()) {
    sink("SUFFIX3=" + std::string(utf8_suffix(word, 3)));
  }

  if (!templates.use_rir || rir_records.empty()) return;
  const RirTokenRecord& record = rir_records[position];
  if (record.empty()) return;

  if (templates.enabled(Template::RirInReparandum) && record.in_reparandum) {
    sink("RIR_IN_REPARANDUM");
  }
  if (templates.enabled(Template::RirInRepair) && record.in_repair) {
    sink("RIR_IN_REPAIR");
  }
  if (templates.enabled(Template::RirInterregnumWord)) {
    for (const std::string& interregnum_word : record.interregnum_tokens) {
      sink("RIR_INTERREGNUM_WORD=" + interregnum_word);
    }
  }
  if (templates.enabled(Template::RirGapLen) && record.gap_len >= 0) {
    sink("RIR_GAP_LEN=" + std::to_string(record.gap_len));
  }
  if (templates.enabled(Template::RirLeftWord)) {
    sink("RIR_LEFT_WORD=" + record.left_word);
  }
  if (templates.enabled(Template::RirRightWord)) {
    sink("RIR_RIGHT_WORD=" + record.right_word);
  }
}

FeatureIndex fit_feature_index(const LabeledCorpus& corpus, const TemplateSet& templates,
                               std::size_t min_count, const RirConfig& rir_config) {
  if (corpus.empty()) throw EmptyCorpus("cannot fit a feature index on an empty corpus");

  std::map<std::string, std::size_t> counts;  // ordered: lexicographic ids for free
  for (const Sentence& sentence : corpus.sentences()) {
    std::vector<RirTokenRecord> records;
    if (templates.use_rir) {
      records = annotate_rir_features(sentence, find_spans(sentence, rir_config));
    }
    for (std::size_t t = 0; t < sentence.tokens.size(); ++t) {
      emit_token_features(sentence, records, templates, t,
                          [&](std::string name) { ++counts[std::move(name)]; });
    }
  }

  std::vector<std::string> names;
  names.reserve(counts.size());
  for (const auto& [name, count] : counts) {
    if (count >= min_count) names.push_back(name);
  }
  return FeatureIndex::from_names(std::move(names), min_count);
}

std::vector<FeatureVector> extract_features(const Sentence& sentence,
                                            const std::vector<RirTokenRecord>& rir_records,
                                            const FeatureIndex& index,
                                            const TemplateSet& templates) {
  if (!index.frozen()) throw IndexNotFrozen("extract_features requires a frozen index");
  if (templates.use_rir && !rir_records.empty() &&
      rir_records.size() != sentence.tokens.size()) {
    throw DimensionMismatch("rir records not aligned with sentence");
  }

  std::vector<FeatureVector> vectors(sentence.tokens.size());
  for (std::size_t t = 0; t < sentence.tokens.size(); ++t) {
    emit_token_features(sentence, rir_records, templates, t,
                        [&](std::string name) { vectors[t].add(index.id_of(name)); });
  }
  return vectors;
}

}  // namespace redrep
