// Sparse feature extraction through declarative templates, with a frozen
// name -> id index so train and test see identical feature spaces.

#ifndef REDREP_FEATURES_HPP
#define REDREP_FEATURES_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "redrep/corpus.hpp"
#include "redrep/rir.hpp"

namespace redrep {

enum class Template : std::uint16_t {
  W0 = 0,
  WPrev,
  WNext,
  EqPrev,
  EqNext,
  Prefix3,
  Suffix3,
  RirInReparandum,
  RirInRepair,
  RirInterregnumWord,
  RirGapLen,
  RirLeftWord,
  RirRightWord,
};

inline constexpr std::size_t kNumTemplates = 13;

std::string_view template_name(Template t);  // "W0", "W-1", ... as in configs
Template template_from_name(std::string_view name);  // throws InvalidConfig

struct TemplateSet {
  std::uint16_t mask = 0;
  bool use_rir = false;

  bool enabled(Template t) const { return mask & (1u << static_cast<unsigned>(t)); }
  void enable(Template t) { mask |= 1u << static_cast<unsigned>(t); }
  void disable(Template t) { mask &= ~(1u << static_cast<unsigned>(t)); }

  // Base lexical templates; RIR_* added on top when use_rir is true.
  static TemplateSet defaults(bool use_rir);
  // Comma-separated template names. use_rir=false strips any RIR_* entries.
  static TemplateSet parse(std::string_view csv, bool use_rir);
  std::string to_string() const;  // canonical comma-separated form

  bool operator==(const TemplateSet&) const = default;
};

// Dense name <-> id mapping. After freezing, unseen names map to the
// reserved OOV id instead of growing the index.
class FeatureIndex {
 public:
  static constexpr std::string_view kOovName = "<OOV>";

  FeatureIndex() = default;

  // Builds a frozen index from sorted unique names (OOV appended).
  static FeatureIndex from_names(std::vector<std::string> sorted_names,
                                 std::size_t min_count);

  std::size_t size() const { return names_.size(); }
  bool frozen() const { return frozen_; }
  std::uint32_t oov_id() const { return static_cast<std::uint32_t>(names_.size() - 1); }
  const std::string& name_of(std::uint32_t id) const { return names_[id]; }
  const std::vector<std::string>& names() const { return names_; }
  std::size_t min_count() const { return min_count_; }

  // OOV for unknown names; requires a frozen index.
  std::uint32_t id_of(std::string_view name) const;
  // -1 when absent (lookup without OOV mapping, for tests/tools).
  std::int64_t find(std::string_view name) const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::size_t min_count_ = 1;
  bool frozen_ = false;
};

// Sparse vector; ids unique, sorted ascending. Indicator features carry 1.0;
// repeated emissions of one feature accumulate.
struct FeatureVector {
  std::vector<std::pair<std::uint32_t, double>> entries;

  void add(std::uint32_t id, double value = 1.0);
  bool operator==(const FeatureVector&) const = default;
};

// Scans the corpus, counts feature names under the templates, and keeps the
// ones occurring at least min_count times (plus OOV), ordered
// lexicographically. RiR spans are recomputed internally with rir_config
// when the template set uses them.
FeatureIndex fit_feature_index(const LabeledCorpus& corpus, const TemplateSet& templates,
                               std::size_t min_count = 1, const RirConfig& rir_config = {});

std::vector<FeatureVector> extract_features(const Sentence& sentence,
                                            const std::vector<RirTokenRecord>& rir_records,
                                            const FeatureIndex& index,
                                            const TemplateSet& templates);

// Every feature name for one token, in emission order. Shared by fitting and
// extraction so the two can never disagree.
void emit_token_features(const Sentence& sentence,
                         const std::vector<RirTokenRecord>& rir_records,
                         const TemplateSet& templates, std::size_t position,
                         const std::function<void(std::string)>& sink);

}  // namespace redrep

#endif  // REDREP_FEATURES_HPP
