// Data model and file I/O for token-labeled corpora.
//
// File format (UTF-8, LF):
//   # id = <string>          optional comment, one per sentence
//   # lang = <tag>           optional comment, tag in {hi, te, mr, other}
//   token<TAB>label          or a bare "token" for unlabeled sentences
//   <blank line>             sentence separator
//
// Labels serialize exactly as "reduplication" | "repetition" | "other" | "O".

#ifndef REDREP_CORPUS_HPP
#define REDREP_CORPUS_HPP

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace redrep {

// Fixed label order. Every tie-break in the models references it.
enum class Label : std::uint8_t { Redup = 0, Rep = 1, Other = 2, O = 3 };

inline constexpr std::size_t kNumLabels = 4;
inline constexpr std::array<Label, kNumLabels> kLabelOrder = {
    Label::Redup, Label::Rep, Label::Other, Label::O};

std::string_view label_name(Label label);
Label label_from_name(std::string_view name);  // throws UnknownLabel

enum class LanguageTag : std::uint8_t { Hi = 0, Te = 1, Mr = 2, Other = 3 };
inline constexpr std::size_t kNumLanguages = 4;

std::string_view language_name(LanguageTag tag);
LanguageTag language_from_name(std::string_view name);  // unknown -> Other

struct Token {
  std::string surface;     // no whitespace
  std::string normalized;  // NFC, no leading/trailing punctuation
  std::size_t index = 0;   // position within the sentence
};

struct Sentence {
  std::string id;
  LanguageTag language = LanguageTag::Other;
  std::vector<Token> tokens;
  std::vector<Label> labels;  // empty, or one per token

  bool has_labels() const { return !labels.empty(); }
};

struct CorpusStats {
  std::array<std::int64_t, kNumLabels> label_counts{};
  std::array<std::int64_t, kNumLanguages> language_counts{};  // sentences
  std::int64_t sentence_count = 0;
  std::int64_t token_count = 0;

  bool operator==(const CorpusStats&) const = default;
};

CorpusStats recount_stats(const std::vector<Sentence>& sentences);

// Immutable once constructed; stats are computed at construction time and
// always equal a recount.
class LabeledCorpus {
 public:
  LabeledCorpus() = default;
  explicit LabeledCorpus(std::vector<Sentence> sentences);

  const std::vector<Sentence>& sentences() const { return sentences_; }
  const CorpusStats& stats() const { return stats_; }
  bool empty() const { return sentences_.empty(); }
  std::size_t size() const { return sentences_.size(); }
  bool fully_labeled() const;

 private:
  std::vector<Sentence> sentences_;
  CorpusStats stats_;
};

bool corpus_equal(const LabeledCorpus& a, const LabeledCorpus& b);

LabeledCorpus parse_conll(std::string_view text);
std::string write_conll(const LabeledCorpus& corpus);

LabeledCorpus read_conll_file(const std::string& path);
void write_conll_file(const LabeledCorpus& corpus, const std::string& path);

// NFC + punctuation stripping over raw surface tokens; tokens that normalize
// to nothing are dropped and indices reassigned.
std::vector<Token> normalize_sentence(const std::vector<std::string>& raw);

struct SplitSpec {
  double train_ratio = 0.8;
  double val_ratio = 0.1;
  double test_ratio = 0.1;
  std::uint64_t seed = 0;
  bool stratify = true;
};

struct SplitResult {
  LabeledCorpus train;
  LabeledCorpus validation;
  LabeledCorpus test;
};

// Sentences are bucketed by the set of non-O classes they contain (8 possible
// signatures) and each bucket is cut by the same ratios with largest-remainder
// rounding. Deterministic given the seed.
SplitResult stratified_split(const LabeledCorpus& corpus, const SplitSpec& spec);

// Fixture verification against published corpus statistics. Names:
//   sentences | words | label.<label name> | lang.<language tag>
struct StatExpectation {
  std::string name;
  std::int64_t expected = 0;
};

struct VerificationRow {
  std::string name;
  std::int64_t expected = 0;
  std::int64_t observed = 0;
  bool pass = false;
};

struct VerificationReport {
  std::vector<VerificationRow> rows;
  bool pass = true;
};

VerificationReport verify_statistics(const LabeledCorpus& corpus,
                                     const std::vector<StatExpectation>& expected);

}  // namespace redrep

#endif  // REDREP_CORPUS_HPP
