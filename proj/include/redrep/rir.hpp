// Reparandum-Interregnum-Repair span detection over a sentence.
//
// A span is a duplicated word or phrase: the reparandum (first copy), an
// optional interregnum (the material between the copies), and the repair
// (second copy). The interruption point lives in the speech signal, not the
// transcript, so it is not modeled.

#ifndef REDREP_RIR_HPP
#define REDREP_RIR_HPP

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "redrep/corpus.hpp"

namespace redrep {

struct TokenRange {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive

  bool empty() const { return begin == end; }
  std::size_t size() const { return end - begin; }
  bool operator==(const TokenRange&) const = default;
};

struct RiRSpan {
  TokenRange reparandum;
  TokenRange interregnum;  // possibly empty; sits between the copies
  TokenRange repair;

  std::size_t gap() const { return interregnum.size(); }
  bool operator==(const RiRSpan&) const = default;
};

enum class MatchField : std::uint8_t { Normalized = 0, Surface = 1 };

struct RirConfig {
  std::size_t max_interregnum_len = 2;
  std::size_t max_phrase_len = 3;
  MatchField match_on = MatchField::Normalized;
};

// Left-to-right scan. At each start position and for each phrase length
// (longest first), the match with the smallest gap is emitted. Keeping the
// shorter-phrase matches alongside a longer one preserves monotonicity in
// max_interregnum_len: raising the cap only ever adds spans.
std::vector<RiRSpan> find_spans(const Sentence& sentence, const RirConfig& config = {});

// Per-token structural record derived from the spans covering it.
struct RirTokenRecord {
  bool in_reparandum = false;
  bool in_repair = false;
  std::vector<std::string> interregnum_tokens;
  int gap_len = -1;  // -1 when the token is in no span
  std::string left_word;   // token before the whole RiR region, or <BOS>
  std::string right_word;  // token after the whole RiR region, or <EOS>

  bool empty() const { return !in_reparandum && !in_repair; }
};

inline constexpr const char* kBosWord = "<BOS>";
inline constexpr const char* kEosWord = "<EOS>";

// When a token sits in several spans (chains), the flags are OR-ed and the
// context fields come from the span where the token is part of the
// reparandum, falling back to its repair span. Throws InconsistentSpans if a
// span does not fit the sentence.
std::vector<RirTokenRecord> annotate_rir_features(const Sentence& sentence,
                                                  const std::vector<RiRSpan>& spans);

// Non-empty interregnum signals repetition; an empty one reduplication.
Label heuristic_classify(const RiRSpan& span, const Sentence& sentence,
                         const std::set<std::string>& editing_lexicon);

struct HeuristicDecision {
  Label label = Label::O;
  std::vector<std::string> interregnum;     // normalized interregnum words
  std::vector<std::string> editing_terms;   // interregnum words found in the lexicon
};

HeuristicDecision heuristic_classify_traced(const RiRSpan& span, const Sentence& sentence,
                                            const std::set<std::string>& editing_lexicon);

}  // namespace redrep

#endif  // REDREP_RIR_HPP
