// Deterministic template-based generator of labeled corpora: fluent carrier
// sentences with injected reduplication, repetition (with or without an
// interregnum), 'other' duplications (numbers/abbreviations), and
// confusion chains "w INT w w" where a repetition and a reduplication share
// a word.
//
// Class separability is by construction: reduplication draws from the
// reduplicable lexicon, repetition doubles a word of the carrier sentence,
// and 'other' draws from the number/abbreviation lexicon. The lexicons are
// pairwise disjoint.

#ifndef REDREP_SYNTH_HPP
#define REDREP_SYNTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "redrep/corpus.hpp"

namespace redrep {

struct SynthConfig {
  std::uint64_t seed = 0;
  std::size_t n_sentences = 0;
  std::size_t min_len = 5;   // carrier tokens before injections
  std::size_t max_len = 12;
  double p_redup = 0.0;
  double p_rep = 0.0;
  double p_other = 0.0;
  double p_interregnum = 0.5;  // P(repetition carries an interregnum word)
  double p_confusion = 0.1;    // P(Example-2 style chain)
  LanguageTag language = LanguageTag::Other;
  std::vector<std::string> general_lexicon;
  std::vector<std::string> reduplicable_lexicon;
  std::vector<std::string> interregnum_lexicon;
  std::vector<std::string> other_lexicon;  // numbers, abbreviation echoes

  // Transliterated placeholder lexicons; substitute real word lists freely,
  // the generator is script-agnostic.
  static SynthConfig defaults();
};

enum class InjectionKind : std::uint8_t { Redup = 0, Rep = 1, Other = 2, Confusion = 3 };

std::string_view injection_kind_name(InjectionKind kind);

struct Injection {
  InjectionKind kind = InjectionKind::Redup;
  // Final token indices: redup/other -> {first, second}; rep -> {first,
  // (interregnum,) second}; confusion -> {w1, interregnum, w2, w3}.
  std::vector<std::size_t> indices;
};

struct SentenceTrace {
  std::string sentence_id;
  std::vector<Injection> injections;
};

struct GenerationTrace {
  std::vector<SentenceTrace> sentences;
};

struct SynthResult {
  LabeledCorpus corpus;
  GenerationTrace trace;
};

// Deterministic given the seed; each sentence is generated from a derived
// per-sentence stream, so sentence i does not depend on how many sentences
// come before it.
SynthResult generate_corpus(const SynthConfig& config);

struct ExpectedCount {
  Label label = Label::O;
  double expected = 0.0;
  double stddev = 0.0;
};

// Analytic expectations (with binomial standard deviations) for the three
// injected classes. O is excluded: its total depends on the carrier length
// draw, not on the injection probabilities.
std::vector<ExpectedCount> expected_counts(const SynthConfig& config);

// One line per injection: sentence_id<TAB>kind<TAB>comma-separated indices.
std::string write_trace(const GenerationTrace& trace);

}  // namespace redrep

#endif  // REDREP_SYNTH_HPP
