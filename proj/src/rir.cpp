#include "redrep/rir.hpp"

#include <algorithm>

#include "redrep/errors.hpp"

namespace redrep {

namespace {

const std::string& match_key(const Token& token, MatchField field) {
  return field == MatchField::Normalized ? token.normalized : token.surface;
}

bool phrase_equal(const Sentence& sentence, std::size_t a, std::size_t b,
                  std::size_t len, MatchField field) {
  for (std::size_t k = 0; k < len; ++k) {
    if (match_key(sentence.tokens[a + k], field) !=
        match_key(sentence.tokens[b + k], field)) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::vector<RiRSpan> find_spans(const Sentence& sentence, const RirConfig& config) {
  std::vector<RiRSpan> spans;
  const std::size_t n = sentence.tokens.size();
  if (config.max_phrase_len == 0) return spans;

  for (std::size_t start = 0; start < n; ++start) {
    const std::size_t longest = std::min(config.max_phrase_len, (n - start) / 2);
    for (std::size_t len = longest; len >= 1; --len) {
      for (std::size_t gap = 0; gap <= config.max_interregnum_len; ++gap) {
        const std::size_t repair_start = start + len + gap;
        if (repair_start + len > n) break;
        if (!phrase_equal(sentence, start, repair_start, len, config.match_on)) continue;
        RiRSpan span;
        span.reparandum = {start, start + len};
        span.interregnum = {start + len, repair_start};
        span.repair = {repair_start, repair_start + len};
        spans.push_back(span);
        break;  // smallest gap wins for this (start, len)
      }
      if (len == 1) break;
    }
  }
  return spans;
}

std::vector<RirTokenRecord> annotate_rir_features(const Sentence& sentence,
                                                  const std::vector<RiRSpan>& spans) {
  const std::size_t n = sentence.tokens.size();
  std::vector<RirTokenRecord> records(n);

  for (const RiRSpan& span : spans) {
    if (span.repair.end > n || span.reparandum.begin >= span.reparandum.end ||
        span.reparandum.size() != span.repair.size() ||
        span.reparandum.end != span.interregnum.begin ||
        span.interregnum.end != span.repair.begin) {
      throw InconsistentSpans("span does not fit the sentence");
    }
  }

  auto fill_context = [&](RirTokenRecord& record, const RiRSpan& span) {
    record.gap_len = static_cast<int>(span.gap());
    record.interregnum_tokens.clear();
    for (std::size_t i = span.interregnum.begin; i < span.interregnum.end; ++i) {
      record.interregnum_tokens.push_back(sentence.tokens[i].normalized);
    }
    record.left_word = span.reparandum.begin == 0
                           ? kBosWord
                           : sentence.tokens[span.reparandum.begin - 1].normalized;
    record.right_word = span.repair.end >= n
                            ? kEosWord
                            : sentence.tokens[span.repair.end].normalized;
  };

  for (const RiRSpan& span : spans) {
    for (std::size_t i = span.reparandum.begin; i < span.reparandum.end; ++i) {
      RirTokenRecord& record = records[i];
      // Reparandum membership takes precedence for the context fields; the
      // first covering span in scan order wins within the same role.
      if (!record.in_reparandum) fill_context(record, span);
      record.in_reparandum = true;
    }
    for (std::size_t i = span.repair.begin; i < span.repair.end; ++i) {
      RirTokenRecord& record = records[i];
      if (!record.in_reparandum && !record.in_repair) fill_context(record, span);
      record.in_repair = true;
    }
  }
  return records;
}

Label heuristic_classify(const RiRSpan& span, const Sentence& sentence,
                         const std::set<std::string>& editing_lexicon) {
  return heuristic_classify_traced(span, sentence, editing_lexicon).label;
}

HeuristicDecision heuristic_classify_traced(const RiRSpan& span, const Sentence& sentence,
                                            const std::set<std::string>& editing_lexicon) {
  HeuristicDecision decision;
  for (std::size_t i = span.interregnum.begin; i < span.interregnum.end; ++i) {
    const std::string& word = sentence.tokens[i].normalized;
    decision.interregnum.push_back(word);
    if (editing_lexicon.count(word) > 0) decision.editing_terms.push_back(word);
  }
  // The rule keys only on interregnum emptiness; the editing terms are trace.
  decision.label = span.interregnum.empty() ? Label::Redup : Label::Rep;
  return decision;
}

}  // namespace redrep
