#include "redrep/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "redrep/errors.hpp"
#include "redrep/rng.hpp"
#include "redrep/textnorm.hpp"

namespace redrep {

SynthConfig SynthConfig::defaults() {
  SynthConfig config;
  config.general_lexicon = {
      "ghar",    "kaam",   "pani",   "log",    "din",     "raat",   "baat",
      "gaon",    "sadak",  "school", "bacche", "khana",   "samay",  "duniya",
      "kitab",   "phool",  "dost",   "aadmi",  "aurat",   "khabar", "gaana",
      "mausam",  "hawa",   "nadi",   "pahad",  "raasta",  "bazar",  "paisa",
      "kapda",   "khet",   "kisan",  "shahar", "makaan",  "darwaza", "khidki",
      "chai",    "doodh",  "sabzi",  "phal",   "mithai",  "tyohar", "mela",
      "pooja",   "mandir", "gali",   "chhat",  "aangan",  "bistar", "kursi",
      "mez",     "diya",   "taara",  "chand",  "suraj",   "badal",  "barish",
      "patta",   "ped",    "ghaas",  "neend"};
  config.reduplicable_lexicon = {
      "bohot",  "jaldi",  "dheere", "thoda",  "alag",   "saath", "roz",
      "kabhi",  "zara",   "khoob",  "baar",   "pal",    "chalte", "karte",
      "hanste", "rote",   "dekhte", "sunte",  "milte",  "bilkul"};
  config.interregnum_lexicon = {"nahi", "matlab", "yaani", "arre",
                                "haan", "bas",    "umm",   "achha"};
  config.other_lexicon = {"ek",  "do",   "teen", "char", "panch", "nau", "das",
                          "bees", "sau", "en",   "si",   "di",    "je",  "pi"};
  return config;
}

std::string_view injection_kind_name(InjectionKind kind) {
  switch (kind) {
    case InjectionKind::Redup: return "redup";
    case InjectionKind::Rep: return "rep";
    case InjectionKind::Other: return "other";
    case InjectionKind::Confusion: return "confusion";
  }
  return "redup";
}

namespace {

void validate(const SynthConfig& config) {
  auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!in_unit(config.p_redup) || !in_unit(config.p_rep) || !in_unit(config.p_other) ||
      !in_unit(config.p_interregnum) || !in_unit(config.p_confusion)) {
    throw InvalidConfig("injection probabilities must be in [0,1]");
  }
  if (config.min_len < 1 || config.max_len < config.min_len) {
    throw InvalidConfig("length range must satisfy 1 <= min <= max");
  }
  if (config.general_lexicon.size() < 4) {
    throw InvalidConfig("general lexicon needs at least 4 words");
  }
  if (config.reduplicable_lexicon.empty() &&
      (config.p_redup > 0.0 || config.p_confusion > 0.0)) {
    throw InvalidConfig("reduplicable lexicon is empty");
  }
  if (config.interregnum_lexicon.empty() &&
      (config.p_confusion > 0.0 || (config.p_rep > 0.0 && config.p_interregnum > 0.0))) {
    throw InvalidConfig("interregnum lexicon is empty");
  }
  if (config.other_lexicon.empty() && config.p_other > 0.0) {
    throw InvalidConfig("number/abbreviation lexicon is empty");
  }

  std::set<std::string> seen;
  std::size_t total = 0;
  for (const auto* lexicon : {&config.general_lexicon, &config.reduplicable_lexicon,
                              &config.interregnum_lexicon, &config.other_lexicon}) {
    for (const std::string& word : *lexicon) seen.insert(word);
    total += lexicon->size();
  }
  if (seen.size() != total) {
    throw InvalidConfig("lexicons must be pairwise disjoint");
  }
}

struct Segment {
  std::vector<std::pair<std::string, Label>> tokens;
  bool carrier = false;  // an untouched single general word
  int injection = -1;    // index into the sentence's injection list
};

// A word from the lexicon that is not yet used by another injection in this
// sentence.
std::string draw_unused(Rng& rng, const std::vector<std::string>& lexicon,
                        std::set<std::string>& used) {
  for (std::size_t attempt = 0; attempt < 1000; ++attempt) {
    const std::string& word = lexicon[rng.below(lexicon.size())];
    if (used.insert(word).second) return word;
  }
  throw InvalidConfig("lexicon too small for the requested injections");
}

Sentence flatten(const std::vector<Segment>& segments, std::vector<Injection>& injections,
                 std::string id, LanguageTag language) {
  Sentence sentence;
  sentence.id = std::move(id);
  sentence.language = language;
  for (const Segment& segment : segments) {
    for (const auto& [word, label] : segment.tokens) {
      if (segment.injection >= 0) {
        injections[static_cast<std::size_t>(segment.injection)].indices.push_back(
            sentence.tokens.size());
      }
      Token token;
      token.surface = word;
      token.normalized = normalize_word(word);
      token.index = sentence.tokens.size();
      sentence.tokens.push_back(std::move(token));
      sentence.labels.push_back(label);
    }
  }
  return sentence;
}

SentenceTrace generate_sentence(const SynthConfig& config, std::size_t index,
                                Sentence& out) {
  Rng rng(derive_seed(config.seed, index));
  SentenceTrace trace;
  trace.sentence_id = "synth-" + std::to_string(index);

  // Carrier sentence: general words, each distinct from the previous three
  // so the only duplications within the detector window are injected ones.
  const std::size_t length =
      config.min_len + rng.below(config.max_len - config.min_len + 1);
  std::vector<Segment> segments;
  segments.reserve(length + 4);
  std::vector<std::string> recent;
  for (std::size_t i = 0; i < length; ++i) {
    std::string word;
    do {
      word = config.general_lexicon[rng.below(config.general_lexicon.size())];
    } while (std::find(recent.begin(), recent.end(), word) != recent.end());
    recent.push_back(word);
    if (recent.size() > 3) recent.erase(recent.begin());
    Segment segment;
    segment.tokens = {{word, Label::O}};
    segment.carrier = true;
    segments.push_back(std::move(segment));
  }

  const bool fire_redup = rng.bernoulli(config.p_redup);
  const bool fire_rep = rng.bernoulli(config.p_rep);
  const bool fire_other = rng.bernoulli(config.p_other);
  const bool fire_confusion = rng.bernoulli(config.p_confusion);

  std::set<std::string> used;
  std::vector<Injection>& injections = trace.injections;

  if (fire_rep) {
    // Repetition doubles a word that is already in the utterance.
    std::vector<std::size_t> carriers;
    for (std::size_t i = 0; i < segments.size(); ++i) {
      if (segments[i].carrier) carriers.push_back(i);
    }
    const std::size_t target = carriers[rng.below(carriers.size())];
    Segment& segment = segments[target];
    const std::string word = segment.tokens[0].first;
    used.insert(word);
    segment.carrier = false;
    segment.injection = static_cast<int>(injections.size());
    segment.tokens = {{word, Label::Rep}};
    if (rng.bernoulli(config.p_interregnum)) {
      segment.tokens.push_back(
          {draw_unused(rng, config.interregnum_lexicon, used), Label::O});
    }
    segment.tokens.push_back({word, Label::Rep});
    injections.push_back({InjectionKind::Rep, {}});
  }

  auto insert_segment = [&](Segment segment) {
    const std::size_t slot = rng.below(segments.size() + 1);
    segments.insert(segments.begin() + static_cast<std::ptrdiff_t>(slot),
                    std::move(segment));
  };

  if (fire_redup) {
    const std::string word = draw_unused(rng, config.reduplicable_lexicon, used);
    Segment segment;
    segment.injection = static_cast<int>(injections.size());
    segment.tokens = {{word, Label::Redup}, {word, Label::Redup}};
    injections.push_back({InjectionKind::Redup, {}});
    insert_segment(std::move(segment));
  }

  if (fire_other) {
    const std::string word = draw_unused(rng, config.other_lexicon, used);
    Segment segment;
    segment.injection = static_cast<int>(injections.size());
    segment.tokens = {{word, Label::Other}, {word, Label::Other}};
    injections.push_back({InjectionKind::Other, {}});
    insert_segment(std::move(segment));
  }

  if (fire_confusion) {
    // "w INT w w": a false start repaired into a reduplicated pair. The
    // shared middle copy ends up with the reduplication label; spans are
    // painted left to right and one token carries one label.
    const std::string word = draw_unused(rng, config.reduplicable_lexicon, used);
    const std::string filler = draw_unused(rng, config.interregnum_lexicon, used);
    Segment segment;
    segment.injection = static_cast<int>(injections.size());
    segment.tokens = {{word, Label::Rep},
                      {filler, Label::O},
                      {word, Label::Redup},
                      {word, Label::Redup}};
    injections.push_back({InjectionKind::Confusion, {}});
    insert_segment(std::move(segment));
  }

  out = flatten(segments, injections, trace.sentence_id, config.language);
  return trace;
}

}  // namespace

SynthResult generate_corpus(const SynthConfig& config) {
  validate(config);

  std::vector<Sentence> sentences(config.n_sentences);
  GenerationTrace trace;
  trace.sentences.reserve(config.n_sentences);
  for (std::size_t i = 0; i < config.n_sentences; ++i) {
    trace.sentences.push_back(generate_sentence(config, i, sentences[i]));
  }

  SynthResult result;
  result.corpus = LabeledCorpus(std::move(sentences));
  result.trace = std::move(trace);
  return result;
}

std::vector<ExpectedCount> expected_counts(const SynthConfig& config) {
  validate(config);
  const double n = static_cast<double>(config.n_sentences);
  auto var = [](double p) { return p * (1.0 - p); };

  std::vector<ExpectedCount> expected(3);
  // Reduplication: 2 tokens per redup firing, 2 per confusion chain.
  expected[0].label = Label::Redup;
  expected[0].expected = n * (2.0 * config.p_redup + 2.0 * config.p_confusion);
  expected[0].stddev =
      std::sqrt(n * (4.0 * var(config.p_redup) + 4.0 * var(config.p_confusion)));
  // Repetition: 2 tokens per rep firing, 1 (the false start) per chain.
  expected[1].label = Label::Rep;
  expected[1].expected = n * (2.0 * config.p_rep + config.p_confusion);
  expected[1].stddev =
      std::sqrt(n * (4.0 * var(config.p_rep) + var(config.p_confusion)));
  // Other: 2 tokens per firing.
  expected[2].label = Label::Other;
  expected[2].expected = n * 2.0 * config.p_other;
  expected[2].stddev = std::sqrt(n * 4.0 * var(config.p_other));
  return expected;
}

std::string write_trace(const GenerationTrace& trace) {
  std::string out;
  for (const SentenceTrace& sentence : trace.sentences) {
    for (const Injection& injection : sentence.injections) {
      out += sentence.sentence_id;
      out += '\t';
      out += injection_kind_name(injection.kind);
      out += '\t';
      for (std::size_t i = 0; i < injection.indices.size(); ++i) {
        if (i > 0) out += ',';
        out += std::to_string(injection.indices[i]);
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace redrep
