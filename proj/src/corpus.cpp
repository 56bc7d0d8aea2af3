#include "redrep/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "redrep/errors.hpp"
#include "redrep/rng.hpp"
#include "redrep/textnorm.hpp"

namespace redrep {

std::string_view label_name(Label label) {
  switch (label) {
    case Label::Redup: return "reduplication";
    case Label::Rep: return "repetition";
    case Label::Other: return "other";
    case Label::O: return "O";
  }
  return "O";
}

Label label_from_name(std::string_view name) {
  if (name == "reduplication") return Label::Redup;
  if (name == "repetition") return Label::Rep;
  if (name == "other") return Label::Other;
  if (name == "O") return Label::O;
  throw UnknownLabel("\"" + std::string(name) + "\"");
}

std::string_view language_name(LanguageTag tag) {
  switch (tag) {
    case LanguageTag::Hi: return "hi";
    case LanguageTag::Te: return "te";
    case LanguageTag::Mr: return "mr";
    case LanguageTag::Other: return "other";
  }
  return "other";
}

LanguageTag language_from_name(std::string_view name) {
  if (name == "hi") return LanguageTag::Hi;
  if (name == "te") return LanguageTag::Te;
  if (name == "mr") return LanguageTag::Mr;
  return LanguageTag::Other;
}

CorpusStats recount_stats(const std::vector<Sentence>& sentences) {
  CorpusStats stats;
  for (const Sentence& sentence : sentences) {
    ++stats.sentence_count;
    ++stats.language_counts[static_cast<std::size_t>(sentence.language)];
    stats.token_count += static_cast<std::int64_t>(sentence.tokens.size());
    for (Label label : sentence.labels) {
      ++stats.label_counts[static_cast<std::size_t>(label)];
    }
  }
  return stats;
}

LabeledCorpus::LabeledCorpus(std::vector<Sentence> sentences)
    : sentences_(std::move(sentences)), stats_(recount_stats(sentences_)) {}

bool LabeledCorpus::fully_labeled() const {
  return std::all_of(sentences_.begin(), sentences_.end(),
                     [](const Sentence& s) { return s.has_labels(); });
}

bool corpus_equal(const LabeledCorpus& a, const LabeledCorpus& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Sentence& x = a.sentences()[i];
    const Sentence& y = b.sentences()[i];
    if (x.id != y.id || x.language != y.language || x.labels != y.labels) return false;
    if (x.tokens.size() != y.tokens.size()) return false;
    for (std::size_t t = 0; t < x.tokens.size(); ++t) {
      if (x.tokens[t].surface != y.tokens[t].surface ||
          x.tokens[t].normalized != y.tokens[t].normalized ||
          x.tokens[t].index != y.tokens[t].index) {
        return false;
      }
    }
  }
  return true;
}

namespace {

Token make_token(std::string surface, std::size_t index) {
  Token token;
  token.normalized = normalize_word(surface);
  token.surface = std::move(surface);
  token.index = index;
  return token;
}

struct BlockState {
  Sentence sentence;
  std::size_t labeled_lines = 0;
  std::size_t total_lines = 0;
};

void flush_block(BlockState& block, std::vector<Sentence>& out, std::size_t line_no) {
  if (block.total_lines == 0) {
    block = BlockState{};
    return;
  }
  if (block.labeled_lines != 0 && block.labeled_lines != block.total_lines) {
    throw MixedLabeling("sentence ending at line " + std::to_string(line_no) +
                        " mixes labeled and bare tokens");
  }
  if (block.labeled_lines == 0) block.sentence.labels.clear();
  if (block.sentence.id.empty()) {
    block.sentence.id = "s" + std::to_string(out.size());
  }
  out.push_back(std::move(block.sentence));
  block = BlockState{};
}

}  // namespace

LabeledCorpus parse_conll(std::string_view text) {
  std::vector<Sentence> sentences;
  BlockState block;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = (eol == std::string_view::npos)
                                ? text.substr(pos)
                                : text.substr(pos, eol - pos);
    const bool last = (eol == std::string_view::npos);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line.empty()) {
      flush_block(block, sentences, line_no);
    } else if (line.starts_with("# ")) {
      // "# key = value" comments; anything else after "# " is ignored.
      std::string_view body = line.substr(2);
      const std::size_t eq = body.find('=');
      if (eq != std::string_view::npos) {
        auto trim = [](std::string_view v) {
          while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
          while (!v.empty() && (v.back() == ' ' || v.back() == '\t')) v.remove_suffix(1);
          return v;
        };
        const std::string_view key = trim(body.substr(0, eq));
        const std::string_view value = trim(body.substr(eq + 1));
        if (key == "id") block.sentence.id = std::string(value);
        if (key == "lang") block.sentence.language = language_from_name(value);
      }
    } else {
      const std::size_t tab = line.find('\t');
      std::string_view surface = line.substr(0, tab == std::string_view::npos ? line.size() : tab);
      if (surface.empty()) {
        throw MalformedLine("line " + std::to_string(line_no) + ": empty token");
      }
      if (surface.find(' ') != std::string_view::npos) {
        throw MalformedLine("line " + std::to_string(line_no) + ": token contains whitespace");
      }
      if (tab != std::string_view::npos) {
        std::string_view rest = line.substr(tab + 1);
        if (rest.empty() || rest.find('\t') != std::string_view::npos) {
          throw MalformedLine("line " + std::to_string(line_no) + ": expected token<TAB>label");
        }
        block.sentence.labels.push_back(label_from_name(rest));
        ++block.labeled_lines;
      }
      block.sentence.tokens.push_back(make_token(std::string(surface), block.total_lines));
      ++block.total_lines;
    }

    if (last) break;
    pos = eol + 1;
  }
  flush_block(block, sentences, line_no);

  if (sentences.empty()) throw EmptyDocument("no sentences in input");
  return LabeledCorpus(std::move(sentences));
}

std::string write_conll(const LabeledCorpus& corpus) {
  std::string out;
  for (const Sentence& sentence : corpus.sentences()) {
    out += "# id = ";
    out += sentence.id;
    out += "\n# lang = ";
    out += language_name(sentence.language);
    out += '\n';
    for (std::size_t t = 0; t < sentence.tokens.size(); ++t) {
      out += sentence.tokens[t].surface;
      if (sentence.has_labels()) {
        out += '\t';
        out += label_name(sentence.labels[t]);
      }
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

LabeledCorpus read_conll_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_conll(buffer.str());
}

void write_conll_file(const LabeledCorpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << write_conll(corpus);
  if (!out) throw Error("failed writing " + path);
}

std::vector<Token> normalize_sentence(const std::vector<std::string>& raw) {
  std::vector<Token> tokens;
  tokens.reserve(raw.size());
  for (const std::string& surface : raw) {
    std::string normalized = normalize_word(surface);
    if (normalized.empty()) continue;
    Token token;
    token.surface = surface;
    token.normalized = std::move(normalized);
    token.index = tokens.size();
    tokens.push_back(std::move(token));
  }
  return tokens;
}

namespace {

// Signature: bitmask over the non-O classes present in a sentence.
unsigned signature_of(const Sentence& sentence) {
  unsigned mask = 0;
  for (Label label : sentence.labels) {
    if (label != Label::O) mask |= 1u << static_cast<unsigned>(label);
  }
  return mask;
}

// Largest-remainder split of `total` into three parts proportional to ratios.
// Remainder ties go to the earlier split.
std::array<std::size_t, 3> largest_remainder(std::size_t total,
                                             const std::array<double, 3>& ratios) {
  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> remainders{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double exact = ratios[i] * static_cast<double>(total);
    sizes[i] = static_cast<std::size_t>(std::floor(exact));
    remainders[i] = exact - std::floor(exact);
    assigned += sizes[i];
  }
  std::array<std::size_t, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned) {
    ++sizes[order[k % 3]];
  }
  return sizes;
}

}  // namespace

SplitResult stratified_split(const LabeledCorpus& corpus, const SplitSpec& spec) {
  if (!corpus.fully_labeled()) {
    throw UnlabeledCorpus("stratified_split requires gold labels on every sentence");
  }
  const double sum = spec.train_ratio + spec.val_ratio + spec.test_ratio;
  if (spec.train_ratio < 0 || spec.val_ratio < 0 || spec.test_ratio < 0 ||
      std::abs(sum - 1.0) > 1e-9) {
    throw InvalidConfig("split ratios must be non-negative and sum to 1");
  }

  const std::array<double, 3> ratios = {spec.train_ratio, spec.val_ratio, spec.test_ratio};

  // Bucket sentence indices by signature. With stratify off there is a
  // single bucket.
  std::array<std::vector<std::size_t>, 8> buckets;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const unsigned sig = spec.stratify ? signature_of(corpus.sentences()[i]) : 0;
    buckets[sig].push_back(i);
  }

  std::array<std::vector<std::size_t>, 3> membership;
  for (unsigned sig = 0; sig < 8; ++sig) {
    std::vector<std::size_t>& bucket = buckets[sig];
    if (bucket.empty()) continue;
    Rng rng(derive_seed(spec.seed, sig));
    rng.shuffle(bucket);
    const std::array<std::size_t, 3> sizes = largest_remainder(bucket.size(), ratios);
    std::size_t cursor = 0;
    for (std::size_t part = 0; part < 3; ++part) {
      for (std::size_t k = 0; k < sizes[part]; ++k) {
        membership[part].push_back(bucket[cursor++]);
      }
    }
  }

  SplitResult result;
  LabeledCorpus* outputs[3] = {&result.train, &result.validation, &result.test};
  for (std::size_t part = 0; part < 3; ++part) {
    std::sort(membership[part].begin(), membership[part].end());
    std::vector<Sentence> sentences;
    sentences.reserve(membership[part].size());
    for (std::size_t index : membership[part]) {
      sentences.push_back(corpus.sentences()[index]);
    }
    *outputs[part] = LabeledCorpus(std::move(sentences));
  }
  return result;
}

VerificationReport verify_statistics(const LabeledCorpus& corpus,
                                     const std::vector<StatExpectation>& expected) {
  const CorpusStats& stats = corpus.stats();
  VerificationReport report;
  for (const StatExpectation& expectation : expected) {
    VerificationRow row;
    row.name = expectation.name;
    row.expected = expectation.expected;
    row.observed = -1;
    if (expectation.name == "sentences") {
      row.observed = stats.sentence_count;
    } else if (expectation.name == "words") {
      row.observed = stats.token_count;
    } else if (expectation.name.starts_with("label.")) {
      const Label label = label_from_name(expectation.name.substr(6));
      row.observed = stats.label_counts[static_cast<std::size_t>(label)];
    } else if (expectation.name.starts_with("lang.")) {
      const LanguageTag tag = language_from_name(expectation.name.substr(5));
      row.observed = stats.language_counts[static_cast<std::size_t>(tag)];
    }
    row.pass = (row.observed == row.expected);
    report.pass = report.pass && row.pass;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace redrep
