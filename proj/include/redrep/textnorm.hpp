// Word normalization: Unicode NFC plus stripping of leading/trailing
// punctuation code points (danda included). Interior hyphens and apostrophes
// survive because the corpus is whitespace-tokenized.

#ifndef REDREP_TEXTNORM_HPP
#define REDREP_TEXTNORM_HPP

#include <string>
#include <string_view>

namespace redrep {

// NFC-normalize a UTF-8 string. Invalid byte sequences are replaced with
// U+FFFD rather than rejected; transcripts are messy.
std::string nfc(std::string_view utf8);

// True when the code point has Unicode general category P*.
bool is_punctuation(char32_t cp);

// NFC, then strip leading/trailing punctuation code points. May return "".
std::string normalize_word(std::string_view utf8);

}  // namespace redrep

#endif  // REDREP_TEXTNORM_HPP
