#include "redrep/textnorm.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <stdexcept>

namespace redrep {

namespace {

const icu::Normalizer2& nfc_instance() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || norm == nullptr) {
    throw std::runtime_error("ICU NFC normalizer unavailable");
  }
  return *norm;
}

}  // namespace

std::string nfc(std::string_view utf8) {
  // fromUTF8 substitutes U+FFFD for ill-formed sequences.
  icu::UnicodeString input = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString normalized = nfc_instance().normalize(input, status);
  if (U_FAILURE(status)) {
    throw std::runtime_error("ICU NFC normalization failed");
  }
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

bool is_punctuation(char32_t cp) {
  return u_ispunct(static_cast<UChar32>(cp)) != 0;
}

std::string normalize_word(std::string_view utf8) {
  const std::string composed = nfc(utf8);
  const char* data = composed.data();
  const int32_t length = static_cast<int32_t>(composed.size());

  int32_t begin = 0;
  while (begin < length) {
    int32_t i = begin;
    UChar32 cp;
    U8_NEXT(data, i, length, cp);
    if (cp < 0 || !u_ispunct(cp)) break;
    begin = i;
  }
  int32_t end = length;
  while (end > begin) {
    int32_t i = end;
    UChar32 cp;
    U8_PREV(data, begin, i, cp);
    if (cp < 0 || !u_ispunct(cp)) break;
    end = i;
  }
  return composed.substr(static_cast<std::size_t>(begin),
                         static_cast<std::size_t>(end - begin));
}

}  // namespace redrep
