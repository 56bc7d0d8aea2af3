#include <doctest.h>

#include "redrep/textnorm.hpp"

using namespace redrep;

// Expected forms computed independently with Python's unicodedata (UCD 13)
// and frozen here.
TEST_SUITE("textnorm") {

TEST_CASE("nfc composes and decomposes per the UCD") {
  // e + combining acute -> precomposed e-acute
  CHECK(nfc("é") == "é");
  // Telugu vowel sign AI from its two-part decomposition
  CHECK(nfc("ై") == "ై");
  // Devanagari QA is a composition exclusion: the precomposed character
  // decomposes and the decomposed sequence stays put.
  CHECK(nfc("क़") == "क़");
  CHECK(nfc("क़") == "क़");
  // Canonical reordering lets the acute compose across a lower-ccc mark.
  CHECK(nfc("á̖") == "á̖");
  // Already-NFC Devanagari text is untouched.
  const std::string shukriya = "शुक्रिया";
  CHECK(nfc(shukriya) == shukriya);
}

TEST_CASE("nfc replaces ill-formed bytes instead of failing") {
  const std::string bad = "ab\xFF\xFE";
  const std::string out = nfc(bad);
  CHECK(out.substr(0, 2) == "ab");
  CHECK(out.size() > 2);  // U+FFFD substitutions
}

TEST_CASE("punctuation classification covers danda") {
  CHECK(is_punctuation(U'।'));  // danda
  CHECK(is_punctuation(U'॥'));  // double danda
  CHECK(is_punctuation(U'?'));
  CHECK(is_punctuation(U'-'));
  CHECK(is_punctuation(U'’'));  // right single quote (Pf)
  CHECK_FALSE(is_punctuation(U'क'));
  CHECK_FALSE(is_punctuation(U'a'));
  CHECK_FALSE(is_punctuation(U'5'));
}

TEST_CASE("normalize_word strips boundary punctuation only") {
  CHECK(normalize_word("शुक्रिया।") ==
        "शुक्रिया");
  CHECK(normalize_word("bohot") == "bohot");
  CHECK(normalize_word("\"quoted!\"") == "quoted");
  CHECK(normalize_word("ja-raha") == "ja-raha");  // interior hyphen survives
  CHECK(normalize_word("it's") == "it's");
  CHECK(normalize_word("।") == "");
  CHECK(normalize_word("?!?") == "");
  CHECK(normalize_word("") == "");
}

TEST_CASE("normalize_word is idempotent") {
  const char* samples[] = {"क़।", "é!", "--x--", "á̖",
                           "क़", "hello", "॥॥"};
  for (const char* sample : samples) {
    const std::string once = normalize_word(sample);
    CHECK(normalize_word(once) == once);
  }
}

}  // TEST_SUITE
