#include <doctest.h>

#include <random>

#include "txguard/text/simple_text.hpp"
#include "txguard/text/unicode.hpp"

using namespace txguard::text;

TEST_SUITE("text_features") {
  TEST_CASE("empty description") {
    auto f = extract_simple_text("");
    CHECK(f.is_empty);
    CHECK(f.desc_length == 0);
    CHECK(f.n_words == 0);
    CHECK(f.word_break_proportion == 0.0);
    CHECK(extract_simple_text("   \t ") == f);
  }

  TEST_CASE("obfuscated blocked word") {
    // "U.N.B.L.O.C.K" is 13 characters, so the string has 13+1+2+1+3 = 20.
    auto f = extract_simple_text("U.N.B.L.O.C.K me NOW");
    CHECK(f.desc_length == 20);
    CHECK(f.n_words == 3);
    CHECK(f.longest_word_len == 13);
    CHECK(f.n_upper_words == 2);
    CHECK(f.n_lower_words == 1);
    CHECK(f.n_mixed_words == 0);
    CHECK(f.n_punctuation == 6);
    CHECK(f.word_break_proportion == doctest::Approx(2.0 / 20.0).epsilon(1e-15));
    CHECK_FALSE(f.has_special_chars);
    CHECK_FALSE(f.is_empty);
  }

  TEST_CASE("digits join no case class") {
    auto f = extract_simple_text("pay rent 450");
    CHECK(f.n_words == 3);
    CHECK(f.has_digits);
    CHECK(f.n_lower_words == 2);
    CHECK(f.n_upper_words + f.n_mixed_words == 0);
  }

  TEST_CASE("mixed case, special characters, unicode lengths") {
    auto f = extract_simple_text("  Héllo wORLD 😀 ");
    CHECK(f.desc_length == 13);  // trimmed, counted in code points
    CHECK(f.n_mixed_words == 2);
    CHECK(f.has_special_chars);  // emoji is neither alphanumeric nor ASCII punctuation
    CHECK(f.word_break_proportion == doctest::Approx(2.0 / 13.0));
  }

  TEST_CASE("unicode punctuation counts; only ASCII punctuation is exempt from special") {
    auto f = extract_simple_text("hi… «there»!");
    CHECK(f.n_punctuation == 4);
    CHECK(f.has_special_chars);
    CHECK_FALSE(extract_simple_text("hi!! (ok?) #1").has_special_chars);
  }

  TEST_CASE("properties on random strings") {
    std::mt19937 rng(3);
    const std::u32string alphabet = U"aZé.!- 1\t😀Ωx";
    for (int iter = 0; iter < 500; ++iter) {
      std::u32string s;
      const int len = static_cast<int>(rng() % 20);
      for (int i = 0; i < len; ++i) s.push_back(alphabet[rng() % alphabet.size()]);
      const std::string utf8 = encode_utf8(s);
      auto f = extract_simple_text(utf8);
      CHECK(f.n_lower_words + f.n_upper_words + f.n_mixed_words <= f.n_words);
      CHECK(f.is_empty == (f.desc_length == 0));
      CHECK(f.word_break_proportion >= 0.0);
      CHECK(f.word_break_proportion <= 1.0);
      // Trailing whitespace never changes the result.
      CHECK(extract_simple_text(utf8 + "  ") == f);
      // Appending a non-space character adds exactly one to the length and
      // leaves the whitespace count alone.
      auto g = extract_simple_text(utf8 + "q");
      const double ws_f = f.word_break_proportion * f.desc_length;
      const double ws_g = g.word_break_proportion * g.desc_length;
      const auto trimmed = trim_whitespace(s);
      if (!trimmed.empty() && trimmed.size() == s.size()) {
        CHECK(g.desc_length == f.desc_length + 1);
        CHECK(ws_g == doctest::Approx(ws_f));
      }
    }
  }

  TEST_CASE("tokenizers") {
    CHECK(lexicon_tokens("Good, DAY!") == std::vector<std::string>{"good", "day"});
    CHECK(depunctuated_tokens("u.n.b.l.o.c.k me") == std::vector<std::string>{"unblock", "me"});
    CHECK(depunctuated_tokens("un-block") == std::vector<std::string>{"unblock"});
    CHECK(nfc_normalize("e\xCC\x81") == "\xC3\xA9");
    CHECK(char_count("\xC3\xA9" "a") == 2);
  }
}
