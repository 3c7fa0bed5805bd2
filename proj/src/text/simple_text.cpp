#include "txguard/text/simple_text.hpp"

#include <algorithm>

#include "txguard/text/unicode.hpp"

namespace txguard::text {

SimpleTextFeatures extract_simple_text(std::string_view description) {
  SimpleTextFeatures f;
  const std::u32string decoded = decode_utf8(description);
  const std::u32string_view trimmed = trim_whitespace(decoded);
  if (trimmed.empty()) return f;

  f.is_empty = false;
  f.desc_length = static_cast<int>(trimmed.size());

  int spaces = 0;
  for (char32_t c : trimmed) {
    if (is_whitespace(c)) {
      ++spaces;
      continue;
    }
    if (is_punctuation(c)) ++f.n_punctuation;
    if (is_digit(c)) f.has_digits = true;
    if (!is_alphanumeric(c) && !is_ascii_punctuation(c)) f.has_special_chars = true;
  }
  f.word_break_proportion = static_cast<double>(spaces) / f.desc_length;

  for (std::u32string_view word : split_words(trimmed)) {
    ++f.n_words;
    f.longest_word_len = std::max(f.longest_word_len, static_cast<int>(word.size()));
    int letters = 0, upper = 0, lower = 0;
    for (char32_t c : word) {
      if (!is_letter(c)) continue;
      ++letters;
      if (is_upper(c)) ++upper;
      if (is_lower(c)) ++lower;
    }
    if (letters == 0) continue;
    if (upper == letters) {
      ++f.n_upper_words;
    } else if (lower == letters) {
      ++f.n_lower_words;
    } else {
      ++f.n_mixed_words;
    }
  }
  return f;
}

}  // namespace txguard::text
