#pragma once

#include <string_view>

namespace txguard::text {

// Per-transaction simple-text (ST) statistics. Lengths count Unicode scalar
// values of the whitespace-trimmed description.
struct SimpleTextFeatures {
  int desc_length = 0;
  int n_words = 0;
  int longest_word_len = 0;
  int n_lower_words = 0;
  int n_upper_words = 0;
  int n_mixed_words = 0;  // has letters, neither all-upper nor all-lower
  int n_punctuation = 0;
  bool has_special_chars = false;
  bool has_digits = false;
  bool is_empty = true;
  // Whitespace characters / desc_length; low values flag removed spaces.
  double word_break_proportion = 0.0;

  bool operator==(const SimpleTextFeatures&) const = default;
};

SimpleTextFeatures extract_simple_text(std::string_view description);

}  // namespace txguard::text
