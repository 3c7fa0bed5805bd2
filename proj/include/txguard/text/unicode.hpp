#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace txguard::text {

// Decodes UTF-8 into scalar values. Throws ValidationError on ill-formed input.
std::u32string decode_utf8(std::string_view utf8);
std::string encode_utf8(std::u32string_view code_points);

std::string nfc_normalize(std::string_view utf8);
std::string to_lower(std::string_view utf8);

std::size_t char_count(std::string_view utf8);
// First `max_chars` scalar values of `utf8`.
std::string truncate_chars(std::string_view utf8, std::size_t max_chars);

bool is_whitespace(char32_t c);
bool is_letter(char32_t c);
bool is_upper(char32_t c);
bool is_lower(char32_t c);
bool is_digit(char32_t c);
bool is_alphanumeric(char32_t c);
// Unicode general category P*.
bool is_punctuation(char32_t c);
// The 32 printable ASCII punctuation/symbol characters matched by C ispunct.
bool is_ascii_punctuation(char32_t c);

std::u32string_view trim_whitespace(std::u32string_view text);
// Splits on runs of whitespace; no empty words.
std::vector<std::u32string_view> split_words(std::u32string_view text);

// Lowercased words with leading/trailing punctuation removed. Words that are
// only punctuation are dropped.
std::vector<std::string> lexicon_tokens(std::string_view utf8);
// Lowercased words with every punctuation character removed, so
// "U.N.B.L.O.C.K" and "un-block" both become "unblock".
std::vector<std::string> depunctuated_tokens(std::string_view utf8);

}  // namespace txguard::text
