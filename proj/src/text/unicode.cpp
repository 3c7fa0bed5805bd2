#include "txguard/text/unicode.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "txguard/util/error.hpp"

namespace txguard::text {

std::u32string decode_utf8(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) throw ValidationError("ill-formed UTF-8");
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

std::string encode_utf8(std::u32string_view code_points) {
  std::string out;
  out.reserve(code_points.size());
  for (char32_t c : code_points) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    UBool error = false;
    U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
    if (error) throw ValidationError("invalid code point");
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
  }
  return out;
}

std::string nfc_normalize(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
  icu::UnicodeString source = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  if (nfc->isNormalized(source, status) && U_SUCCESS(status)) return std::string(utf8);
  status = U_ZERO_ERROR;
  icu::UnicodeString normalized = nfc->normalize(source, status);
  if (U_FAILURE(status)) throw ValidationError("NFC normalization failed");
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

std::string to_lower(std::string_view utf8) {
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  s.toLower(icu::Locale::getRoot());
  std::string out;
  s.toUTF8String(out);
  return out;
}

std::size_t char_count(std::string_view utf8) { return decode_utf8(utf8).size(); }

std::string truncate_chars(std::string_view utf8, std::size_t max_chars) {
  std::u32string cps = decode_utf8(utf8);
  if (cps.size() <= max_chars) return std::string(utf8);
  cps.resize(max_chars);
  return encode_utf8(cps);
}

bool is_whitespace(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }
bool is_letter(char32_t c) { return u_isalpha(static_cast<UChar32>(c)); }
bool is_upper(char32_t c) { return u_charType(static_cast<UChar32>(c)) == U_UPPERCASE_LETTER; }
bool is_lower(char32_t c) { return u_charType(static_cast<UChar32>(c)) == U_LOWERCASE_LETTER; }
bool is_digit(char32_t c) { return u_isdigit(static_cast<UChar32>(c)); }
bool is_alphanumeric(char32_t c) { return u_isalnum(static_cast<UChar32>(c)); }
bool is_punctuation(char32_t c) { return u_ispunct(static_cast<UChar32>(c)); }

bool is_ascii_punctuation(char32_t c) {
  return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
         (c >= 0x7B && c <= 0x7E);
}

std::u32string_view trim_whitespace(std::u32string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && is_whitespace(text[begin])) ++begin;
  while (end > begin && is_whitespace(text[end - 1])) --end;
  return text.substr(begin, end - begin);
}

std::vector<std::u32string_view> split_words(std::u32string_view text) {
  std::vector<std::u32string_view> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_whitespace(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_whitespace(text[i])) ++i;
    if (i > start) words.push_back(text.substr(start, i - start));
  }
  return words;
}

namespace {

template <typename Transform>
std::vector<std::string> tokens_with(std::string_view utf8, Transform transform) {
  std::u32string lowered = decode_utf8(to_lower(utf8));
  std::vector<std::string> out;
  for (std::u32string_view word : split_words(lowered)) {
    std::u32string token = transform(word);
    if (!token.empty()) out.push_back(encode_utf8(token));
  }
  return out;
}

}  // namespace

std::vector<std::string> lexicon_tokens(std::string_view utf8) {
  return tokens_with(utf8, [](std::u32string_view word) {
    std::size_t begin = 0;
    std::size_t end = word.size();
    while (begin < end && is_punctuation(word[begin])) ++begin;
    while (end > begin && is_punctuation(word[end - 1])) --end;
    return std::u32string(word.substr(begin, end - begin));
  });
}

std::vector<std::string> depunctuated_tokens(std::string_view utf8) {
  return tokens_with(utf8, [](std::u32string_view word) {
    std::u32string token;
    for (char32_t c : word)
      if (!is_punctuation(c)) token.push_back(c);
    return token;
  });
}

}  // namespace txguard::text
