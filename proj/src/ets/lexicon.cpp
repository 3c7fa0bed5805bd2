#include "txguard/ets/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>
#include <vector>

#include "txguard/text/unicode.hpp"
#include "txguard/util/csv.hpp"
#include "txguard/util/error.hpp"
#include "txguard/util/hash.hpp"

namespace txguard::ets {

// Generated from data/lexicons/*.tsv at configure time.
extern const char* const kDefaultSentimentTsv;
extern const char* const kDefaultToxicityTsv;
extern const char* const kDefaultEmotionTsv;

namespace {

template <typename OnRow>
void for_each_row(std::istream& in, std::size_t expected_fields, std::string_view what, OnRow on_row) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != expected_fields || fields[0].empty())
      throw ValidationError(std::string(what) + " lexicon line " + std::to_string(line_no) + ": expected " +
                            std::to_string(expected_fields) + " tab-separated fields");
    fields[0] = text::to_lower(fields[0]);
    try {
      on_row(fields);
    } catch (const std::invalid_argument& e) {
      throw ValidationError(std::string(what) + " lexicon line " + std::to_string(line_no) + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError(std::string(what) + " lexicon line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

}  // namespace

SentimentLexicon read_sentiment_lexicon(std::istream& in) {
  SentimentLexicon lex;
  for_each_row(in, 2, "sentiment", [&](const std::vector<std::string>& f) {
    double v = util::parse_double(f[1]);
    if (v < -4.0 || v > 4.0) throw ValidationError("valence outside [-4, 4]");
    lex[f[0]] = v;
  });
  return lex;
}

ToxicityLexicons read_toxicity_lexicons(std::istream& in) {
  ToxicityLexicons lex;
  for_each_row(in, 3, "toxicity", [&](const std::vector<std::string>& f) {
    auto category = parse_toxicity_category(f[1]);
    double w = util::parse_double(f[2]);
    if (!(w > 0.0 && w <= 1.0)) throw ValidationError("weight outside (0, 1]");
    lex[static_cast<std::size_t>(category)][f[0]] = w;
  });
  return lex;
}

EmotionLexicon read_emotion_lexicon(std::istream& in) {
  EmotionLexicon lex;
  for_each_row(in, 2, "emotion", [&](const std::vector<std::string>& f) { lex[f[0]] = parse_emotion(f[1]); });
  return lex;
}

std::string Lexicons::fingerprint() const {
  std::vector<std::string> lines;
  for (const auto& [token, v] : sentiment) lines.push_back("s\t" + token + "\t" + util::format_double(v));
  for (std::size_t c = 0; c < kNumToxicity; ++c)
    for (const auto& [token, w] : toxicity[c])
      lines.push_back("t\t" + token + "\t" + std::string(kToxicityNames[c]) + "\t" + util::format_double(w));
  for (const auto& [token, e] : emotion)
    lines.push_back("e\t" + token + "\t" + std::string(kEmotionNames[static_cast<std::size_t>(e)]));
  std::sort(lines.begin(), lines.end());
  util::Fnv1a64 h;
  for (const auto& l : lines) h.update(l).separator();
  return util::to_hex(h.digest());
}

const Lexicons& default_lexicons() {
  static const Lexicons lexicons = [] {
    Lexicons l;
    std::istringstream s(kDefaultSentimentTsv), t(kDefaultToxicityTsv), e(kDefaultEmotionTsv);
    l.sentiment = read_sentiment_lexicon(s);
    l.toxicity = read_toxicity_lexicons(t);
    l.emotion = read_emotion_lexicon(e);
    return l;
  }();
  return lexicons;
}

Lexicons load_lexicons(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("lexicon directory not found: " + dir.string());
  Lexicons l = default_lexicons();
  if (std::ifstream in{dir / "sentiment.tsv"}) l.sentiment = read_sentiment_lexicon(in);
  if (std::ifstream in{dir / "toxicity.tsv"}) l.toxicity = read_toxicity_lexicons(in);
  if (std::ifstream in{dir / "emotion.tsv"}) l.emotion = read_emotion_lexicon(in);
  return l;
}

}  // namespace txguard::ets
