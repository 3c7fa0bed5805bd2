#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <unordered_map>

#include "txguard/ets/scores.hpp"

namespace txguard::ets {

using SentimentLexicon = std::unordered_map<std::string, double>;  // token -> valence in [-4, 4]
using CategoryLexicon = std::unordered_map<std::string, double>;   // token -> weight in (0, 1]
using ToxicityLexicons = std::array<CategoryLexicon, kNumToxicity>;
using EmotionLexicon = std::unordered_map<std::string, Emotion>;

struct Lexicons {
  SentimentLexicon sentiment;
  ToxicityLexicons toxicity;
  EmotionLexicon emotion;

  // Order-independent content hash, used to version the reference backend.
  std::string fingerprint() const;
};

// TSV readers. Blank lines and lines starting with '#' are ignored; tokens
// are lowercased on load. Malformed rows throw ValidationError with the line.
SentimentLexicon read_sentiment_lexicon(std::istream& in);   // token<TAB>valence
ToxicityLexicons read_toxicity_lexicons(std::istream& in);   // token<TAB>category<TAB>weight
EmotionLexicon read_emotion_lexicon(std::istream& in);       // token<TAB>emotion

// Built-in reference lexicons (data/lexicons/*.tsv compiled in).
const Lexicons& default_lexicons();

// Loads sentiment.tsv, toxicity.tsv and emotion.tsv from `dir`; a missing
// file falls back to the built-in table for that part.
Lexicons load_lexicons(const std::filesystem::path& dir);

}  // namespace txguard::ets
