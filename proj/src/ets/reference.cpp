#include "txguard/ets/reference.hpp"

#include <cmath>

#include "txguard/text/unicode.hpp"

namespace txguard::ets {

namespace {

// Normalization constant of the valence-sum compound score.
constexpr double kCompoundAlpha = 15.0;

}  // namespace

SentimentScores score_sentiment_reference(std::string_view description, const SentimentLexicon& lexicon) {
  SentimentScores out;
  const auto tokens = text::lexicon_tokens(description);
  if (tokens.empty()) return out;

  double sum = 0.0, pos_raw = 0.0, neg_raw = 0.0, neu_raw = 0.0;
  for (const auto& token : tokens) {
    auto it = lexicon.find(token);
    if (it == lexicon.end()) {
      neu_raw += 1.0;
      continue;
    }
    const double v = it->second;
    sum += v;
    if (v > 0) {
      pos_raw += v + 1.0;
    } else if (v < 0) {
      neg_raw += -v + 1.0;
    } else {
      neu_raw += 1.0;
    }
  }
  const double total = pos_raw + neg_raw + neu_raw;
  out.compound = sum / std::sqrt(sum * sum + kCompoundAlpha);
  out.positive = pos_raw / total;
  out.negative = neg_raw / total;
  out.neutral = neu_raw / total;
  return out;
}

ToxicityScores score_toxicity_reference(std::string_view description, const ToxicityLexicons& lexicons) {
  ToxicityScores out;
  const auto tokens = text::depunctuated_tokens(description);
  for (std::size_t c = 0; c < kNumToxicity; ++c) {
    double survive = 1.0;
    bool matched = false;
    for (const auto& token : tokens) {
      auto it = lexicons[c].find(token);
      if (it == lexicons[c].end()) continue;
      survive *= 1.0 - it->second;
      matched = true;
    }
    out.values[c] = matched ? 1.0 - survive : 0.0;
  }
  return out;
}

EmotionScores score_emotion_reference(std::string_view description, const EmotionLexicon& lexicon) {
  EmotionScores out;
  const auto tokens = text::lexicon_tokens(description);
  if (tokens.empty()) {
    out[Emotion::kNeutral] = 1.0;
    return out;
  }
  std::array<std::size_t, kNumEmotion> counts{};
  for (const auto& token : tokens) {
    auto it = lexicon.find(token);
    ++counts[static_cast<std::size_t>(it == lexicon.end() ? Emotion::kNeutral : it->second)];
  }
  const double total = static_cast<double>(tokens.size());
  for (std::size_t i = 0; i < kNumEmotion; ++i) out.values[i] = static_cast<double>(counts[i]) / total;
  return out;
}

ReferenceBackend::ReferenceBackend(Lexicons lexicons) : lexicons_(std::move(lexicons)) {
  info_.name = "reference-lexicon";
  info_.version = "1." + lexicons_.fingerprint();
  info_.deterministic = true;
  info_.notes =
      "lexicon stand-in for pre-trained toxicity/emotion models; identity-bias mitigation not implemented; "
      "emotion output is a distribution over seven classes";
}

EtsScores ReferenceBackend::score_one(std::string_view text) const {
  return {score_toxicity_reference(text, lexicons_.toxicity), score_emotion_reference(text, lexicons_.emotion),
          score_sentiment_reference(text, lexicons_.sentiment)};
}

std::vector<EtsScores> ReferenceBackend::score(std::span<const std::string> texts) {
  std::vector<EtsScores> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(score_one(t));
  return out;
}

}  // namespace txguard::ets
