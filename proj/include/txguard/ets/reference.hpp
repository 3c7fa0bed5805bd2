#pragma once

#include <string_view>

#include "txguard/ets/backend.hpp"
#include "txguard/ets/lexicon.hpp"

namespace txguard::ets {

// Valence-sum sentiment: compound = S / sqrt(S^2 + 15) over matched token
// valences S; positive/negative mass is (|v| + 1) per matched token and each
// unmatched token adds 1 to neutral. Empty text scores all zeros.
SentimentScores score_sentiment_reference(std::string_view description, const SentimentLexicon& lexicon);

// Noisy-or per category over de-punctuated lowercase tokens:
// score = 1 - prod(1 - weight) over matches.
ToxicityScores score_toxicity_reference(std::string_view description, const ToxicityLexicons& lexicons);

// Token-count distribution over the seven classes; unmatched tokens count
// as neutral and empty text is fully neutral.
EmotionScores score_emotion_reference(std::string_view description, const EmotionLexicon& lexicon);

class ReferenceBackend final : public ScorerBackend {
 public:
  explicit ReferenceBackend(Lexicons lexicons);
  ReferenceBackend() : ReferenceBackend(default_lexicons()) {}

  const BackendInfo& info() const override { return info_; }
  std::vector<EtsScores> score(std::span<const std::string> texts) override;

  EtsScores score_one(std::string_view text) const;

 private:
  Lexicons lexicons_;
  BackendInfo info_;
};

}  // namespace txguard::ets
