#pragma once

#include <array>
#include <cstddef>
#include <string_view>

namespace txguard::ets {

enum class ToxicityCategory : std::size_t {
  kToxicity,
  kSevereToxicity,
  kObscene,
  kThreat,
  kInsult,
  kIdentityAttack,
  kSexualExplicit,
};
inline constexpr std::size_t kNumToxicity = 7;
inline constexpr std::array<std::string_view, kNumToxicity> kToxicityNames = {
    "toxicity", "severe_toxicity", "obscene", "threat", "insult", "identity_attack", "sexual_explicit"};

enum class Emotion : std::size_t { kNeutral, kJoy, kSadness, kAnger, kLove, kFear, kSurprise };
inline constexpr std::size_t kNumEmotion = 7;
inline constexpr std::array<std::string_view, kNumEmotion> kEmotionNames = {"neutral", "joy",  "sadness", "anger",
                                                                            "love",    "fear", "surprise"};

inline constexpr std::size_t kNumSentiment = 4;
inline constexpr std::array<std::string_view, kNumSentiment> kSentimentNames = {"positive", "negative", "neutral",
                                                                                "compound"};

// Throw ValidationError on unknown names.
ToxicityCategory parse_toxicity_category(std::string_view name);
Emotion parse_emotion(std::string_view name);

// Each score in [0,1].
struct ToxicityScores {
  std::array<double, kNumToxicity> values{};

  double& operator[](ToxicityCategory c) { return values[static_cast<std::size_t>(c)]; }
  double operator[](ToxicityCategory c) const { return values[static_cast<std::size_t>(c)]; }
  bool operator==(const ToxicityScores&) const = default;
};

// Each score in [0,1]; the reference backend emits a distribution.
struct EmotionScores {
  std::array<double, kNumEmotion> values{};

  double& operator[](Emotion e) { return values[static_cast<std::size_t>(e)]; }
  double operator[](Emotion e) const { return values[static_cast<std::size_t>(e)]; }
  bool operator==(const EmotionScores&) const = default;
};

struct SentimentScores {
  double positive = 0.0;
  double negative = 0.0;
  double neutral = 0.0;
  double compound = 0.0;  // [-1, 1]

  std::array<double, kNumSentiment> as_array() const { return {positive, negative, neutral, compound}; }
  bool operator==(const SentimentScores&) const = default;
};

struct EtsScores {
  ToxicityScores toxicity;
  EmotionScores emotion;
  SentimentScores sentiment;

  bool operator==(const EtsScores&) const = default;
};

// Checks every range invariant; throws ValidationError naming the field.
void validate(const EtsScores& scores);

}  // namespace txguard::ets
