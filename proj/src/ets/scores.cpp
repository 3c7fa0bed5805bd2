#include "txguard/ets/scores.hpp"

#include <string>

#include "txguard/util/error.hpp"

namespace txguard::ets {

ToxicityCategory parse_toxicity_category(std::string_view name) {
  for (std::size_t i = 0; i < kNumToxicity; ++i)
    if (kToxicityNames[i] == name) return static_cast<ToxicityCategory>(i);
  throw ValidationError("unknown toxicity category '" + std::string(name) + "'");
}

Emotion parse_emotion(std::string_view name) {
  for (std::size_t i = 0; i < kNumEmotion; ++i)
    if (kEmotionNames[i] == name) return static_cast<Emotion>(i);
  throw ValidationError("unknown emotion '" + std::string(name) + "'");
}

namespace {

void check_range(double v, double lo, double hi, std::string_view group, std::string_view field) {
  if (!(v >= lo && v <= hi))
    throw ValidationError(std::string(group) + "." + std::string(field) + " out of range: " + std::to_string(v));
}

}  // namespace

void validate(const EtsScores& scores) {
  for (std::size_t i = 0; i < kNumToxicity; ++i)
    check_range(scores.toxicity.values[i], 0.0, 1.0, "toxicity", kToxicityNames[i]);
  for (std::size_t i = 0; i < kNumEmotion; ++i)
    check_range(scores.emotion.values[i], 0.0, 1.0, "emotion", kEmotionNames[i]);
  const auto s = scores.sentiment.as_array();
  for (std::size_t i = 0; i < 3; ++i) check_range(s[i], 0.0, 1.0, "sentiment", kSentimentNames[i]);
  check_range(s[3], -1.0, 1.0, "sentiment", kSentimentNames[3]);
}

}  // namespace txguard::ets
