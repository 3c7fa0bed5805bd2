#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "txguard/core/transaction.hpp"

namespace txguard::synth {

enum class PrevalenceMode { kBalancedTraining, kMonthlyScoring };

std::string_view to_string(PrevalenceMode mode);
PrevalenceMode parse_prevalence_mode(std::string_view text);  // throws ValidationError

struct GeneratorConfig {
  std::uint64_t seed = 7;
  int n_abusive = 0;
  int n_conversational = 0;
  int n_normal = 0;
  WindowConfig window = WindowConfig::calendar_month(Date::from_ymd(2022, 2, 1));
  PrevalenceMode prevalence_mode = PrevalenceMode::kBalancedTraining;
  // Probability that a victim sends any reply at all.
  double abusive_reply_rate = 0.08;
  // Share of abusive relationships written mostly in low-toxicity
  // persistent-contact phrasing (hard for text scorers alone).
  double covert_abuse_rate = 0.3;

  // balanced_training mirrors a labelled set of 1,039 relationships with 283
  // positives; monthly_scoring is a month at extreme imbalance.
  static GeneratorConfig defaults(PrevalenceMode mode);
};

struct Corpus {
  std::vector<Transaction> transactions;    // sorted by (timestamp, txn_id)
  std::vector<LabeledRelationship> labels;  // one per generated relationship, abusive first
};

// Same config => byte-identical corpus. Throws ValidationError on negative
// counts or an all-zero configuration ("empty corpus").
Corpus generate(const GeneratorConfig& config);

struct TemplateFamily {
  std::string name;
  std::string category;  // which high-risk abuse category it exercises
  std::vector<std::string> templates;
};

struct CohortDocumentation {
  std::vector<TemplateFamily> abusive_families;
  std::vector<std::string> conversational_phrases;
  // Rough but friendly messages between mates; looks abusive one-way.
  std::vector<std::string> banter_phrases;
  std::vector<std::string> normal_references;
};

const CohortDocumentation& describe_cohorts();

double positive_rate(const std::vector<LabeledRelationship>& labels);

}  // namespace txguard::synth
