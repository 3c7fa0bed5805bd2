#include "txguard/synth/generator.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "txguard/util/error.hpp"
#include "txguard/util/hash.hpp"
#include "txguard/util/rng.hpp"

namespace txguard::synth {

std::string_view to_string(PrevalenceMode mode) {
  return mode == PrevalenceMode::kBalancedTraining ? "balanced_training" : "monthly_scoring";
}

PrevalenceMode parse_prevalence_mode(std::string_view text) {
  if (text == "balanced_training") return PrevalenceMode::kBalancedTraining;
  if (text == "monthly_scoring") return PrevalenceMode::kMonthlyScoring;
  throw ValidationError("unknown prevalence mode '" + std::string(text) + "'");
}

GeneratorConfig GeneratorConfig::defaults(PrevalenceMode mode) {
  GeneratorConfig c;
  c.prevalence_mode = mode;
  if (mode == PrevalenceMode::kBalancedTraining) {
    c.n_abusive = 283;
    c.n_conversational = 252;
    c.n_normal = 504;
  } else {
    c.n_abusive = 5;
    c.n_conversational = 200;
    c.n_normal = 10'000;
  }
  return c;
}

double positive_rate(const std::vector<LabeledRelationship>& labels) {
  if (labels.empty()) return 0.0;
  std::size_t pos = 0;
  for (const auto& l : labels) pos += l.label == 1;
  return static_cast<double>(pos) / static_cast<double>(labels.size());
}

namespace {

enum class Cohort { kAbusive, kConversational, kNormal };

std::string_view cohort_tag(Cohort c) {
  switch (c) {
    case Cohort::kAbusive:
      return "abusive";
    case Cohort::kConversational:
      return "conversational";
    case Cohort::kNormal:
      return "normal";
  }
  return "";
}

// Substream per (cohort, index): changing one cohort's count never perturbs
// another cohort's relationships.
std::uint64_t substream_seed(std::uint64_t seed, Cohort cohort, int index) {
  util::Fnv1a64 h;
  h.update(cohort_tag(cohort)).separator().update(std::to_string(index));
  return util::mix64(seed ^ util::mix64(h.digest()));
}

std::string account_id(std::uint64_t seed, Cohort cohort, int index, std::string_view role) {
  util::Fnv1a64 h;
  h.update("account").separator().update(std::to_string(seed)).separator().update(cohort_tag(cohort)).separator()
      .update(std::to_string(index)).separator().update(role);
  std::uint64_t v = util::mix64(h.digest()) % 10'000'000'000ULL;
  std::string digits = std::to_string(v);
  return "ACC" + std::string(10 - digits.size(), '0') + digits;
}

struct Builder {
  const GeneratorConfig& config;
  std::vector<Transaction>& out;
  util::Rng& rng;
  std::string id_prefix;
  int serial = 0;

  void add(const std::string& from, const std::string& to, Date day, int minute_of_day, std::int64_t cents,
           std::string description) {
    Transaction t;
    util::Fnv1a64 h;
    h.update(id_prefix).separator().update(std::to_string(serial++));
    t.txn_id = "T" + util::to_hex(h.digest());
    t.sender = from;
    t.recipient = to;
    t.amount_cents = cents;
    minute_of_day = std::clamp(minute_of_day, 0, 24 * 60 - 1);
    t.timestamp = Timestamp::from_date(day, minute_of_day / 60, minute_of_day % 60, static_cast<int>(rng.uniform_int(0, 59)));
    t.description = std::move(description);
    out.push_back(std::move(t));
  }
};

int window_days(const WindowConfig& w) { return (w.end - w.start) + 1; }

std::vector<Date> pick_days(util::Rng& rng, const WindowConfig& w, int count) {
  const int span = window_days(w);
  count = std::clamp(count, 1, span);
  std::set<int> chosen;
  while (static_cast<int>(chosen.size()) < count) chosen.insert(static_cast<int>(rng.uniform_int(0, span - 1)));
  std::vector<Date> days;
  for (int offset : chosen) days.push_back(w.start + offset);
  return days;
}

// Character-level evasions of word filters.
std::string obfuscate(util::Rng& rng, const std::string& text) {
  switch (rng.uniform_int(0, 3)) {
    case 0: {  // interleaved dots inside each word
      std::string o;
      for (std::size_t i = 0; i < text.size(); ++i) {
        o.push_back(text[i]);
        if (text[i] != ' ' && i + 1 < text.size() && text[i + 1] != ' ') o.push_back('.');
      }
      return o;
    }
    case 1: {  // spaces removed
      std::string o;
      for (char c : text)
        if (c != ' ') o.push_back(c);
      return o;
    }
    case 2: {  // shouted
      std::string o = text;
      for (char& c : o) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      return o;
    }
    default: {  // hyphenated halves
      std::string o;
      for (std::size_t i = 0; i < text.size(); ++i) {
        o.push_back(text[i]);
        if (i % 3 == 1 && text[i] != ' ' && i + 1 < text.size() && text[i + 1] != ' ') o.push_back('-');
      }
      return o;
    }
  }
}

const TemplateFamily& family(std::string_view name) {
  for (const auto& f : describe_cohorts().abusive_families)
    if (f.name == name) return f;
  throw Error("unknown template family");
}

std::vector<int> spread_counts(util::Rng& rng, int total, int buckets, bool bursty) {
  std::vector<int> counts(static_cast<std::size_t>(buckets), 1);
  int burst = static_cast<int>(rng.uniform_int(0, buckets - 1));
  for (int i = buckets; i < total; ++i) {
    int b = bursty && rng.bernoulli(0.5) ? burst : static_cast<int>(rng.uniform_int(0, buckets - 1));
    ++counts[static_cast<std::size_t>(b)];
  }
  return counts;
}

std::string reference_text(util::Rng& rng) {
  const double roll = rng.uniform01();
  if (roll < 0.15) return "INV-" + std::to_string(rng.uniform_int(1000, 9999));
  if (roll < 0.22) return "ref " + std::to_string(rng.uniform_int(100000, 999999));
  return rng.pick<std::string>(describe_cohorts().normal_references);
}

void make_abusive(const GeneratorConfig& cfg, int index, Builder& b, std::vector<LabeledRelationship>& labels) {
  util::Rng& rng = b.rng;
  // Some abusers target several people; each pair is its own relationship.
  const bool shares_sender = index > 0 && rng.bernoulli(0.15);
  const std::string abuser = account_id(cfg.seed, Cohort::kAbusive, shares_sender ? index - 1 : index, "sender");
  const std::string victim = account_id(cfg.seed, Cohort::kAbusive, index, "recipient");

  const auto& families = describe_cohorts().abusive_families;
  const bool covert = rng.bernoulli(cfg.covert_abuse_rate);
  // Coercive control hidden among ordinary payments: mostly plain references.
  const bool coercive = !covert && rng.bernoulli(0.15);
  // Overt relationships draw from one of the five category families.
  const TemplateFamily& primary =
      covert ? family("persistent_contact") : families[static_cast<std::size_t>(rng.uniform_int(0, 4))];
  // A few phrases get repeated over and over.
  std::vector<std::string> repertoire;
  const int repertoire_size = static_cast<int>(rng.uniform_int(2, 3));
  for (int i = 0; i < repertoire_size; ++i) repertoire.push_back(rng.pick<std::string>(primary.templates));

  const int n_days = static_cast<int>(rng.uniform_int(2, std::min(9, window_days(cfg.window))));
  const int n_txn = std::max(static_cast<int>(rng.uniform_int(5, 28)), n_days);
  const auto days = pick_days(rng, cfg.window, n_days);
  const auto per_day = spread_counts(rng, n_txn, static_cast<int>(days.size()), true);

  for (std::size_t d = 0; d < days.size(); ++d) {
    int minute = static_cast<int>(rng.uniform_int(6 * 60, 22 * 60));
    for (int k = 0; k < per_day[d]; ++k) {
      std::string text;
      double roll = rng.uniform01();
      if (coercive) {
        text = roll < 0.7 ? reference_text(rng) : rng.pick<std::string>(family("persistent_contact").templates);
      } else if (covert) {
        text = roll < 0.85 ? rng.pick<std::string>(repertoire)
                           : rng.pick<std::string>(describe_cohorts().conversational_phrases).substr(0, 40);
      } else if (roll < 0.6) {
        text = rng.pick<std::string>(repertoire);
      } else if (roll < 0.8) {
        text = rng.pick<std::string>(family("persistent_contact").templates);
      } else {
        text = rng.pick<std::string>(family("filter_evasion").templates);
      }
      if (rng.bernoulli(0.2)) text = obfuscate(rng, text);
      const std::int64_t cents = rng.bernoulli(0.5) ? 1 : rng.uniform_int(1, 500);
      b.add(abuser, victim, days[d], minute, cents, std::move(text));
      minute += static_cast<int>(rng.uniform_int(1, 25));
    }
  }

  if (rng.bernoulli(cfg.abusive_reply_rate)) {
    static const std::vector<std::string> kReplies = {"please stop", "leave me alone", "stop contacting me"};
    b.add(victim, abuser, days.back(), static_cast<int>(rng.uniform_int(0, 23 * 60)), 1,
          rng.pick<std::string>(kReplies));
  }
  labels.push_back({{abuser, victim}, cfg.window, 1, LabelSource::kSynthetic});
}

std::string conversational_text(util::Rng& rng) {
  const auto& phrases = describe_cohorts().conversational_phrases;
  std::string text = rng.pick<std::string>(phrases);
  if (rng.bernoulli(0.4)) text += " " + rng.pick<std::string>(phrases);
  if (text.size() > 280) text.resize(280);
  return text;
}

void make_conversational(const GeneratorConfig& cfg, int index, Builder& b, std::vector<LabeledRelationship>& labels) {
  util::Rng& rng = b.rng;
  const std::string a = account_id(cfg.seed, Cohort::kConversational, index, "sender");
  const std::string c = account_id(cfg.seed, Cohort::kConversational, index, "recipient");

  auto exchange = [&](const std::string& from, const std::string& to, int n_txn, int n_days) {
    const auto days = pick_days(rng, cfg.window, n_days);
    const auto per_day = spread_counts(rng, std::max(n_txn, static_cast<int>(days.size())), static_cast<int>(days.size()), false);
    for (std::size_t d = 0; d < days.size(); ++d) {
      int minute = static_cast<int>(rng.uniform_int(7 * 60, 22 * 60));
      for (int k = 0; k < per_day[d]; ++k) {
        b.add(from, to, days[d], minute, rng.uniform_int(1, 50) * 100, conversational_text(rng));
        minute += static_cast<int>(rng.uniform_int(2, 90));
      }
    }
  };
  // Banter: mates trading insults and nagging in bursts of one-cent
  // messages, drawn from the same phrase pools and amount mix as abuse. One
  // direction alone reads as abuse; the other side answering in kind is what
  // sets it apart.
  auto banter = [&](const std::string& from, const std::string& to, int n_txn, int n_days) {
    const auto days = pick_days(rng, cfg.window, n_days);
    const auto per_day = spread_counts(rng, std::max(n_txn, static_cast<int>(days.size())), static_cast<int>(days.size()), true);
    for (std::size_t d = 0; d < days.size(); ++d) {
      int minute = static_cast<int>(rng.uniform_int(6 * 60, 22 * 60));
      for (int k = 0; k < per_day[d]; ++k) {
        const double roll = rng.uniform01();
        std::string text = roll < 0.4   ? rng.pick<std::string>(describe_cohorts().banter_phrases)
                           : roll < 0.7 ? rng.pick<std::string>(family("degrading_comments").templates)
                           : roll < 0.9 ? rng.pick<std::string>(family("persistent_contact").templates)
                                        : rng.pick<std::string>(family("filter_evasion").templates);
        if (rng.bernoulli(0.2)) text = obfuscate(rng, text);
        b.add(from, to, days[d], minute, rng.bernoulli(0.5) ? 1 : rng.uniform_int(1, 500), std::move(text));
        minute += static_cast<int>(rng.uniform_int(1, 25));
      }
    }
  };
  if (rng.bernoulli(0.4)) {
    banter(a, c, static_cast<int>(rng.uniform_int(4, 28)), static_cast<int>(rng.uniform_int(2, 9)));
    if (rng.bernoulli(0.9)) banter(c, a, static_cast<int>(rng.uniform_int(4, 28)), static_cast<int>(rng.uniform_int(2, 9)));
  } else {
    exchange(a, c, static_cast<int>(rng.uniform_int(3, 16)), static_cast<int>(rng.uniform_int(2, 10)));
    if (rng.bernoulli(0.85)) exchange(c, a, static_cast<int>(rng.uniform_int(2, 14)), static_cast<int>(rng.uniform_int(1, 9)));
  }
  labels.push_back({{a, c}, cfg.window, 0, LabelSource::kSynthetic});
}


void make_normal(const GeneratorConfig& cfg, int index, Builder& b, std::vector<LabeledRelationship>& labels) {
  util::Rng& rng = b.rng;
  const std::string a = account_id(cfg.seed, Cohort::kNormal, index, "sender");
  const std::string c = account_id(cfg.seed, Cohort::kNormal, index, "recipient");

  // Frequent small payers (pocket money, shared lunches) look busy but benign.
  const bool frequent = rng.bernoulli(0.12);
  const int n_txn = frequent ? static_cast<int>(rng.uniform_int(8, 20)) : static_cast<int>(rng.uniform_int(1, 6));
  const int n_days = frequent ? static_cast<int>(rng.uniform_int(4, 12)) : n_txn;
  const auto days = pick_days(rng, cfg.window, n_days);
  const auto per_day = spread_counts(rng, std::max(n_txn, static_cast<int>(days.size())), static_cast<int>(days.size()), false);
  static const std::vector<std::string> kSmall = {"pocket money", "lunch", "coffee", "bus fare", "canteen", ""};
  for (std::size_t d = 0; d < days.size(); ++d) {
    int minute = static_cast<int>(rng.uniform_int(8 * 60, 20 * 60));
    for (int k = 0; k < per_day[d]; ++k) {
      if (frequent) {
        b.add(a, c, days[d], minute, rng.uniform_int(100, 1000), rng.pick<std::string>(kSmall));
      } else {
        b.add(a, c, days[d], minute, rng.uniform_int(1000, 250'000), reference_text(rng));
      }
      minute += static_cast<int>(rng.uniform_int(5, 180));
    }
  }
  if (rng.bernoulli(0.3)) {
    const int replies = static_cast<int>(rng.uniform_int(1, 3));
    for (Date d : pick_days(rng, cfg.window, replies))
      b.add(c, a, d, static_cast<int>(rng.uniform_int(8 * 60, 21 * 60)), rng.uniform_int(500, 50'000), reference_text(rng));
  }
  labels.push_back({{a, c}, cfg.window, 0, LabelSource::kSynthetic});
}

}  // namespace

Corpus generate(const GeneratorConfig& config) {
  if (config.n_abusive < 0 || config.n_conversational < 0 || config.n_normal < 0)
    throw ValidationError("cohort counts must be non-negative");
  if (config.n_abusive + config.n_conversational + config.n_normal == 0) throw ValidationError("empty corpus");
  if (config.window.end < config.window.start) throw ValidationError("window end precedes start");

  Corpus corpus;
  auto run = [&](Cohort cohort, int count, auto&& make) {
    for (int i = 0; i < count; ++i) {
      util::Rng rng(substream_seed(config.seed, cohort, i));
      Builder b{config, corpus.transactions, rng, std::string(cohort_tag(cohort)) + ":" + std::to_string(config.seed) + ":" + std::to_string(i)};
      make(config, i, b, corpus.labels);
    }
  };
  run(Cohort::kAbusive, config.n_abusive, make_abusive);
  run(Cohort::kConversational, config.n_conversational, make_conversational);
  run(Cohort::kNormal, config.n_normal, make_normal);

  std::sort(corpus.transactions.begin(), corpus.transactions.end(), [](const Transaction& x, const Transaction& y) {
    if (x.timestamp != y.timestamp) return x.timestamp < y.timestamp;
    return x.txn_id < y.txn_id;
  });
  return corpus;
}

}  // namespace txguard::synth
