// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "txguard/core/grouping.hpp"
#include "txguard/ets/reference.hpp"
#include "txguard/eval/ablation.hpp"
#include "txguard/eval/metrics.hpp"
#include "txguard/eval/topk.hpp"
#include "txguard/features/aggregate.hpp"
#include "txguard/features/pipeline.hpp"
#include "txguard/kernels/kernels.hpp"
#include "txguard/model/artifact.hpp"
#include "txguard/model/folds.hpp"
#include "txguard/service/batch.hpp"
#include "txguard/synth/generator.hpp"

using namespace txguard;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// ---- metric oracle ------------------------------------------------------

struct OracleMetrics {
  double precision, recall, f1;
};

OracleMetrics oracle_prf(const std::vector<double>& s, const std::vector<int>& y, double t) {
  int tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const bool pred = s[i] >= t;
    if (pred && y[i]) ++tp;
    if (pred && !y[i]) ++fp;
    if (!pred && y[i]) ++fn;
  }
  OracleMetrics m{};
  m.precision = tp + fp ? static_cast<double>(tp) / (tp + fp) : 0.0;
  m.recall = tp + fn ? static_cast<double>(tp) / (tp + fn) : 0.0;
  m.f1 = m.precision + m.recall > 0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  return m;
}

double oracle_roc(const std::vector<double>& s, const std::vector<int>& y) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      if (y[i] && !y[j]) {
        den += 1;
        if (s[i] > s[j]) num += 1;
        else if (s[i] == s[j]) num += 0.5;
      }
  return num / den;
}

// Average precision recomputed by stepping through every distinct threshold.
double oracle_ap(const std::vector<double>& s, const std::vector<int>& y) {
  std::set<double, std::greater<>> thresholds(s.begin(), s.end());
  const int n_pos = static_cast<int>(std::count(y.begin(), y.end(), 1));
  double ap = 0, prev_recall = 0;
  for (double t : thresholds) {
    auto m = oracle_prf(s, y, t);
    const double recall = m.recall;
    (void)n_pos;
    ap += (recall - prev_recall) * m.precision;
    prev_recall = recall;
  }
  return ap;
}

void metric_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  int mismatches = 0, instances = 0;
  double worst_ap = 0;
  for (int inst = 0; inst < 200; ++inst) {
    const int n = 2 + static_cast<int>(rng() % 9);  // 2..10
    std::vector<double> s(static_cast<std::size_t>(n));
    std::vector<int> y(static_cast<std::size_t>(n));
    const int levels = 2 + static_cast<int>(rng() % 8);  // coarse grid forces ties
    for (int i = 0; i < n; ++i) {
      s[static_cast<std::size_t>(i)] = static_cast<double>(rng() % static_cast<unsigned>(levels)) / (levels - 1);
      y[static_cast<std::size_t>(i)] = static_cast<int>(rng() % 2);
    }
    y[0] = 1;
    y[1] = 0;
    std::shuffle(y.begin(), y.end(), rng);
    ++instances;

    std::set<double> thresholds(s.begin(), s.end());
    thresholds.insert(0.5);
    for (double t : thresholds) {
      auto got = eval::compute_metrics(s, y, t);
      auto want = oracle_prf(s, y, t);
      if (got.precision != want.precision || got.recall != want.recall || got.f1 != want.f1) ++mismatches;
    }
    auto got = eval::compute_metrics(s, y, 0.5);
    if (!got.roc_auc || *got.roc_auc != oracle_roc(s, y)) ++mismatches;
    if (!got.auc_pr) {
      ++mismatches;
    } else {
      worst_ap = std::max(worst_ap, std::abs(*got.auc_pr - oracle_ap(s, y)));
    }
  }
  const double secs = seconds_since(t0);
  const bool ok = mismatches == 0 && worst_ap <= 1e-9 && secs < 10.0;
  report("metric_oracle", ok,
         std::to_string(instances) + " instances, " + std::to_string(mismatches) + " exact mismatches, max |dAP| " +
             fmt("%.3g", worst_ap) + ", " + fmt("%.2fs", secs));
}

// ---- aggregation oracle -------------------------------------------------

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

features::AggregatedBlock oracle_block(const std::vector<features::TransactionFeatures>& t) {
  features::AggregatedBlock b{};
  const double n = static_cast<double>(t.size());
  std::size_t c = 0;
  for (std::size_t k = 0; k < 4; ++k) {
    double m = t[0].ets.sentiment.as_array()[k];
    for (const auto& x : t) m = std::max(m, x.ets.sentiment.as_array()[k]);
    b[c++] = m;
  }
  const std::function<double(const features::TransactionFeatures&)> shape[] = {
      [](const auto& x) { return static_cast<double>(x.st.desc_length); },
      [](const auto& x) { return static_cast<double>(x.st.n_words); },
      [](const auto& x) { return static_cast<double>(x.st.longest_word_len); },
      [](const auto& x) { return x.st.word_break_proportion; }};
  for (const auto& f : shape) {
    std::vector<double> v;
    for (const auto& x : t) v.push_back(f(x));
    b[c++] = *std::min_element(v.begin(), v.end());
    b[c++] = *std::max_element(v.begin(), v.end());
    b[c++] = median(v);
  }
  for (std::size_t k = 0; k < ets::kNumToxicity; ++k) {
    double sum = 0;
    for (const auto& x : t) sum += x.ets.toxicity.values[k];
    b[c++] = sum;
  }
  const std::function<double(const features::TransactionFeatures&)> means[] = {
      [](const auto& x) { return x.ets.emotion.values[0]; },
      [](const auto& x) { return x.ets.emotion.values[1]; },
      [](const auto& x) { return x.ets.emotion.values[2]; },
      [](const auto& x) { return x.ets.emotion.values[3]; },
      [](const auto& x) { return x.ets.emotion.values[4]; },
      [](const auto& x) { return x.ets.emotion.values[5]; },
      [](const auto& x) { return x.ets.emotion.values[6]; },
      [](const auto& x) { return static_cast<double>(x.amount_cents); },
      [](const auto& x) { return static_cast<double>(x.st.n_lower_words); },
      [](const auto& x) { return static_cast<double>(x.st.n_upper_words); },
      [](const auto& x) { return static_cast<double>(x.st.n_mixed_words); },
      [](const auto& x) { return static_cast<double>(x.st.n_punctuation); },
      [](const auto& x) { return x.st.has_special_chars ? 1.0 : 0.0; },
      [](const auto& x) { return x.st.has_digits ? 1.0 : 0.0; },
      [](const auto& x) { return x.st.is_empty ? 1.0 : 0.0; }};
  for (const auto& f : means) {
    double sum = 0;
    for (const auto& x : t) sum += f(x);
    b[c++] = sum / n;
  }
  // Daily counts; ties for max/min resolve to the earliest day.
  std::map<std::int32_t, int> daily;
  for (const auto& x : t) daily[x.txn_date.days_since_epoch()]++;
  int max_count = 0, min_count = 1 << 30;
  std::int32_t max_day = 0, min_day = 0;
  for (const auto& [d, k] : daily) {
    if (k > max_count) max_count = k, max_day = d;
    if (k < min_count) min_count = k, min_day = d;
  }
  b[c++] = n;
  b[c++] = max_count;
  b[c++] = static_cast<double>(daily.size());
  b[c++] = std::abs(max_day - min_day);
  return b;
}

void aggregation_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0, 1);
  int exact_mismatch = 0;
  double worst_mean = 0;
  const Date base = Date::from_ymd(2022, 2, 1);
  for (int rel = 0; rel < 500; ++rel) {
    const int n = 1 + static_cast<int>(rng() % 30);
    std::vector<features::TransactionFeatures> t(static_cast<std::size_t>(n));
    for (auto& x : t) {
      x.st.desc_length = static_cast<int>(rng() % 281);
      x.st.n_words = static_cast<int>(rng() % 40);
      x.st.longest_word_len = static_cast<int>(rng() % 30);
      x.st.n_lower_words = static_cast<int>(rng() % 20);
      x.st.n_upper_words = static_cast<int>(rng() % 5);
      x.st.n_mixed_words = static_cast<int>(rng() % 5);
      x.st.n_punctuation = static_cast<int>(rng() % 10);
      x.st.has_special_chars = rng() % 2;
      x.st.has_digits = rng() % 2;
      x.st.is_empty = rng() % 10 == 0;
      x.st.word_break_proportion = u(rng) * 0.3;
      for (auto& v : x.ets.toxicity.values) v = u(rng);
      for (auto& v : x.ets.emotion.values) v = u(rng);
      x.ets.sentiment = {u(rng), u(rng), u(rng), 2 * u(rng) - 1};
      x.amount_cents = 1 + static_cast<std::int64_t>(rng() % 50000);
      x.txn_date = base + static_cast<std::int32_t>(rng() % 28);
    }
    const auto got = features::aggregate_relationship(t).block;
    const auto want = oracle_block(t);
    for (std::size_t c = 0; c < features::kBlockWidth; ++c) {
      const bool is_mean = c >= 23 && c < 38;
      if (is_mean) worst_mean = std::max(worst_mean, std::abs(got[c] - want[c]));
      else if (got[c] != want[c]) ++exact_mismatch;
    }
  }
  const double secs = seconds_since(t0);
  report("aggregation_oracle", exact_mismatch == 0 && worst_mean <= 1e-12 && secs < 10.0,
         "500 relationships, kernels=" + std::string(kernels::to_string(kernels::active().isa)) + ", " + std::to_string(exact_mismatch) +
             " exact mismatches, max |dmean| " + fmt("%.3g", worst_mean) + ", " + fmt("%.2fs", secs));
}

// ---- sentiment formula --------------------------------------------------

struct SentimentCase {
  std::string text;
  std::vector<double> valences;  // matched tokens
  int unmatched;
};

void sentiment_formula() {
  // Valences copied from the shipped sentiment table.
  const std::vector<SentimentCase> cases = {
      {"love", {3.2}, 0},
      {"hate", {-2.7}, 0},
      {"you are great", {3.1}, 2},
      {"stupid idiot", {-2.4, -2.3}, 0},
      {"thanks for dinner", {1.9}, 2},
      {"rent for march", {}, 3},
      {"i will kill you", {-3.7}, 3},
      {"happy birthday love you", {2.7, 3.2}, 2},
      {"sorry i miss you", {-0.3, -0.6}, 2},
      {"you worthless pathetic loser", {-1.9, -2.3, -2.4}, 1},
      {"good good good", {1.9, 1.9, 1.9}, 0},
      {"glad you are safe", {2.0, 1.9}, 2},
      {"hope you suffer", {1.9, -2.5}, 1},
      {"love you but hate this", {3.2, -2.7}, 3},
      {"never alone", {-0.3, -1.0}, 0},
      {"cheers mate", {2.1}, 1},
      {"shut up", {-0.5}, 1},
      {"awesome amazing best fun", {3.1, 2.8, 3.2, 2.3}, 0},
      {"you will regret this and die", {-1.7, -2.9}, 4},
      {"Great, THANKS!", {3.1, 1.9}, 0},
  };
  const auto& lex = ets::default_lexicons().sentiment;
  double worst = 0;
  for (const auto& c : cases) {
    double s = 0, pos = 0, neg = 0, neu = c.unmatched;
    for (double v : c.valences) {
      s += v;
      if (v > 0) pos += std::abs(v) + 1;
      else if (v < 0) neg += std::abs(v) + 1;
      else neu += 1;
    }
    const double total = pos + neg + neu;
    const double want[4] = {pos / total, neg / total, neu / total, s / std::sqrt(s * s + 15.0)};
    const auto got = ets::score_sentiment_reference(c.text, lex).as_array();
    for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(got[static_cast<std::size_t>(k)] - want[k]));
  }
  report("sentiment_formula", worst <= 1e-6 && cases.size() == 20,
         std::to_string(cases.size()) + " cases, max |d| " + fmt("%.3g", worst));
}

// ---- fold leakage -------------------------------------------------------

void fold_leakage() {
  std::mt19937_64 rng(5);
  int violations = 0, plans = 0;
  const int ks[] = {2, 5, 10};
  for (int p = 0; p < 100; ++p) {
    const int k = ks[p % 3];
    const int n_accounts = 30 + static_cast<int>(rng() % 40);
    std::vector<RelationshipKey> keys;
    const int n_keys = 40 + static_cast<int>(rng() % 120);
    for (int i = 0; i < n_keys; ++i) {
      const auto a = static_cast<int>(rng() % static_cast<unsigned>(n_accounts));
      auto b = static_cast<int>(rng() % static_cast<unsigned>(n_accounts));
      if (a == b) b = (b + 1) % n_accounts;
      keys.push_back({"acct" + std::to_string(a), "acct" + std::to_string(b)});
      if (rng() % 3 == 0) keys.push_back(keys.back().reversed());
    }
    const int repeats = 1 + static_cast<int>(rng() % 3);
    model::FoldPlan plan;
    try {
      plan = model::make_fold_plan(keys, k, repeats, rng());
    } catch (const std::exception&) {
      continue;
    }
    ++plans;
    for (int r = 0; r < repeats; ++r) {
      std::map<std::pair<std::string, std::string>, int> seen;
      for (const auto& key : keys) {
        const auto pair = std::minmax(key.sender, key.recipient);
        const int f = plan.fold_of(key, r);
        auto [it, inserted] = seen.emplace(std::make_pair(pair.first, pair.second), f);
        if (!inserted && it->second != f) ++violations;
        if (plan.fold_of(key.reversed(), r) != f) ++violations;
      }
    }
  }
  report("fold_leakage", plans == 100 && violations == 0,
         std::to_string(plans) + " plans (k in {2,5,10}), " + std::to_string(violations) + " violations");
}

// ---- synthetic benchmark: table, end-to-end, reciprocity ---------------

struct LabeledTable {
  features::FeatureTable table;
  std::vector<features::RelationshipFeatures> rows;
  std::vector<LabeledRelationship> labels;
};

LabeledTable build_dataset(const synth::GeneratorConfig& cfg) {
  auto corpus = synth::generate(cfg);
  auto rels = group_relationships(corpus.transactions, cfg.window);
  ets::ReferenceBackend be;
  LabeledTable out;
  out.table = features::build_feature_table(rels, be);
  std::map<RelationshipKey, LabeledRelationship> by_key;
  for (const auto& l : corpus.labels) by_key[l.key] = l;
  for (const auto& r : out.table.rows) {
    auto it = by_key.find(r.key);
    if (it == by_key.end()) continue;
    out.rows.push_back(r);
    out.labels.push_back(it->second);
  }
  return out;
}

void benchmark() {
  const auto t0 = Clock::now();
  synth::GeneratorConfig cfg;
  cfg.seed = 7;
  cfg.n_abusive = 40;
  cfg.n_conversational = 80;
  cfg.n_normal = 280;
  auto data = build_dataset(cfg);
  std::vector<RelationshipKey> keys;
  for (const auto& r : data.rows) keys.push_back(r.key);
  auto plan = model::make_fold_plan(keys, 5, 5, cfg.seed);
  eval::AblationConfig acfg;
  acfg.forest.seed = cfg.seed;
  const auto combos = eval::default_combos();
  const auto rows = eval::run_ablation(data.rows, data.labels, data.table.layout, plan, combos, acfg);
  const double secs = seconds_since(t0);

  // Table structure: 7 combos in order, then the reciprocity row; five metric columns.
  const auto table = eval::format_table(rows);
  std::istringstream lines(table);
  std::string header, sep, line;
  std::getline(lines, header);
  std::getline(lines, sep);
  std::vector<std::string> body;
  while (std::getline(lines, line))
    if (!line.empty()) body.push_back(line);
  bool structure = body.size() == 8;
  const char* const cols[] = {"Features", "Prec", "Rec", "F1", "AUC-PR", "ROC AUC"};
  std::size_t pos = 0;
  for (const char* c : cols) {
    const auto at = header.find(c, pos);
    structure &= at != std::string::npos;
    pos = at == std::string::npos ? pos : at + 1;
  }
  const auto families = eval::all_family_combos();
  for (std::size_t i = 0; i < body.size() && i < 8; ++i) {
    const std::string name = i < 7 ? families[i].name() : "ETS+ST+TRX + reciprocity";
    structure &= body[i].rfind(name, 0) == 0 && rows[i].combo.name() == name;
    structure &= std::count(body[i].begin(), body[i].end(), '(') == 5;
  }
  report("ablation_table_structure", structure, "7 combinations + reciprocity row, 5 metric columns");
  std::printf("%s", table.c_str());

  const auto& full = rows[6];
  const auto& rcp = rows[7];
  report("synthetic_benchmark", rcp.roc_auc.mean >= 0.90 && secs < 300.0,
         "seed 7, 40/80/280, 5x5 grouped CV, ETS+ST+TRX + reciprocity OOF ROC AUC " + fmt("%.4f", rcp.roc_auc.mean) +
             " (>= 0.90), " + fmt("%.1fs", secs) + " for all 8 rows");
  report("reciprocity_direction", rcp.roc_auc.mean >= full.roc_auc.mean,
         "abusive reply rate " + fmt("%.2f", cfg.abusive_reply_rate) + ", fwd+rcp " + fmt("%.4f", rcp.roc_auc.mean) +
             " >= fwd-only " + fmt("%.4f", full.roc_auc.mean));
}

// ---- top-K protocol -----------------------------------------------------

void topk_protocol() {
  // 50 reviewed cases, 35 positive, the first negative at rank 26.
  const int k = 50;
  std::vector<int> labels(k, 0);
  for (int i = 0; i < 25; ++i) labels[static_cast<std::size_t>(i)] = 1;
  const int tail_pos[] = {27, 28, 30, 31, 33, 36, 38, 41, 44, 47};  // 1-based ranks
  for (int r : tail_pos) labels[static_cast<std::size_t>(r - 1)] = 1;
  std::vector<double> scores(k);
  for (int i = 0; i < k; ++i) scores[static_cast<std::size_t>(i)] = 1.0 - i / 100.0;
  const auto curve = eval::topk_curve(scores, labels, k);
  bool ok = std::count(labels.begin(), labels.end(), 1) == 35 && labels[25] == 0 && curve.size() >= 25;
  for (std::size_t i = 0; i < 25 && i < curve.size(); ++i) ok &= curve[i].fpr == 0.0;
  ok &= curve.back().fpr == 1.0 && curve.back().tpr == 1.0;
  report("topk_protocol", ok,
         "K=50, 35 positives, first negative at rank 26: " + std::to_string(curve.size()) +
             " points, first 25 at fpr 0, last (" + fmt("%g", curve.back().fpr) + "," + fmt("%g", curve.back().tpr) + ")");
}

// ---- queue determinism --------------------------------------------------

void queue_determinism() {
  synth::GeneratorConfig cfg;
  cfg.seed = 21;
  cfg.n_abusive = 20;
  cfg.n_conversational = 20;
  cfg.n_normal = 60;
  auto data = build_dataset(cfg);
  model::ForestConfig fc;
  fc.n_trees = 100;
  const auto m = model::train(data.rows, data.labels, data.table.layout, fc);
  cfg.seed = 22;
  const auto corpus = synth::generate(cfg);
  std::string first, second;
  for (std::string* out : {&first, &second}) {
    ets::ReferenceBackend be;
    *out = service::to_json(service::run_scoring_batch(corpus.transactions, m, cfg.window, 50, be)).dump(2);
  }
  report("queue_determinism", first == second && !first.empty(),
         "two runs, " + std::to_string(first.size()) + " bytes, identical=" + (first == second ? "yes" : "no"));
}

}  // namespace

int main() {
  std::printf("txguard acceptance (kernels: %s)\n", std::string(kernels::to_string(kernels::active().isa)).c_str());
  const std::function<void()> checks[] = {metric_oracle,  aggregation_oracle, sentiment_formula, fold_leakage,
                                          topk_protocol, queue_determinism,  benchmark};
  for (const auto& check : checks) {
    try {
      check();
    } catch (const std::exception& e) {
      report("exception", false, e.what());
    }
  }
  std::printf("%d failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
