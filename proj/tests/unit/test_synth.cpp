#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "txguard/core/grouping.hpp"
#include "txguard/core/ingest.hpp"
#include "txguard/ets/reference.hpp"
#include "txguard/features/pipeline.hpp"
#include "txguard/synth/generator.hpp"
#include "txguard/util/error.hpp"

using namespace txguard;
using namespace txguard::synth;

namespace {

GeneratorConfig small(int abusive, int conversational, int normal) {
  GeneratorConfig c;
  c.seed = 7;
  c.n_abusive = abusive;
  c.n_conversational = conversational;
  c.n_normal = normal;
  return c;
}

}  // namespace

TEST_SUITE("synthgen") {
  TEST_CASE("count contract") {
    auto corpus = generate(small(5, 5, 10));
    CHECK(corpus.labels.size() == 20);
    int pos = 0;
    for (const auto& l : corpus.labels) pos += l.label;
    CHECK(pos == 5);
  }

  TEST_CASE("determinism, byte for byte") {
    auto a = generate(small(6, 4, 9));
    auto b = generate(small(6, 4, 9));
    std::ostringstream sa, sb;
    write_transactions(sa, a.transactions);
    write_transactions(sb, b.transactions);
    CHECK(sa.str() == sb.str());
    CHECK(a.labels == b.labels);
    auto c = small(6, 4, 9);
    c.seed = 8;
    CHECK(generate(c).transactions != a.transactions);
  }

  TEST_CASE("cohort substreams are independent of other cohort sizes") {
    auto a = generate(small(3, 2, 2));
    auto b = generate(small(3, 9, 2));
    std::vector<LabeledRelationship> abusive_a, abusive_b;
    for (const auto& l : a.labels)
      if (l.label) abusive_a.push_back(l);
    for (const auto& l : b.labels)
      if (l.label) abusive_b.push_back(l);
    CHECK(abusive_a == abusive_b);
  }

  TEST_CASE("monthly scoring prevalence") {
    auto c = GeneratorConfig::defaults(PrevalenceMode::kMonthlyScoring);
    c.n_conversational = 0;
    c.n_normal = 10000;
    c.n_abusive = 5;
    auto corpus = generate(c);
    CHECK(positive_rate(corpus.labels) == doctest::Approx(5.0 / 10005.0));
    CHECK(positive_rate(corpus.labels) == doctest::Approx(0.0005).epsilon(0.001));
  }

  TEST_CASE("errors") {
    CHECK_THROWS_WITH_AS(generate(small(0, 0, 0)), "empty corpus", ValidationError);
    CHECK_THROWS_AS(generate(small(-1, 2, 2)), ValidationError);
    CHECK_THROWS_AS(parse_prevalence_mode("weekly"), ValidationError);
  }

  TEST_CASE("describe_cohorts") {
    const auto& d = describe_cohorts();
    CHECK(d.abusive_families.size() >= 5);
    std::set<std::string> categories;
    for (const auto& f : d.abusive_families) {
      CHECK(f.templates.size() >= 3);
      categories.insert(f.category);
    }
    CHECK(categories.size() >= 5);  // one per high-risk abuse category
    bool spaced_unblock = false;
    for (const auto& f : d.abusive_families)
      for (const auto& t : f.templates) spaced_unblock |= t.find("u.n.b.l.o.c.k") != std::string::npos;
    CHECK(spaced_unblock);
  }

  TEST_CASE("abusive relationships: volume, days, amounts, few replies") {
    auto corpus = generate(small(60, 20, 20));
    auto window = corpus.labels.front().window;
    auto rels = group_relationships(corpus.transactions, window);
    int replies = 0, abusive = 0;
    for (const auto& l : corpus.labels) {
      if (!l.label) continue;
      ++abusive;
      const auto& rel = rels.at(l.key);
      std::set<Date> days;
      for (const auto& t : rel.transactions) {
        days.insert(t.timestamp.date());
        CHECK(t.amount_cents >= 1);
        CHECK(t.amount_cents <= 500);
      }
      CHECK(rel.transactions.size() >= 5);
      CHECK(days.size() >= 2);
      replies += rels.count(l.key.reversed()) > 0;
    }
    CHECK(replies <= abusive / 4);
    for (const auto& t : corpus.transactions) CHECK(window.contains(t.timestamp));
  }

  TEST_CASE("planted separability under reference lexicons") {
    for (std::uint64_t seed : {1ULL, 7ULL, 99ULL}) {
      auto c = small(20, 20, 40);
      c.seed = seed;
      auto corpus = generate(c);
      auto rels = group_relationships(corpus.transactions, c.window);
      ets::ReferenceBackend be;
      auto table = features::build_feature_table(rels, be);
      std::map<RelationshipKey, int> label;
      for (const auto& l : corpus.labels) label[l.key] = l.label;
      double tox_abusive = 0, tox_normal = 0;
      int n_abusive = 0, n_normal = 0;
      for (const auto& row : table.rows) {
        auto it = label.find(row.key);
        if (it == label.end()) continue;
        double tox = 0;
        for (std::size_t i = 16; i < 23; ++i) tox += row.values[i];
        (it->second ? tox_abusive : tox_normal) += tox;
        (it->second ? n_abusive : n_normal)++;
      }
      CHECK(tox_abusive / n_abusive > tox_normal / n_normal);
    }
  }
}
