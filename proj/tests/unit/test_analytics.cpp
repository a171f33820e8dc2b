#include <doctest.h>

#include <cmath>

#include "analytics.hpp"
#include "io.hpp"
#include "sdg.hpp"
#include "support.hpp"

using namespace sdglens;
using namespace sdglens::analytics;
using parse::Directionality;
using parse::InterlinkageRecord;
using parse::Relationship;

namespace {

std::map<std::string, double> naive_z(const std::map<std::string, double>& m) {
  double mean = 0.0;
  for (const auto& [_, v] : m) mean += v;
  mean /= static_cast<double>(m.size());
  double var = 0.0;
  for (const auto& [_, v] : m) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(m.size()));
  std::map<std::string, double> out;
  for (const auto& [k, v] : m) out[k] = sd == 0.0 ? 0.0 : (v - mean) / sd;
  return out;
}

std::set<SdgId> ids(std::initializer_list<int> v) {
  std::set<SdgId> s;
  for (int x : v) s.insert(SdgId(x));
  return s;
}

}  // namespace

TEST_SUITE("analytics") {
  TEST_CASE("z-score examples") {
    const auto z = country_zscores({{"A", 1.0}, {"B", 2.0}});
    CHECK(z.at("A") == -1.0);
    CHECK(z.at("B") == 1.0);
    CHECK(country_zscores({{"X", 1.7}}).at("X") == 0.0);
    CHECK(country_zscores({{"X", 1.0}, {"Y", 1.0}}).at("Y") == 0.0);
    CHECK_THROWS_AS(country_zscores({}), ValidationError);
  }

  TEST_CASE("z-scores match a two-pass oracle and are translation invariant") {
    Engine e(10);
    for (int trial = 0; trial < 50; ++trial) {
      std::map<std::string, double> m;
      for (int c = 0; c < 10; ++c) m["C" + std::to_string(c)] = 2.0 * uniform_unit(e);
      const auto z = country_zscores(m);
      const auto want = naive_z(m);
      double mean = 0.0, sq = 0.0;
      for (const auto& [k, v] : z) {
        CHECK(std::abs(v - want.at(k)) < 1e-12);
        mean += v;
        sq += v * v;
      }
      CHECK(std::abs(mean / 10.0) < 1e-9);
      CHECK(std::abs(std::sqrt(sq / 10.0) - 1.0) < 1e-9);

      auto shifted = m;
      for (auto& [_, v] : shifted) v += 0.37;
      const auto zs = country_zscores(shifted);
      for (const auto& [k, v] : z) CHECK(std::abs(zs.at(k) - v) < 1e-12);
    }
  }

  TEST_CASE("country scores average paragraphs") {
    const auto s = country_scores({{"AND", 1.0}, {"AND", 2.0}, {"KEN", 0.5}});
    REQUIRE(s.size() == 2);
    CHECK(s[0].country == "AND");
    CHECK(s[0].mean_sentiment == 1.5);
    CHECK(s[0].n_paragraphs == 2);
    CHECK(s[0].z == 1.0);
    CHECK(s[1].z == -1.0);
  }

  TEST_CASE("categories partition the goals") {
    const std::set<int> env{6, 13, 14, 15}, soc{1, 2, 3, 4, 5, 7, 11, 16, 17}, eco{8, 9, 10, 12};
    for (int g = 1; g <= 17; ++g) {
      const auto c = category_of(SdgId(g));
      const int hits = env.count(g) + soc.count(g) + eco.count(g);
      CHECK(hits == 1);
      if (env.count(g)) CHECK(c == SdgCategory::kEnvironment);
      if (soc.count(g)) CHECK(c == SdgCategory::kSociety);
      if (eco.count(g)) CHECK(c == SdgCategory::kEconomy);
    }
  }

  TEST_CASE("category share examples") {
    const auto shares = category_shares({{"A", SdgId(13)}, {"A", SdgId(14)}, {"B", SdgId(8)}, {"B", SdgId(9)},
                                         {"B", SdgId(10)}, {"B", SdgId(12)}, {"C", SdgId(17)}, {"D", SdgId(1)},
                                         {"D", SdgId(6)}, {"D", SdgId(8)}});
    CHECK(shares.at("A").environment == 1.0);
    CHECK(shares.at("B").economy == 1.0);
    CHECK(shares.at("C").society == 1.0);
    const auto& d = shares.at("D");
    CHECK(std::abs(d.environment + d.society + d.economy - 1.0) < 1e-9);
    CHECK(d.n == 3);
    CHECK_THROWS_AS(category_shares({{"A", SdgId::none()}}), ValidationError);
  }

  TEST_CASE("match rate arithmetic") {
    LabelMap gold, pred;
    for (int i = 0; i < 10; ++i) {
      const auto key = "item" + std::to_string(i);
      gold[key] = ids({i + 1});
      pred[key] = i < 8 ? ids({i + 1}) : ids({16});
    }
    const auto r = match_rate(pred, gold);
    CHECK(r.match_rate == 0.8);
    CHECK(r.n_items == 10);
    CHECK(match_rate(gold, gold).match_rate == 1.0);

    LabelMap disjoint;
    for (const auto& [k, _] : gold) disjoint[k] = ids({17});
    CHECK(match_rate(disjoint, gold).match_rate == 0.0);
  }

  TEST_CASE("bias direction for over- and under-prediction") {
    LabelMap gold, pred;
    for (int i = 0; i < 6; ++i) {
      const auto key = "k" + std::to_string(i);
      gold[key] = i < 3 ? ids({17}) : ids({13});
      pred[key] = i < 3 ? ids({1}) : ids({13, 1});
    }
    const auto r = match_rate(pred, gold);
    CHECK(r.per_sdg[0].bias > 0);
    CHECK(r.per_sdg[16].bias < 0);
    CHECK(r.per_sdg[16].recall == 0.0);
    CHECK_FALSE(r.per_sdg[1].recall.has_value());

    LabelMap g17{{"a", ids({2})}}, p17{{"a", ids({2, 17})}};
    for (int i = 0; i < 4; ++i) {
      g17["x" + std::to_string(i)] = ids({2});
      p17["x" + std::to_string(i)] = ids({17});
    }
    CHECK(match_rate(p17, g17).per_sdg[16].bias == 5);
  }

  TEST_CASE("match rate rejects malformed inputs") {
    CHECK_THROWS_AS(match_rate({{"a", ids({1})}}, {{"b", ids({1})}}), ValidationError);
    CHECK_THROWS_AS(match_rate({{"a", ids({1})}}, {{"a", ids({})}}), ValidationError);
    CHECK_THROWS_AS(match_rate({{"a", ids({1})}}, {{"a", ids({1, 2, 3})}}), ValidationError);
  }

  TEST_CASE("gold csv") {
    const auto g = parse_gold_csv("item_id,sdg_a,sdg_b,type\r\nA,13,SDG 1,tradeoff\r\nB,13.2,,\r\nC,7,13,synergy\r\n");
    CHECK(g.labels.at("A") == ids({1, 13}));
    CHECK(g.labels.at("B") == ids({13}));
    CHECK(g.coarsened == 1);
    CHECK(g.type.at("C") == "synergy");
    CHECK_THROWS_AS(parse_gold_csv("id,a\r\n"), ValidationError);
    CHECK_THROWS_AS(parse_gold_csv("item_id,sdg_a,sdg_b,type\r\nA,13,1,friendly\r\n"), ValidationError);
    CHECK(load_gold_csv(testing::fixture("e2e/gold.csv")).labels.size() == 9);
  }

  TEST_CASE("graph edges by directionality") {
    auto g = build_interlinkage_graph(
        {{SdgId(13), SdgId(1), Relationship::kTradeoff, Directionality::kOutward, ""}});
    CHECK(g.weight(13, 1, Relationship::kTradeoff) == 1);
    CHECK(g.weight(1, 13, Relationship::kTradeoff) == 0);
    CHECK(edges_csv(g) == "a,b,relationship,weight\r\n13,1,tradeoff,1\r\n");

    g.add({SdgId(13), SdgId(1), Relationship::kSynergy, Directionality::kBoth, ""});
    CHECK(g.weight(13, 1, Relationship::kSynergy) == 1);
    CHECK(g.weight(1, 13, Relationship::kSynergy) == 1);
    g.add({SdgId(2), SdgId(5), Relationship::kTradeoff, Directionality::kInward, ""});
    CHECK(g.weight(5, 2, Relationship::kTradeoff) == 1);
    g.add({SdgId(3), SdgId(4), Relationship::kNeutral, Directionality::kNone, ""});
    CHECK(g.neutral_count(4, 3) == 1);
    CHECK(g.total_weight() == 4);
  }

  TEST_CASE("graph weight conservation over random records") {
    Engine e(100);
    std::vector<InterlinkageRecord> records;
    std::size_t expected = 0;
    for (int i = 0; i < 100; ++i) {
      InterlinkageRecord r;
      const int a = static_cast<int>(uniform_below(e, 17)) + 1;
      int b = static_cast<int>(uniform_below(e, 16)) + 1;
      if (b >= a) ++b;
      r.sdg_a = SdgId(a);
      r.sdg_b = SdgId(b);
      r.relationship = static_cast<Relationship>(uniform_below(e, 3));
      r.directionality = r.relationship == Relationship::kNeutral ? Directionality::kNone
                                                                  : static_cast<Directionality>(uniform_below(e, 3));
      expected += r.relationship == Relationship::kNeutral ? 0 : r.directionality == Directionality::kBoth ? 2 : 1;
      records.push_back(r);
    }
    const auto g = build_interlinkage_graph(records);
    CHECK(g.total_weight() == expected);
    std::size_t from_edges = 0;
    for (const auto& edge : g.edges()) from_edges += edge.weight;
    CHECK(from_edges == expected);
  }

  TEST_CASE("empty corpus exports headers only") {
    testing::TempDir tmp;
    export_report(tmp.path(), ReportInputs{});
    CHECK(io::read_file(tmp / "country_zscores.csv") == "country,mean_sentiment,z,n_paragraphs\r\n");
    CHECK(io::read_file(tmp / "category_shares.csv") == "country,environment,society,economy,n_assignments\r\n");
    CHECK(io::read_file(tmp / "interlinkage_edges.csv") == "a,b,relationship,weight\r\n");
    CHECK(io::read_file(tmp / "sdg_bias.csv") == "sdg,gold_count,predicted_count,recall,bias\r\n");
    CHECK(std::filesystem::exists(tmp / "report.json"));
  }
}
