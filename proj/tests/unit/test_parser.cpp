#include <doctest.h>

#include "parser.hpp"
#include "sdg.hpp"
#include "support.hpp"

using namespace sdglens;
using namespace sdglens::parse;

namespace {

using testing::random_assignment;
using testing::random_bytes;
using testing::random_record;

template <typename F>
bool typed_failure_only(F&& f) {
  try {
    f();
  } catch (const ParseError&) {
  } catch (...) {
    return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("parser") {
  TEST_CASE("assignment examples") {
    const auto a = parse_sdg_assignment(
        "Main SDG (13): Climate action\nReason main SDG (13): the text is about emissions\n"
        "Secondary SDG (7): Affordable and clean energy\nReason secondary SDG (7): mentions solar",
        Mode::kStrict);
    CHECK(a.value.main == SdgId(13));
    CHECK(a.value.secondaries == std::vector<SecondarySdg>{{SdgId(7), "mentions solar"}});

    const auto none = parse_sdg_assignment("Main SDG (0): none", Mode::kStrict);
    CHECK(none.value.main == SdgId::none());
    CHECK(none.value.secondaries.empty());

    CHECK(parse_sdg_assignment("main sdg (13): climate action", Mode::kLenient).value.main == SdgId(13));
    CHECK_THROWS_AS(parse_sdg_assignment("main sdg (13): climate action", Mode::kStrict), ParseError);
  }

  TEST_CASE("assignment lenient tolerances") {
    const auto a = parse_sdg_assignment(
        "* Main SDG 13: Climate action\n\n\n\xe2\x80\xa2 Reason main SDG 13: emissions\n"
        "- secondary sdg (1): No poverty\n- Reason secondary SDG (1): income\n"
        "Secondary SDG (13): Climate action\nReason secondary SDG (13): again",
        Mode::kLenient);
    CHECK(a.value.main == SdgId(13));
    REQUIRE(a.value.secondaries.size() == 1);
    CHECK(a.value.secondaries[0].sdg == SdgId(1));
    CHECK_FALSE(a.warnings.empty());
  }

  TEST_CASE("assignment errors are typed") {
    const auto kind = [](std::string_view raw, Mode mode) {
      try {
        parse_sdg_assignment(raw, mode);
      } catch (const ParseError& e) {
        return e.kind();
      }
      FAIL("expected a parse error");
      return ParseErrorKind::kNoLabel;
    };
    CHECK(kind("nothing here", Mode::kLenient) == ParseErrorKind::kNoMainLine);
    CHECK(kind("Main SDG (18): x\nReason main SDG (18): y", Mode::kStrict) == ParseErrorKind::kOutOfRange);
    CHECK(kind("Main SDG (13): x\nReason main SDG (13): y\nSecondary SDG (7): a\nReason secondary SDG (7): b\n"
               "Secondary SDG (7): a\nReason secondary SDG (7): b",
               Mode::kStrict) == ParseErrorKind::kDuplicateSecondary);
    CHECK(kind("Main SDG (13): x\nReason main SDG (13): y\nSecondary SDG (13): a\nReason secondary SDG (13): b",
               Mode::kStrict) == ParseErrorKind::kMainAsSecondary);
  }

  TEST_CASE("interlinkage examples") {
    const auto r = parse_interlinkage(
        "- SDG Pair: SDG 13 - SDG 1\n- Relationship: Trade-off\n- Directionality: Outward\n"
        "- Explanation: climate change increases poverty",
        Mode::kStrict);
    REQUIRE(r.value.size() == 1);
    CHECK(r.value[0].sdg_a == SdgId(13));
    CHECK(r.value[0].sdg_b == SdgId(1));
    CHECK(r.value[0].relationship == Relationship::kTradeoff);
    CHECK(r.value[0].directionality == Directionality::kOutward);

    const auto n = parse_interlinkage(
        "- SDG Pair: SDG 7 - SDG 9\n- Relationship: Neutral\n- Directionality: Outward\n- Explanation: unclear",
        Mode::kStrict);
    REQUIRE(n.value.size() == 1);
    CHECK(n.value[0].directionality == Directionality::kNone);
    CHECK(n.warnings.size() == 1);

    CHECK(parse_interlinkage("", Mode::kStrict).value.empty());
  }

  TEST_CASE("worked directionality examples in the template's output format") {
    struct Case {
      const char* reply;
      int a, b;
      Directionality d;
    };
    const Case cases[] = {
        {"- SDG Pair: SDG SDG 13 - 1\n- Relationship: Trade-off\n- Directionality: Outward\n"
         "- Explanation: \"Climate change will increase poverty rates by 10% globally\"",
         13, 1, Directionality::kOutward},
        {"- SDG Pair: SDG SDG 1 - 13\n- Relationship: Trade-off\n- Directionality: Inward\n"
         "- Explanation: \"Climate change will increase poverty rates by 10% globally\"",
         1, 13, Directionality::kInward},
        {"- SDG Pair: SDG SDG 13 - 1\n- Relationship: Trade-off\n- Directionality: Both\n"
         "- Explanation: \"Climate change and poverty rates will increase by 10% globally\"",
         13, 1, Directionality::kBoth},
    };
    for (const auto& c : cases) {
      const auto r = parse_interlinkage(c.reply, Mode::kLenient);
      REQUIRE(r.value.size() == 1);
      CHECK(r.value[0].sdg_a == SdgId(c.a));
      CHECK(r.value[0].sdg_b == SdgId(c.b));
      CHECK(r.value[0].relationship == Relationship::kTradeoff);
      CHECK(r.value[0].directionality == c.d);
    }
  }

  TEST_CASE("interlinkage errors") {
    CHECK_THROWS_AS(parse_interlinkage("- SDG Pair: SDG 13 - SDG 1\n- Relationship: Trade-off\n- Explanation: x",
                                       Mode::kLenient),
                    ParseError);
    CHECK_THROWS_AS(parse_interlinkage("- SDG Pair: SDG 13 - SDG 13\n- Relationship: Synergy\n"
                                       "- Directionality: Both\n- Explanation: x",
                                       Mode::kLenient),
                    ParseError);
    CHECK_THROWS_AS(parse_interlinkage("- SDG Pair: SDG 13 - SDG 1\n- Relationship: Friendly\n"
                                       "- Directionality: Both\n- Explanation: x",
                                       Mode::kLenient),
                    ParseError);
  }

  TEST_CASE("enum surface forms are exhaustive and unambiguous") {
    for (const auto& [form, value] : relationship_surface_forms()) {
      const std::string raw = "- SDG Pair: SDG 2 - SDG 3\n- Relationship: " + std::string(form) +
                              "\n- Directionality: Both\n- Explanation: x";
      const auto r = parse_interlinkage(raw, Mode::kLenient);
      REQUIRE(r.value.size() == 1);
      CHECK(r.value[0].relationship == value);
    }
    for (const char* f : {"Trade-off", "tradeoff", "trade off", "TRADE-OFF"}) {
      const std::string raw = "- SDG Pair: SDG 2 - SDG 3\n- Relationship: " + std::string(f) +
                              "\n- Directionality: Both\n- Explanation: x";
      CHECK(parse_interlinkage(raw, Mode::kLenient).value.at(0).relationship == Relationship::kTradeoff);
    }
    for (const auto& [form, value] : directionality_surface_forms()) {
      const std::string raw = "- SDG Pair: SDG 2 - SDG 3\n- Relationship: Synergy\n- Directionality: " +
                              std::string(form) + "\n- Explanation: x";
      if (value == Directionality::kNone) continue;  // rejected for a synergy
      CHECK(parse_interlinkage(raw, Mode::kLenient).value.at(0).directionality == value);
    }
  }

  TEST_CASE("sentiment labels") {
    CHECK(parse_sentiment_label("2") == 2);
    CHECK(parse_sentiment_label("The paragraph is neutral: 1") == 1);
    CHECK(parse_sentiment_label("2.5 percent, class 0") == 0);
    CHECK_THROWS_AS(parse_sentiment_label("0 or maybe 2"), ParseError);
    CHECK_THROWS_AS(parse_sentiment_label("none"), ParseError);
  }

  TEST_CASE("sdg sets") {
    CHECK(parse_sdg_set("SDG 7, SDG 13", Mode::kStrict).value == std::set<SdgId>{SdgId(7), SdgId(13)});
    CHECK(parse_sdg_set("0", Mode::kStrict).value == std::set<SdgId>{SdgId::none()});
    CHECK(parse_sdg_set("SDGs 7 and 13.", Mode::kLenient).value == std::set<SdgId>{SdgId(7), SdgId(13)});
    CHECK_THROWS_AS(parse_sdg_set("SDG 19", Mode::kLenient), ParseError);
  }

  TEST_CASE("canonical forms") {
    SdgAssignment zero;
    CHECK(serialize_assignment(zero) == "Main SDG (0): Not relevant\nReason main SDG (0): -");
    CHECK(parse_sdg_assignment(serialize_assignment(zero), Mode::kStrict).value == zero);

    InterlinkageRecord r{SdgId(7), SdgId(9), Relationship::kSynergy, Directionality::kBoth, "grid investment"};
    const auto back = parse_interlinkage(serialize_interlinkage(r), Mode::kStrict).value;
    REQUIRE(back.size() == 1);
    CHECK(back[0] == r);
  }

  TEST_CASE("round trip on 1000 generated records") {
    Engine e(1000);
    std::vector<InterlinkageRecord> all;
    for (int i = 0; i < 1000; ++i) {
      const auto r = random_record(e);
      REQUIRE(validate(r) == "");
      const auto back = parse_interlinkage(serialize_interlinkage(r), Mode::kStrict).value;
      REQUIRE(back.size() == 1);
      CHECK(back[0] == r);
      all.push_back(r);

      const auto a = random_assignment(e);
      REQUIRE(validate(a) == "");
      CHECK(parse_sdg_assignment(serialize_assignment(a), Mode::kStrict).value == a);
    }
    CHECK(parse_interlinkage(serialize_interlinkages(all), Mode::kStrict).value == all);
  }

  TEST_CASE("strict acceptance implies the same lenient result") {
    Engine e(55);
    for (int i = 0; i < 500; ++i) {
      const auto text = serialize_assignment(random_assignment(e));
      CHECK(parse_sdg_assignment(text, Mode::kLenient).value == parse_sdg_assignment(text, Mode::kStrict).value);
      const auto rec = serialize_interlinkage(random_record(e));
      CHECK(parse_interlinkage(rec, Mode::kLenient).value == parse_interlinkage(rec, Mode::kStrict).value);
    }
  }

  TEST_CASE("fuzz: arbitrary bytes fail only with typed errors") {
    Engine e(424242);
    int untyped = 0;
    for (int i = 0; i < 10000; ++i) {
      const auto raw = random_bytes(e);
      for (auto mode : {Mode::kStrict, Mode::kLenient}) {
        untyped += !typed_failure_only([&] { parse_sdg_assignment(raw, mode); });
        untyped += !typed_failure_only([&] { parse_interlinkage(raw, mode); });
        untyped += !typed_failure_only([&] { parse_sdg_set(raw, mode); });
      }
      untyped += !typed_failure_only([&] { parse_sentiment_label(raw); });
    }
    CHECK(untyped == 0);
  }
}
