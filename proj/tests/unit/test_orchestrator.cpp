#include <doctest.h>

#include <algorithm>

#include "orchestrator.hpp"
#include "sdg.hpp"
#include "support.hpp"

using namespace sdglens;
using namespace sdglens::llm;
using parse::Directionality;
using parse::Relationship;
using testing::ScriptedBackend;

namespace {

std::string descriptions() {
  return render_descriptions(load_descriptions(testing::data("sdg_descriptions.json")));
}

CompletionClient mock_client(std::shared_ptr<ChatBackend> backend = nullptr) {
  if (!backend) backend = testing::mock_backend();
  return CompletionClient(std::move(backend), "mock-1", nullptr, testing::instant_options());
}

}  // namespace

TEST_SUITE("orchestrator") {
  TEST_CASE("two-step classification with the mock") {
    auto client = mock_client();
    const auto set = PromptSet::builtin();
    const auto r = two_step_classify("The plan scales up renewable energy in every region.", client, set);
    CHECK(r.sdgs == std::set<SdgId>{SdgId(7), SdgId(13)});
    CHECK(r.sentiment == 2);
    CHECK(client.stats().requests == 2);
  }

  TEST_CASE("two-step replies parsed directly") {
    const auto set = PromptSet::builtin();
    auto zero = std::make_shared<ScriptedBackend>(std::vector{ScriptedBackend::reply("0"), ScriptedBackend::reply("1")});
    auto c0 = mock_client(zero);
    const auto r = two_step_classify("Anything.", c0, set);
    CHECK(r.sdgs == std::set<SdgId>{SdgId::none()});
    CHECK(r.sentiment == 1);

    auto mixed = std::make_shared<ScriptedBackend>(
        std::vector{ScriptedBackend::reply("SDG 0, SDG 4"), ScriptedBackend::reply("2")});
    auto c1 = mock_client(mixed);
    const auto m = two_step_classify("Anything.", c1, set);
    CHECK(m.sdgs == std::set<SdgId>{SdgId::none()});
    CHECK(m.warnings.size() == 1);

    auto bad = std::make_shared<ScriptedBackend>(std::vector{ScriptedBackend::reply("no idea")});
    auto c2 = mock_client(bad);
    try {
      two_step_classify("Anything.", c2, set);
      FAIL("expected a response parse error");
    } catch (const ResponseParseError& e) {
      CHECK(e.raw_text() == "no idea");
      CHECK(e.template_id() == TemplateId::kTwoStepSdg);
    }
    CHECK_THROWS_AS(two_step_classify("", c2, set), ValidationError);
  }

  TEST_CASE("interlinkage on the climate and poverty example") {
    auto client = mock_client();
    const auto set = PromptSet::builtin();
    const auto r =
        interlink_extract("Climate change will increase poverty rates by 10% globally.", descriptions(), client, set);
    CHECK(r.assignment.main == SdgId(13));
    REQUIRE(r.assignment.secondaries.size() == 1);
    CHECK(r.assignment.secondaries[0].sdg == SdgId(1));
    CHECK_FALSE(r.assignment.secondaries[0].reason.empty());
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].sdg_a == SdgId(13));
    CHECK(r.records[0].sdg_b == SdgId(1));
    CHECK(r.records[0].relationship == Relationship::kTradeoff);
    CHECK(r.records[0].directionality == Directionality::kOutward);
    CHECK_FALSE(r.partial());
  }

  TEST_CASE("no SDG content means no stage-two calls") {
    auto client = mock_client();
    const auto set = PromptSet::builtin();
    const auto r = interlink_extract("The parliament met on Tuesday.", descriptions(), client, set);
    CHECK(r.assignment.main == SdgId::none());
    CHECK(r.stage2_calls == 0);
    CHECK(client.stats().requests == 1);
  }

  TEST_CASE("one stage-two call per secondary") {
    auto client = mock_client();
    const auto set = PromptSet::builtin();
    const auto r = interlink_extract("Climate change affects water supply, health services and education.",
                                     descriptions(), client, set);
    CHECK(r.assignment.secondaries.size() == 3);
    CHECK(r.stage2_calls == 3);
    CHECK(client.stats().requests == 4);
    CHECK(r.records.size() == 3);
  }

  TEST_CASE("stage-two failures are collected") {
    const std::string stage1 =
        "Main SDG (13): Climate action\nReason main SDG (13): x\n"
        "Secondary SDG (1): No poverty\nReason secondary SDG (1): y\n"
        "Secondary SDG (7): Affordable and clean energy\nReason secondary SDG (7): z";
    auto scripted = std::make_shared<ScriptedBackend>(std::vector{
        ScriptedBackend::reply(stage1),
        ScriptedBackend::reply("- SDG Pair: SDG 13 - SDG 1\n- Relationship: Trade-off\n- Directionality: Outward\n"
                               "- Explanation: e"),
        ScriptedBackend::reply("garbage")});
    auto client = mock_client(scripted);
    const auto r = interlink_extract("text", descriptions(), client, PromptSet::builtin());
    CHECK(r.records.size() == 1);
    REQUIRE(r.failures.size() == 1);
    CHECK(r.failures[0].secondary == SdgId(7));
    CHECK(r.failures[0].raw_text == "garbage");
    CHECK(r.partial());

    const auto prompts = scripted->prompts();
    REQUIRE(prompts.size() == 3);
    CHECK(prompts[1].find("- SDG Pair: SDG SDG 13 - 1\n") != std::string::npos);
    CHECK(prompts[2].find("- SDG Pair: SDG SDG 13 - 7\n") != std::string::npos);
  }

  TEST_CASE("stage-one parse failure aborts") {
    auto scripted = std::make_shared<ScriptedBackend>(std::vector{ScriptedBackend::reply("nothing useful")});
    auto client = mock_client(scripted);
    CHECK_THROWS_AS(interlink_extract("text", descriptions(), client, PromptSet::builtin()), ResponseParseError);
  }

  TEST_CASE("jaccard") {
    CHECK(jaccard({}, {}) == 1.0);
    CHECK(jaccard({SdgId(1)}, {}) == 0.0);
    CHECK(jaccard({SdgId(1), SdgId(2)}, {SdgId(2), SdgId(3)}) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }

  TEST_CASE("run orders are seeded permutations") {
    const auto a = run_order(20, 42, 0, 0);
    auto sorted = a;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) CHECK(sorted[i] == i);
    CHECK(run_order(20, 42, 0, 0) == a);
    CHECK(run_order(20, 42, 0, 1) != a);
    CHECK(run_order(20, 43, 0, 0) != a);
  }

  TEST_CASE("deterministic mock agrees with itself") {
    const auto fx = testing::robustness_fixture();
    auto client = mock_client();
    const auto set = PromptSet::builtin();
    const auto report = run_robustness_protocol(set.variants(), fx.paragraphs, client, 3, 42);
    CHECK_FALSE(report.order_sensitivity);
    for (const auto& v : report.variants) {
      CHECK(v.mean_jaccard == 1.0);
      CHECK(v.exact_match_fraction == 1.0);
      for (double x : v.paragraph_jaccard) CHECK(x == 1.0);
    }
    CHECK(report.requests == 3 * 3 * fx.paragraphs.size());
    CHECK(report.cross_variant[0][1] < 1.0);
    CHECK(report.cross_variant[1][2] == 1.0);
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t b = 0; b < 3; ++b) {
        CHECK(report.cross_variant[a][b] == report.cross_variant[b][a]);
        CHECK((report.cross_variant[a][b] >= 0.0 && report.cross_variant[a][b] <= 1.0));
      }
    }
  }

  TEST_CASE("fixture answers match the mock") {
    const auto fx = testing::robustness_fixture();
    auto mock = testing::mock_backend();
    const auto set = PromptSet::builtin();
    for (std::size_t i = 0; i < fx.paragraphs.size(); ++i) {
      for (const auto& v : set.variants()) {
        CompletionRequest r;
        r.prompt_text = v.render({{"text", fx.paragraphs[i].text}});
        CHECK(mock->send(r).text == fx.answers[i].at(std::string(template_id_name(v.id()))));
      }
    }
  }

  TEST_CASE("seeded noise reproduces the oracle values") {
    const auto fx = testing::robustness_fixture();
    auto noise = std::make_shared<NoiseBackend>(testing::mock_backend(), testing::kNoiseProbability, testing::kNoiseSeed);
    auto client = mock_client(noise);
    const auto set = PromptSet::builtin();
    const auto report = run_robustness_protocol(set.variants(), fx.paragraphs, client, 3, 42);
    REQUIRE(report.variants.size() == 3);
    for (std::size_t v = 0; v < 3; ++v) {
      const auto& want = testing::kNoiseExpected[v];
      CHECK(template_id_name(report.variants[v].variant) == want.variant);
      CHECK(report.variants[v].mean_jaccard == want.mean_jaccard);
      CHECK(report.variants[v].exact_match_fraction == want.exact_match_fraction);
      CHECK(report.variants[v].order_sensitive);
    }
    CHECK(report.order_sensitivity);
    CHECK(report.parse_failures == 0);
  }

  TEST_CASE("unparseable replies count as failures and empty sets") {
    const auto fx = testing::robustness_fixture();
    auto scripted = std::make_shared<ScriptedBackend>(std::vector{ScriptedBackend::reply("no labels")});
    auto client = mock_client(scripted);
    const auto set = PromptSet::builtin();
    const std::vector<PromptTemplate> one{set.variants()[0]};
    const auto report = run_robustness_protocol(one, fx.paragraphs, client, 2, 1);
    CHECK(report.parse_failures == 2 * fx.paragraphs.size());
    CHECK(report.variants[0].mean_jaccard == 1.0);
  }

  TEST_CASE("protocol preconditions") {
    auto client = mock_client();
    const auto set = PromptSet::builtin();
    const std::vector<RobustnessParagraph> one{{"a", "text"}};
    CHECK_THROWS_AS(run_robustness_protocol(set.variants(), one, client, 3, 1), ValidationError);
    CHECK_THROWS_AS(run_robustness_protocol({}, {{"a", "x"}, {"b", "y"}}, client, 3, 1), ValidationError);
  }
}
