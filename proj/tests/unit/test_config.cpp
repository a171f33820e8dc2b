#include <doctest.h>

#include <cstdlib>

#include "config.hpp"
#include "io.hpp"
#include "support.hpp"

using namespace sdglens;
using namespace sdglens::config;

namespace {

PipelineConfig parse_here(const std::string& json) { return config::parse(json, testing::fixture("e2e")); }

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("environment interpolation") {
    ::setenv("SDGLENS_CFG_TEST", "value", 1);
    CHECK(interpolate("a ${SDGLENS_CFG_TEST} b") == "a value b");
    CHECK(interpolate("$$5 and $plain") == "$5 and $plain");
    ::unsetenv("SDGLENS_CFG_UNSET");
    CHECK_THROWS_AS(interpolate("${SDGLENS_CFG_UNSET}"), ValidationError);
  }

  TEST_CASE("bundled fixture config") {
    const auto c = load(testing::fixture("e2e/config.json"));
    CHECK(c.strategy == Strategy::kLlm);
    REQUIRE(c.backend.has_value());
    CHECK(c.backend->kind == "mock");
    CHECK(c.backend->max_in_flight == 4);
    CHECK(c.manifest == (testing::fixture("e2e") / "manifest.json").lexically_normal().string());
    CHECK(c.cache_dir == c.out / "cache");
    CHECK(c.robustness.sample_size == 50);
    CHECK(c.parse_failure_tolerance == 0.02);
    CHECK_NOTHROW(validate(c));
  }

  TEST_CASE("defaults") {
    const auto c = parse_here(R"({"manifest": "manifest.json", "extractor_dir": "blocks"})");
    CHECK(c.strategy == Strategy::kSimilarity);
    CHECK_FALSE(c.backend.has_value());
    CHECK(c.robustness.runs == 3);
    CHECK(c.robustness.seed == 42);
    CHECK(c.segmenter == "heuristic");
    CHECK(c.descriptions.filename() == "sdg_descriptions.json");
    CHECK_FALSE(c.corrected_prompts);
    const auto nocache = parse_here(R"({"manifest": "manifest.json", "extractor_dir": "blocks", "cache_dir": null})");
    CHECK_FALSE(nocache.cache_dir.has_value());
  }

  TEST_CASE("rejections") {
    CHECK_THROWS_AS(parse_here(R"({"manifest": "m", "extractor_dir": "b", "colour": 1})"), ValidationError);
    CHECK_THROWS_AS(parse_here(R"({"manifest": "m", "extractor_dir": "b", "backend": {"kind": "mock", "x": 1}})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_here(R"({"extractor_dir": "b"})"), ValidationError);
    CHECK_THROWS_AS(parse_here(R"({"manifest": "m", "extractor_dir": "b", "strategy": "magic"})"), ValidationError);
    CHECK_THROWS_AS(parse_here("[1]"), ValidationError);
  }

  TEST_CASE("validation") {
    auto llm_without_backend = parse_here(R"({"manifest": "manifest.json", "extractor_dir": "blocks", "strategy": "llm"})");
    CHECK_THROWS_AS(validate(llm_without_backend), ValidationError);

    const auto bad = [](const std::string& backend) {
      return parse_here(R"({"manifest": "manifest.json", "extractor_dir": "blocks", "backend": )" + backend + "}");
    };
    CHECK_THROWS_AS(validate(bad(R"({"kind": "mock", "max_attempts": 6})")), ValidationError);
    CHECK_THROWS_AS(validate(bad(R"({"kind": "mock", "temperature": 2.5})")), ValidationError);
    CHECK_THROWS_AS(validate(bad(R"({"kind": "http"})")), ValidationError);
    CHECK_NOTHROW(validate(bad(R"({"kind": "http", "url": "http://127.0.0.1:9/x"})")));

    auto missing = parse_here(R"({"manifest": "absent.json", "extractor_dir": "blocks"})");
    CHECK_THROWS_AS(validate(missing), ValidationError);
    auto remote = parse_here(R"({"manifest": "manifest.json", "extractor_dir": "blocks", "segmenter": "remote"})");
    CHECK_THROWS_AS(validate(remote), ValidationError);
    auto small = parse_here(R"({"manifest": "manifest.json", "extractor_dir": "blocks", "robustness": {"sample_size": 1}})");
    CHECK_THROWS_AS(validate(small), ValidationError);
  }
}
