#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "completion.hpp"
#include "parser.hpp"
#include "sdg.hpp"

namespace sdglens::llm {

// POST {model, prompt, temperature, max_tokens} -> {text, finish_reason}.
class HttpChatBackend final : public ChatBackend {
 public:
  struct Options {
    std::string url;
    std::string api_key_env;  // optional; sent as "Authorization: Bearer <value>"
    std::chrono::milliseconds timeout{30000};
  };

  explicit HttpChatBackend(Options options);
  std::string id() const override { return "http:" + options_.url; }
  BackendReply send(const CompletionRequest& request) override;

 private:
  Options options_;
};

// Keyword rule table driving the offline mock.
struct MockRules {
  struct KeywordRule {
    std::string keyword;  // case-folded phrase, matched on word boundaries
    std::vector<int> sdgs;
    int weight = 1;
  };
  struct RelationRule {
    int first = 0;
    int second = 0;
    std::string contains;
    parse::Relationship relationship = parse::Relationship::kNeutral;
    parse::Directionality directionality = parse::Directionality::kNone;
  };

  std::vector<KeywordRule> keywords;
  std::vector<std::string> negative;
  std::vector<std::string> positive;
  std::vector<RelationRule> relations;

  static MockRules load(const std::filesystem::path& path);
  static MockRules parse(std::string_view json_text);
};

// Deterministic stand-in for a chat model. It recognizes the built-in prompt
// shapes, extracts the paragraph, and answers from the rule table in the
// format each prompt asks for.
class MockBackend final : public ChatBackend {
 public:
  explicit MockBackend(MockRules rules);

  std::string id() const override { return "mock"; }
  BackendReply send(const CompletionRequest& request) override;

  // Rule evaluations, exposed so tests can compute expected answers.
  struct KeywordHit {
    int sdg;
    std::size_t count;
    std::size_t first_position;
    int weight;
    std::string keyword;
  };
  std::vector<KeywordHit> sdg_hits(std::string_view text) const;
  std::set<SdgId> all_sdgs(std::string_view text) const;
  std::vector<int> top_three(std::string_view text, std::string_view variant) const;
  int sentiment(std::string_view text) const;
  parse::SdgAssignment assignment(std::string_view text) const;
  parse::InterlinkageRecord relation(int first, int second, std::string_view text) const;

 private:
  MockRules rules_;
};

// Seeded perturbation of SDG-list answers: with probability p one SDG is
// toggled in the answer. Each (prompt, occurrence) pair gets an independent
// draw, so a given seed always yields the same answers for the same call
// sequence per prompt. Responses that are not SDG lists pass through.
class NoiseBackend final : public ChatBackend {
 public:
  NoiseBackend(std::shared_ptr<ChatBackend> inner, double probability, std::uint64_t seed);

  std::string id() const override { return "noise(" + inner_->id() + ")"; }
  BackendReply send(const CompletionRequest& request) override;

  struct Decision {
    bool flip = false;
    int toggled = 0;  // 1..17 when flip
  };
  static Decision decide(std::uint64_t seed, double probability, std::string_view prompt, std::uint64_t occurrence);
  static std::set<SdgId> apply(std::set<SdgId> sdgs, const Decision& d);

 private:
  std::shared_ptr<ChatBackend> inner_;
  double probability_;
  std::uint64_t seed_;
  std::mutex mutex_;
  std::map<std::string, std::uint64_t> occurrences_;
};

// Helpers for reading the paragraph back out of rendered built-in prompts.
std::string_view extract_single_stage_text(std::string_view prompt);
std::string_view extract_stage1_text(std::string_view prompt);
std::string_view extract_stage2_text(std::string_view prompt);

}  // namespace sdglens::llm
