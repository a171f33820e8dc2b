#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "backends.hpp"
#include "clean.hpp"
#include "completion.hpp"
#include "ingest.hpp"
#include "orchestrator.hpp"
#include "parser.hpp"
#include "rng.hpp"

namespace sdglens::testing {

std::filesystem::path fixture(const std::string& relative);
std::filesystem::path data(const std::string& relative);

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Replays a fixed list of outcomes; once exhausted, keeps returning the last.
class ScriptedBackend final : public llm::ChatBackend {
 public:
  struct Step {
    enum class Kind { kReply, kTransient, kPermanent, kMalformed } kind = Kind::kReply;
    std::string text;
    int status = 200;
  };
  static Step reply(std::string text) { return {Step::Kind::kReply, std::move(text), 200}; }
  static Step status(int code);
  static Step malformed() { return {Step::Kind::kMalformed, {}, 200}; }

  explicit ScriptedBackend(std::vector<Step> steps, std::chrono::milliseconds delay = {})
      : steps_(std::move(steps)), delay_(delay) {}
  std::string id() const override { return "scripted"; }
  llm::BackendReply send(const llm::CompletionRequest& request) override;

  int calls() const { return calls_.load(); }
  int peak_concurrency() const { return peak_.load(); }
  std::vector<std::string> prompts() const;

 private:
  std::vector<Step> steps_;
  std::chrono::milliseconds delay_;
  std::atomic<int> calls_{0};
  std::atomic<int> active_{0};
  std::atomic<int> peak_{0};
  mutable std::mutex mutex_;
  std::vector<std::string> prompts_;
};

// Retry tests must not sleep for real.
llm::ClientOptions instant_options(int max_in_flight = 4);

llm::MockRules mock_rules();
std::shared_ptr<llm::MockBackend> mock_backend();

// Random block lists over a small vocabulary with sentence-like casing and
// punctuation so that merges, captions and repeats all occur.
std::vector<ingest::TextBlock> random_blocks(Engine& engine, std::size_t max_blocks);

// Empty when word conservation, paragraph count and re-clean idempotence hold.
std::string merge_property_violation(const std::vector<ingest::TextBlock>& blocks);

// Empty when the bundled cleaning fixture matches its golden outputs.
std::string golden_cleaning_mismatch();

// Naive tf * ln(N / df) over raw tokens, one map per document.
std::vector<std::map<std::string, double>> brute_force_tfidf(const std::vector<std::vector<std::string>>& docs);

std::vector<std::string> random_corpus(Engine& engine, std::size_t docs, std::size_t min_len, std::size_t max_len);

// Paragraphs built from description vocabulary for argmax checks.
std::vector<std::string> argmax_paragraphs(std::size_t count, std::uint64_t seed);

// Valid records for round-trip checks and byte soup for fuzzing.
parse::InterlinkageRecord random_record(Engine& e);
parse::SdgAssignment random_assignment(Engine& e);
std::string random_bytes(Engine& e);

struct RobustnessFixture {
  std::vector<llm::RobustnessParagraph> paragraphs;
  std::vector<std::map<std::string, std::string>> answers;  // variant name -> mock reply
};
RobustnessFixture robustness_fixture();

// Frozen output of tests/oracles/noise_oracle.py for seed 42, p = 0.1, 3 runs.
struct NoiseExpectation {
  const char* variant;
  double mean_jaccard;
  double exact_match_fraction;
};
inline constexpr std::uint64_t kNoiseSeed = 42;
inline constexpr double kNoiseProbability = 0.1;
inline constexpr NoiseExpectation kNoiseExpected[] = {
    {"variant_dominance", 0.95, 0.85},
    {"variant_relevance", 0.9211111111111111, 0.75},
    {"variant_prominence", 0.9194444444444444, 0.8166666666666667},
};

}  // namespace sdglens::testing
