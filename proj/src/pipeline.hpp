#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "completion.hpp"
#include "config.hpp"
#include "log.hpp"

namespace sdglens::pipeline {

inline constexpr std::array<std::string_view, 8> kStages{"ingest",     "clean",      "tag",  "sentiment",
                                                          "interlink", "robustness", "eval", "report"};

// Exit code for a stage whose parse-failure fraction exceeded the tolerance.
inline constexpr int kExitParseTolerance = 3;

struct Overrides {
  std::optional<config::Strategy> strategy;
  std::optional<std::string> backend;  // mock | http
  std::optional<std::uint64_t> seed;   // robustness shuffle and noise seed
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> gold;
};

struct StageOutcome {
  int exit_code = 0;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
};

// Output files, relative to the output directory.
namespace files {
inline constexpr std::string_view kCorpus = "corpus.json";
inline constexpr std::string_view kIngestReport = "ingest_report.json";
inline constexpr std::string_view kBlocksDir = "blocks";
inline constexpr std::string_view kParagraphs = "paragraphs.jsonl";
inline constexpr std::string_view kCleaningReport = "cleaning_report.json";
inline constexpr std::string_view kInterlinkages = "interlinkages.jsonl";
inline constexpr std::string_view kRobustness = "robustness.json";
inline constexpr std::string_view kReportDir = "report";
std::string tags(config::Strategy s);       // tags_<strategy>.jsonl
std::string sentiment(config::Strategy s);  // sentiment_<strategy>.jsonl
std::string eval(config::Strategy s);       // eval_<strategy>.json
}  // namespace files

class Pipeline {
 public:
  Pipeline(config::PipelineConfig config, std::shared_ptr<Logger> logger);

  // Applies overrides, then validates the resulting config.
  void apply(const Overrides& overrides);

  // Throws sdglens::Error subclasses; exit-code 3 is reported in the outcome
  // because the stage's outputs are still written.
  StageOutcome run(std::string_view stage);

  const config::PipelineConfig& config() const { return config_; }
  // Client counters of the most recent LLM stage.
  const llm::ClientStats& last_client_stats() const { return last_stats_; }

 private:
  StageOutcome ingest();
  StageOutcome clean();
  StageOutcome tag();
  StageOutcome sentiment();
  StageOutcome interlink();
  StageOutcome robustness();
  StageOutcome eval();
  StageOutcome report();

  std::unique_ptr<llm::CompletionClient> make_client() const;
  std::filesystem::path out(std::string_view name) const;

  config::PipelineConfig config_;
  std::shared_ptr<Logger> log_;
  llm::ClientStats last_stats_;
};

}  // namespace sdglens::pipeline
