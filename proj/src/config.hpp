#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace sdglens::config {

enum class Strategy { kSimilarity, kLlm };
std::string_view strategy_name(Strategy s);
Strategy parse_strategy(std::string_view name);  // throws ValidationError

struct NoiseSettings {
  double probability = 0.0;
  std::uint64_t seed = 0;
};

struct BackendSettings {
  std::string kind = "mock";  // mock | http
  std::string url;
  std::string model = "mock-1";
  double temperature = 0.0;
  int max_tokens = 1024;
  int max_in_flight = 4;
  int max_attempts = 5;
  double requests_per_second = 0.0;
  int timeout_ms = 30000;
  std::string api_key_env;
  std::filesystem::path mock_rules;
  std::optional<NoiseSettings> noise;
};

struct RobustnessSettings {
  int runs = 3;
  std::size_t sample_size = 50;
  std::uint64_t seed = 42;
};

struct PipelineConfig {
  std::filesystem::path base_dir;  // directory of the config file
  std::string manifest;            // path or URL
  std::filesystem::path extractor_dir;
  std::optional<std::filesystem::path> caption_keywords;
  std::filesystem::path descriptions;
  Strategy strategy = Strategy::kSimilarity;
  std::optional<BackendSettings> backend;
  std::string segmenter = "heuristic";           // heuristic | remote
  std::string similarity_backend = "tfidf";      // tfidf | remote
  std::string sentiment_backend = "lexicon";     // lexicon | remote
  std::string service_url;                       // model service for the remote adapters
  std::filesystem::path sentiment_lexicon;       // rule file whose sentiment lists feed the lexicon classifier
  std::optional<std::filesystem::path> cache_dir;
  RobustnessSettings robustness;
  std::filesystem::path out;
  std::optional<std::filesystem::path> gold;
  double parse_failure_tolerance = 0.02;
  bool corrected_prompts = false;
};

// Bundled data files: $SDGLENS_DATA_DIR if set, else the build-time default.
std::filesystem::path data_dir();

// Replaces ${NAME} with the environment value; an unset variable is an error.
// "$$" escapes a literal '$'.
std::string interpolate(std::string_view text);

// JSON config; relative paths resolve against `base_dir`.
PipelineConfig parse(std::string_view json_text, const std::filesystem::path& base_dir);
PipelineConfig load(const std::filesystem::path& path);

// Checks cross-field rules and that every input path exists.
void validate(const PipelineConfig& config);

}  // namespace sdglens::config
