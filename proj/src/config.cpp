#include "config.hpp"

#include <cstdlib>

#include <json.hpp>

#include "error.hpp"
#include "io.hpp"
#include "net.hpp"

#ifndef SDGLENS_DEFAULT_DATA_DIR
#define SDGLENS_DEFAULT_DATA_DIR "data"
#endif

namespace sdglens::config {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view strategy_name(Strategy s) { return s == Strategy::kLlm ? "llm" : "similarity"; }

Strategy parse_strategy(std::string_view name) {
  if (name == "llm") return Strategy::kLlm;
  if (name == "similarity") return Strategy::kSimilarity;
  throw ValidationError("strategy must be \"similarity\" or \"llm\", got \"" + std::string(name) + "\"");
}

fs::path data_dir() {
  if (const char* env = std::getenv("SDGLENS_DATA_DIR"); env && *env) return env;
  return SDGLENS_DEFAULT_DATA_DIR;
}

std::string interpolate(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '$') {
      out += text[i];
      continue;
    }
    if (i + 1 < text.size() && text[i + 1] == '$') {
      out += '$';
      ++i;
      continue;
    }
    if (i + 1 < text.size() && text[i + 1] == '{') {
      const auto close = text.find('}', i + 2);
      if (close == std::string_view::npos) throw ValidationError("unterminated ${ in config value");
      const std::string name(text.substr(i + 2, close - i - 2));
      const char* value = std::getenv(name.c_str());
      if (!value) throw ValidationError("config references unset environment variable " + name);
      out += value;
      i = close;
      continue;
    }
    out += '$';
  }
  return out;
}

namespace {

void interpolate_all(json& j) {
  if (j.is_string()) {
    j = interpolate(j.get<std::string>());
  } else if (j.is_structured()) {
    for (auto& v : j) interpolate_all(v);
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  try {
    return j[key].get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("config key \"") + key + "\" has the wrong type");
  }
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> known, const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || k == key;
    if (!ok) throw ValidationError("unknown config key \"" + where + key + "\"");
  }
}

BackendSettings parse_backend(const json& j, const fs::path& base) {
  if (!j.is_object()) throw ValidationError("config key \"backend\" must be an object");
  reject_unknown(j, {"kind", "url", "model", "temperature", "max_tokens", "max_in_flight", "max_attempts",
                     "requests_per_second", "timeout_ms", "api_key_env", "mock_rules", "noise"},
                 "backend.");
  BackendSettings b;
  b.kind = get_or<std::string>(j, "kind", b.kind);
  b.url = get_or<std::string>(j, "url", "");
  b.model = get_or<std::string>(j, "model", b.model);
  b.temperature = get_or<double>(j, "temperature", b.temperature);
  b.max_tokens = get_or<int>(j, "max_tokens", b.max_tokens);
  b.max_in_flight = get_or<int>(j, "max_in_flight", b.max_in_flight);
  b.max_attempts = get_or<int>(j, "max_attempts", b.max_attempts);
  b.requests_per_second = get_or<double>(j, "requests_per_second", b.requests_per_second);
  b.timeout_ms = get_or<int>(j, "timeout_ms", b.timeout_ms);
  b.api_key_env = get_or<std::string>(j, "api_key_env", "");
  const auto rules = get_or<std::string>(j, "mock_rules", "");
  b.mock_rules = rules.empty() ? data_dir() / "mock_rules.json" : resolve(base, rules);
  if (j.contains("noise") && !j["noise"].is_null()) {
    const auto& n = j["noise"];
    reject_unknown(n, {"probability", "seed"}, "backend.noise.");
    b.noise = NoiseSettings{get_or<double>(n, "probability", 0.0), get_or<std::uint64_t>(n, "seed", 0)};
  }
  return b;
}

}  // namespace

PipelineConfig parse(std::string_view json_text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  reject_unknown(j, {"manifest", "extractor_dir", "caption_keywords", "descriptions", "strategy", "backend",
                     "segmenter", "similarity_backend", "sentiment_backend", "service_url", "sentiment_lexicon",
                     "cache_dir", "robustness", "out", "gold", "parse_failure_tolerance", "corrected_prompts"},
                 "");
  interpolate_all(j);

  PipelineConfig c;
  c.base_dir = base_dir;
  const auto manifest = get_or<std::string>(j, "manifest", "");
  if (manifest.empty()) throw ValidationError("config key \"manifest\" is required");
  c.manifest = net::is_url(manifest) ? manifest : resolve(base_dir, manifest).string();
  const auto extractor = get_or<std::string>(j, "extractor_dir", "");
  if (extractor.empty()) throw ValidationError("config key \"extractor_dir\" is required");
  c.extractor_dir = resolve(base_dir, extractor);
  if (const auto kw = get_or<std::string>(j, "caption_keywords", ""); !kw.empty()) {
    c.caption_keywords = resolve(base_dir, kw);
  }
  const auto desc = get_or<std::string>(j, "descriptions", "");
  c.descriptions = desc.empty() ? data_dir() / "sdg_descriptions.json" : resolve(base_dir, desc);
  c.strategy = parse_strategy(get_or<std::string>(j, "strategy", "similarity"));
  if (j.contains("backend") && !j["backend"].is_null()) c.backend = parse_backend(j["backend"], base_dir);
  c.segmenter = get_or<std::string>(j, "segmenter", c.segmenter);
  c.similarity_backend = get_or<std::string>(j, "similarity_backend", c.similarity_backend);
  c.sentiment_backend = get_or<std::string>(j, "sentiment_backend", c.sentiment_backend);
  c.service_url = get_or<std::string>(j, "service_url", "");
  const auto lexicon = get_or<std::string>(j, "sentiment_lexicon", "");
  c.sentiment_lexicon = lexicon.empty() ? data_dir() / "mock_rules.json" : resolve(base_dir, lexicon);
  const auto out = get_or<std::string>(j, "out", "out");
  c.out = resolve(base_dir, out);
  if (!j.contains("cache_dir")) {
    c.cache_dir = c.out / "cache";
  } else if (!j["cache_dir"].is_null()) {
    const auto cache = get_or<std::string>(j, "cache_dir", "");
    if (!cache.empty()) c.cache_dir = resolve(base_dir, cache);
  }
  if (j.contains("robustness") && !j["robustness"].is_null()) {
    const auto& r = j["robustness"];
    reject_unknown(r, {"runs", "sample_size", "seed"}, "robustness.");
    c.robustness.runs = get_or<int>(r, "runs", c.robustness.runs);
    c.robustness.sample_size = get_or<std::size_t>(r, "sample_size", c.robustness.sample_size);
    c.robustness.seed = get_or<std::uint64_t>(r, "seed", c.robustness.seed);
  }
  if (const auto gold = get_or<std::string>(j, "gold", ""); !gold.empty()) c.gold = resolve(base_dir, gold);
  c.parse_failure_tolerance = get_or<double>(j, "parse_failure_tolerance", c.parse_failure_tolerance);
  c.corrected_prompts = get_or<bool>(j, "corrected_prompts", false);
  return c;
}

PipelineConfig load(const fs::path& path) {
  const auto text = io::read_file(path);
  auto base = path.parent_path();
  if (base.empty()) base = ".";
  return parse(text, fs::absolute(base).lexically_normal());
}

namespace {

void require_file(const fs::path& p, const std::string& what) {
  if (!fs::is_regular_file(p)) throw ValidationError(what + " not found: " + p.string());
}

}  // namespace

void validate(const PipelineConfig& c) {
  if (!net::is_url(c.manifest)) require_file(c.manifest, "manifest");
  if (!fs::is_directory(c.extractor_dir)) throw ValidationError("extractor_dir not found: " + c.extractor_dir.string());
  if (c.caption_keywords) require_file(*c.caption_keywords, "caption keyword list");
  require_file(c.descriptions, "SDG descriptions");
  if (c.gold) require_file(*c.gold, "gold CSV");
  for (const auto& [key, value, a, b] :
       {std::tuple{"segmenter", c.segmenter, "heuristic", "remote"},
        std::tuple{"similarity_backend", c.similarity_backend, "tfidf", "remote"},
        std::tuple{"sentiment_backend", c.sentiment_backend, "lexicon", "remote"}}) {
    if (value != a && value != b) {
      throw ValidationError(std::string("config key \"") + key + "\" must be \"" + a + "\" or \"" + b + "\"");
    }
    if (value == "remote" && !net::is_url(c.service_url)) {
      throw ValidationError(std::string("config key \"") + key + "\" = remote requires service_url");
    }
  }
  if (c.sentiment_backend == "lexicon") require_file(c.sentiment_lexicon, "sentiment lexicon");
  if (c.strategy == Strategy::kLlm && !c.backend) throw ValidationError("strategy llm requires backend settings");
  if (c.backend) {
    const auto& b = *c.backend;
    if (b.kind == "mock") {
      require_file(b.mock_rules, "mock rule table");
    } else if (b.kind == "http") {
      if (!net::is_url(b.url)) throw ValidationError("backend.url must be an http(s) URL");
    } else {
      throw ValidationError("backend.kind must be \"mock\" or \"http\"");
    }
    if (!(b.temperature >= 0.0 && b.temperature <= 2.0)) throw ValidationError("backend.temperature must lie in [0,2]");
    if (b.max_in_flight < 1) throw ValidationError("backend.max_in_flight must be at least 1");
    if (b.max_attempts < 1 || b.max_attempts > 5) throw ValidationError("backend.max_attempts must lie in 1..5");
    if (b.max_tokens < 1) throw ValidationError("backend.max_tokens must be positive");
    if (b.requests_per_second < 0.0) throw ValidationError("backend.requests_per_second must be >= 0");
    if (b.timeout_ms < 1) throw ValidationError("backend.timeout_ms must be positive");
    if (b.noise && !(b.noise->probability >= 0.0 && b.noise->probability <= 1.0)) {
      throw ValidationError("backend.noise.probability must lie in [0,1]");
    }
  }
  if (c.robustness.runs < 1) throw ValidationError("robustness.runs must be at least 1");
  if (c.robustness.sample_size < 2) throw ValidationError("robustness.sample_size must be at least 2");
  if (!(c.parse_failure_tolerance >= 0.0 && c.parse_failure_tolerance <= 1.0)) {
    throw ValidationError("parse_failure_tolerance must lie in [0,1]");
  }
}

}  // namespace sdglens::config
