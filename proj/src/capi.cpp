#include "sdglens/sdglens.h"

#include <charconv>
#include <cstring>
#include <memory>
#include <string>

#include <json.hpp>

#include "config.hpp"
#include "parser.hpp"
#include "pipeline.hpp"
#include "sentiment.hpp"
#include "tagger.hpp"

using namespace sdglens;
using nlohmann::json;
using nlohmann::ordered_json;

struct sdgl_pipeline {
  std::shared_ptr<Logger> logger = std::make_shared<Logger>();
  std::unique_ptr<pipeline::Pipeline> impl;
  pipeline::Overrides pending;
  bool validated = false;
  std::string last_error;
};

struct sdgl_tagger {
  std::vector<SdgDescription> descriptions;
  tagger::TfidfSimilarity similarity;
  std::string last_error;
};

namespace {

thread_local std::string g_last_error;

sdgl_status status_of(ErrorCode code) { return static_cast<sdgl_status>(static_cast<int>(code)); }

// Runs f, translating exceptions into a status and a message.
template <typename F>
sdgl_status guarded(std::string& error, F&& f) {
  try {
    f();
    error.clear();
    return SDGL_OK;
  } catch (const Error& e) {
    error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    error = "out of memory";
    return SDGL_E_INTERNAL;
  } catch (const std::exception& e) {
    error = e.what();
    return SDGL_E_INTERNAL;
  } catch (...) {
    error = "unknown error";
    return SDGL_E_INTERNAL;
  }
}

template <typename F>
sdgl_status guarded(F&& f) {
  return guarded(g_last_error, std::forward<F>(f));
}

char* dup(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

parse::Mode mode_of(int mode) {
  if (mode != 0 && mode != 1) throw ValidationError("mode must be 0 (strict) or 1 (lenient)");
  return mode == 0 ? parse::Mode::kStrict : parse::Mode::kLenient;
}

ordered_json warnings_json(const std::vector<parse::Warning>& warnings) {
  ordered_json out = ordered_json::array();
  for (const auto& w : warnings) out.push_back({{"rule", w.rule}, {"message", w.message}});
  return out;
}

ordered_json record_json(const parse::InterlinkageRecord& r) {
  return {{"sdg_a", r.sdg_a.value()},
          {"sdg_b", r.sdg_b.value()},
          {"relationship", parse::relationship_name(r.relationship)},
          {"directionality", parse::directionality_name(r.directionality)},
          {"explanation", r.explanation}};
}

json parse_input(const char* text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid JSON: ") + e.what());
  }
}

bool invalid(const void* p) { return p == nullptr; }

}  // namespace

extern "C" {

const char* sdgl_version(void) { return "0.3.0"; }

const char* sdgl_status_name(sdgl_status status) {
  switch (status) {
    case SDGL_OK: return "ok";
    case SDGL_E_VALIDATION: return "validation error";
    case SDGL_E_BACKEND: return "backend error";
    case SDGL_E_PARSE: return "parse error";
    case SDGL_E_IO: return "i/o error";
    case SDGL_E_EMPTY_DOCUMENT: return "empty document";
    case SDGL_E_INTERNAL: return "internal error";
    case SDGL_E_INVALID_ARGUMENT: return "invalid argument";
  }
  return "unknown status";
}

const char* sdgl_last_error(void) { return g_last_error.c_str(); }

void sdgl_string_free(char* s) { std::free(s); }

sdgl_status sdgl_pipeline_open(const char* config_path, sdgl_pipeline** out) {
  if (invalid(config_path) || invalid(out)) return SDGL_E_INVALID_ARGUMENT;
  *out = nullptr;
  auto handle = std::make_unique<sdgl_pipeline>();
  const auto st = guarded([&] {
    handle->impl = std::make_unique<pipeline::Pipeline>(config::load(config_path), handle->logger);
  });
  if (st == SDGL_OK) *out = handle.release();
  return st;
}

void sdgl_pipeline_close(sdgl_pipeline* p) { delete p; }

sdgl_status sdgl_pipeline_set_option(sdgl_pipeline* p, const char* key, const char* value) {
  if (invalid(p) || invalid(key) || invalid(value)) return SDGL_E_INVALID_ARGUMENT;
  return guarded(p->last_error, [&] {
    const std::string k(key), v(value);
    if (k == "strategy") {
      p->pending.strategy = config::parse_strategy(v);
    } else if (k == "backend") {
      if (v != "mock" && v != "http") throw ValidationError("backend must be \"mock\" or \"http\"");
      p->pending.backend = v;
    } else if (k == "seed") {
      std::uint64_t seed = 0;
      const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), seed);
      if (ec != std::errc() || end != v.data() + v.size()) throw ValidationError("seed must be an unsigned integer");
      p->pending.seed = seed;
    } else if (k == "out") {
      if (v.empty()) throw ValidationError("out must not be empty");
      p->pending.out = v;
    } else if (k == "gold") {
      p->pending.gold = v;
    } else {
      throw ValidationError("unknown option \"" + k + "\"");
    }
    p->validated = false;
  });
}

void sdgl_pipeline_set_log(sdgl_pipeline* p, sdgl_log_fn fn, void* user) {
  if (invalid(p)) return;
  if (!fn) {
    p->logger->set_sink(Logger::stderr_sink());
    return;
  }
  p->logger->set_sink([fn, user](std::string_view line) {
    const std::string s(line);
    fn(s.c_str(), user);
  });
}

sdgl_status sdgl_pipeline_run(sdgl_pipeline* p, const char* stage, int* exit_code) {
  if (invalid(p) || invalid(stage)) return SDGL_E_INVALID_ARGUMENT;
  int code = 0;
  const auto st = guarded(p->last_error, [&] {
    if (!p->validated) {
      p->impl->apply(p->pending);
      p->pending = {};
      p->validated = true;
    }
    code = p->impl->run(stage).exit_code;
  });
  if (st != SDGL_OK) {
    code = st == SDGL_E_BACKEND ? 2 : st == SDGL_E_PARSE ? 3 : 1;
    p->logger->error("stage_failed", {{"status", sdgl_status_name(st)}, {"message", p->last_error}});
  }
  if (exit_code) *exit_code = code;
  return st;
}

const char* sdgl_pipeline_last_error(const sdgl_pipeline* p) { return p ? p->last_error.c_str() : ""; }

uint64_t sdgl_pipeline_stat(const sdgl_pipeline* p, const char* name) {
  if (invalid(p) || invalid(name)) return 0;
  const auto& s = p->impl->last_client_stats();
  const std::string n(name);
  if (n == "requests") return s.requests;
  if (n == "cache_hits") return s.cache_hits;
  if (n == "network_calls") return s.network_calls;
  if (n == "retries") return s.retries;
  if (n == "failures") return s.failures;
  return 0;
}

sdgl_status sdgl_parse_assignment(const char* raw, int mode, char** out_json) {
  if (invalid(raw) || invalid(out_json)) return SDGL_E_INVALID_ARGUMENT;
  return guarded([&] {
    const auto parsed = parse::parse_sdg_assignment(raw, mode_of(mode));
    ordered_json j;
    j["main"] = parsed.value.main.value();
    j["main_reason"] = parsed.value.main_reason;
    ordered_json secs = ordered_json::array();
    for (const auto& s : parsed.value.secondaries) secs.push_back({{"sdg", s.sdg.value()}, {"reason", s.reason}});
    j["secondaries"] = std::move(secs);
    j["warnings"] = warnings_json(parsed.warnings);
    *out_json = dup(j.dump());
  });
}

sdgl_status sdgl_parse_interlinkage(const char* raw, int mode, char** out_json) {
  if (invalid(raw) || invalid(out_json)) return SDGL_E_INVALID_ARGUMENT;
  return guarded([&] {
    const auto parsed = parse::parse_interlinkage(raw, mode_of(mode));
    ordered_json records = ordered_json::array();
    for (const auto& r : parsed.value) records.push_back(record_json(r));
    ordered_json j;
    j["records"] = std::move(records);
    j["warnings"] = warnings_json(parsed.warnings);
    *out_json = dup(j.dump());
  });
}

sdgl_status sdgl_parse_sdg_set(const char* raw, int mode, char** out_json) {
  if (invalid(raw) || invalid(out_json)) return SDGL_E_INVALID_ARGUMENT;
  return guarded([&] {
    const auto parsed = parse::parse_sdg_set(raw, mode_of(mode));
    ordered_json sdgs = ordered_json::array();
    for (const auto& s : parsed.value) sdgs.push_back(s.value());
    ordered_json j;
    j["sdgs"] = std::move(sdgs);
    j["warnings"] = warnings_json(parsed.warnings);
    *out_json = dup(j.dump());
  });
}

sdgl_status sdgl_parse_sentiment(const char* raw, int* label) {
  if (invalid(raw) || invalid(label)) return SDGL_E_INVALID_ARGUMENT;
  return guarded([&] { *label = parse::parse_sentiment_label(raw); });
}

sdgl_status sdgl_serialize_assignment(const char* text, char** out_text) {
  if (invalid(text) || invalid(out_text)) return SDGL_E_INVALID_ARGUMENT;
  return guarded([&] {
    const auto j = parse_input(text);
    parse::SdgAssignment a;
    try {
      a.main = SdgId(j.at("main").get<int>());
      a.main_reason = j.value("main_reason", std::string());
      for (const auto& s : j.value("secondaries", json::array())) {
        a.secondaries.push_back({SdgId(s.at("sdg").get<int>()), s.value("reason", std::string())});
      }
    } catch (const json::exception& e) {
      throw ValidationError(std::string("assignment JSON: ") + e.what());
    }
    if (const auto problem = parse::validate(a); !problem.empty()) throw ValidationError(problem);
    *out_text = dup(parse::serialize_assignment(a));
  });
}

sdgl_status sdgl_serialize_interlinkage(const char* text, char** out_text) {
  if (invalid(text) || invalid(out_text)) return SDGL_E_INVALID_ARGUMENT;
  return guarded([&] {
    const auto j = parse_input(text);
    parse::InterlinkageRecord r;
    try {
      r.sdg_a = SdgId(j.at("sdg_a").get<int>());
      r.sdg_b = SdgId(j.at("sdg_b").get<int>());
      r.relationship = parse::relationship_from_name(j.at("relationship").get<std::string>());
      r.directionality = parse::directionality_from_name(j.at("directionality").get<std::string>());
      r.explanation = j.value("explanation", std::string());
    } catch (const json::exception& e) {
      throw ValidationError(std::string("interlinkage JSON: ") + e.what());
    }
    if (const auto problem = parse::validate(r); !problem.empty()) throw ValidationError(problem);
    *out_text = dup(parse::serialize_interlinkage(r));
  });
}

sdgl_status sdgl_expected_sentiment(double p0, double p1, double p2, double* out) {
  if (invalid(out)) return SDGL_E_INVALID_ARGUMENT;
  return guarded([&] { *out = sentiment::expected_sentiment({p0, p1, p2}); });
}

sdgl_status sdgl_tagger_open(const char* descriptions_path, sdgl_tagger** out) {
  if (invalid(out)) return SDGL_E_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded([&] {
    auto t = std::make_unique<sdgl_tagger>();
    t->descriptions = load_descriptions(descriptions_path ? std::filesystem::path(descriptions_path)
                                                          : config::data_dir() / "sdg_descriptions.json");
    *out = t.release();
  });
}

void sdgl_tagger_close(sdgl_tagger* t) { delete t; }

sdgl_status sdgl_tagger_score(sdgl_tagger* t, const char* text, double scores[17], int* best) {
  if (invalid(t) || invalid(text) || invalid(scores) || invalid(best)) return SDGL_E_INVALID_ARGUMENT;
  return guarded(t->last_error, [&] {
    const auto a = tagger::assign_sdg("text", text, t->descriptions, t->similarity);
    for (std::size_t i = 0; i < a.scores.size(); ++i) scores[i] = a.scores[i];
    *best = a.best.value();
  });
}

const char* sdgl_tagger_last_error(const sdgl_tagger* t) { return t ? t->last_error.c_str() : ""; }

}  // extern "C"
