#include "completion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hash.hpp"
#include "io.hpp"

namespace sdglens::llm {

namespace fs = std::filesystem;
using nlohmann::json;

ResponseCache::ResponseCache(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create cache directory " + dir_.string() + ": " + ec.message());
}

std::string ResponseCache::key_for(const CompletionRequest& r) {
  return json::array({r.backend_id, r.model_name, r.prompt_text, r.temperature}).dump();
}

fs::path ResponseCache::path_for(const CompletionRequest& request) const {
  return dir_ / (sha256_hex(key_for(request)) + ".json");
}

std::optional<CompletionResponse> ResponseCache::get(const CompletionRequest& request) const {
  const auto path = path_for(request);
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) return std::nullopt;
  try {
    const auto j = json::parse(io::read_file(path));
    if (j.at("key").get<std::string>() != key_for(request)) return std::nullopt;
    CompletionResponse r;
    r.raw_text = j.at("raw_text").get<std::string>();
    r.finish_reason = j.at("finish_reason").get<std::string>();
    r.latency_ms = j.at("latency_ms").get<std::int64_t>();
    r.from_cache = true;
    return r;
  } catch (const std::exception&) {
    return std::nullopt;  // unreadable entry: treat as a miss and overwrite
  }
}

void ResponseCache::put(const CompletionRequest& request, const CompletionResponse& response) const {
  const json j = {{"key", key_for(request)},
                  {"raw_text", response.raw_text},
                  {"finish_reason", response.finish_reason},
                  {"latency_ms", response.latency_ms}};
  const auto path = path_for(request);
  static std::atomic<std::uint64_t> counter{0};
  std::ostringstream suffix;
  suffix << ".tmp." << std::this_thread::get_id() << "." << counter++;
  fs::path tmp = path;
  tmp += suffix.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write cache entry " + tmp.string());
    out << j.dump(2) << '\n';
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot store cache entry " + path.string());
  }
}

CompletionClient::CompletionClient(std::shared_ptr<ChatBackend> backend, std::string model_name,
                                   std::shared_ptr<const ResponseCache> cache, ClientOptions options)
    : backend_(std::move(backend)),
      model_name_(std::move(model_name)),
      cache_(std::move(cache)),
      options_(std::move(options)),
      jitter_engine_(options_.retry.seed) {
  if (!backend_) throw ValidationError("completion client needs a backend");
  if (options_.max_in_flight < 1) throw ValidationError("max_in_flight must be >= 1");
  if (options_.retry.max_attempts < 1) throw ValidationError("max_attempts must be >= 1");
  if (!options_.sleep) options_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

void CompletionClient::set_temperature(double t) {
  if (!(t >= 0.0 && t <= 2.0)) throw ValidationError("temperature must lie in [0, 2]");
  temperature_ = t;
}

CompletionRequest CompletionClient::make_request(std::string prompt) const {
  CompletionRequest r;
  r.backend_id = backend_->id();
  r.model_name = model_name_;
  r.prompt_text = std::move(prompt);
  r.temperature = temperature_;
  r.max_output_tokens = max_output_tokens_;
  return r;
}

ClientStats CompletionClient::stats() const {
  std::lock_guard lock(mutex_);
  return stats_;
}

std::chrono::milliseconds CompletionClient::backoff_delay(int attempt) {
  const double base = static_cast<double>(options_.retry.base_delay.count()) * std::pow(2.0, attempt - 1);
  const double capped = std::min(base, static_cast<double>(options_.retry.max_delay.count()));
  double factor = 1.0;
  {
    std::lock_guard lock(mutex_);
    factor = 1.0 - options_.retry.jitter * uniform_unit(jitter_engine_);
  }
  return std::chrono::milliseconds(static_cast<std::int64_t>(capped * factor));
}

void CompletionClient::wait_for_rate_slot() {
  if (options_.requests_per_second <= 0.0) return;
  const auto interval = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(1.0 / options_.requests_per_second));
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(mutex_);
    const auto now = std::chrono::steady_clock::now();
    slot = std::max(now, next_slot_);
    next_slot_ = slot + interval;
  }
  const auto wait = slot - std::chrono::steady_clock::now();
  if (wait > std::chrono::steady_clock::duration::zero()) {
    options_.sleep(std::chrono::ceil<std::chrono::milliseconds>(wait));
  }
}

BackendReply CompletionClient::send_limited(const CompletionRequest& request) {
  {
    std::unique_lock lock(mutex_);
    slots_.wait(lock, [&] { return in_flight_ < options_.max_in_flight; });
    ++in_flight_;
    ++stats_.network_calls;
    stats_.max_observed_in_flight = std::max(stats_.max_observed_in_flight, in_flight_);
  }
  struct Release {
    CompletionClient* self;
    ~Release() {
      {
        std::lock_guard lock(self->mutex_);
        --self->in_flight_;
      }
      self->slots_.notify_one();
    }
  } release{this};
  return backend_->send(request);
}

CompletionResponse CompletionClient::complete(const CompletionRequest& request, CachePolicy policy) {
  {
    std::lock_guard lock(mutex_);
    ++stats_.requests;
  }
  const bool use_cache = cache_ && policy == CachePolicy::kUse;
  if (use_cache) {
    if (auto hit = cache_->get(request)) {
      std::lock_guard lock(mutex_);
      ++stats_.cache_hits;
      return *hit;
    }
  }

  std::string last_error;
  for (int attempt = 1; attempt <= options_.retry.max_attempts; ++attempt) {
    if (attempt > 1) {
      {
        std::lock_guard lock(mutex_);
        ++stats_.retries;
      }
      options_.sleep(backoff_delay(attempt - 1));
    }
    wait_for_rate_slot();
    const auto start = std::chrono::steady_clock::now();
    try {
      auto reply = send_limited(request);
      CompletionResponse response;
      response.raw_text = std::move(reply.text);
      response.finish_reason = std::move(reply.finish_reason);
      response.latency_ms =
          std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
      if (use_cache) cache_->put(request, response);
      return response;
    } catch (const TransientBackendError& e) {
      last_error = e.what();
    } catch (const Error&) {
      std::lock_guard lock(mutex_);
      ++stats_.failures;
      throw;
    }
  }
  {
    std::lock_guard lock(mutex_);
    ++stats_.failures;
  }
  throw RetriesExhausted(options_.retry.max_attempts, last_error);
}

}  // namespace sdglens::llm
