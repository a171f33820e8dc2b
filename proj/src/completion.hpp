#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "error.hpp"
#include "rng.hpp"

namespace sdglens::llm {

struct CompletionRequest {
  std::string backend_id;
  std::string model_name;
  std::string prompt_text;
  double temperature = 0.0;  // [0, 2]
  int max_output_tokens = 1024;
};

struct CompletionResponse {
  std::string raw_text;
  std::string finish_reason;
  std::int64_t latency_ms = 0;
  bool from_cache = false;
};

struct BackendReply {
  std::string text;
  std::string finish_reason = "stop";
};

// 429, 5xx, timeouts, dropped connections: retried.
class TransientBackendError : public Error {
 public:
  explicit TransientBackendError(const std::string& message) : Error(ErrorCode::kBackend, message) {}
};

// Other 4xx (auth, bad request): never retried.
class PermanentBackendError : public Error {
 public:
  PermanentBackendError(int status, const std::string& message)
      : Error(ErrorCode::kBackend, message), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

class MalformedBackendResponse : public Error {
 public:
  explicit MalformedBackendResponse(const std::string& message) : Error(ErrorCode::kBackend, message) {}
};

class RetriesExhausted : public Error {
 public:
  RetriesExhausted(int attempts, const std::string& last)
      : Error(ErrorCode::kBackend, "backend failed after " + std::to_string(attempts) + " attempts: " + last) {}
};

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual std::string id() const = 0;
  // Must throw one of the three backend error types above on failure.
  virtual BackendReply send(const CompletionRequest& request) = 0;
};

// Content-addressed on-disk cache: <dir>/<sha256(key)>.json. Concurrent
// readers are fine; concurrent writers of one key race benignly (last rename
// wins, values are identical per key).
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);

  static std::string key_for(const CompletionRequest& request);
  std::filesystem::path path_for(const CompletionRequest& request) const;

  std::optional<CompletionResponse> get(const CompletionRequest& request) const;
  void put(const CompletionRequest& request, const CompletionResponse& response) const;

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds base_delay{250};
  std::chrono::milliseconds max_delay{8000};
  double jitter = 0.5;  // delay scaled by a uniform factor in [1 - jitter, 1]
  std::uint64_t seed = 0x5d6c;
};

enum class CachePolicy { kUse, kBypass };

struct ClientOptions {
  RetryPolicy retry;
  int max_in_flight = 4;
  double requests_per_second = 0.0;  // 0 disables the rate limit
  // Injected for tests; defaults to std::this_thread::sleep_for.
  std::function<void(std::chrono::milliseconds)> sleep;
};

struct ClientStats {
  std::uint64_t requests = 0;       // complete() calls
  std::uint64_t cache_hits = 0;
  std::uint64_t network_calls = 0;  // backend send() attempts
  std::uint64_t retries = 0;
  std::uint64_t failures = 0;
  int max_observed_in_flight = 0;
};

class CompletionClient {
 public:
  CompletionClient(std::shared_ptr<ChatBackend> backend, std::string model_name,
                   std::shared_ptr<const ResponseCache> cache = nullptr, ClientOptions options = {});

  // Fills backend id, model, temperature and token limit from the client.
  CompletionRequest make_request(std::string prompt) const;
  CompletionResponse complete(const CompletionRequest& request, CachePolicy policy = CachePolicy::kUse);

  ClientStats stats() const;
  void set_temperature(double t);
  void set_max_output_tokens(int n) { max_output_tokens_ = n; }
  ChatBackend& backend() { return *backend_; }

  std::chrono::milliseconds backoff_delay(int attempt);

 private:
  BackendReply send_limited(const CompletionRequest& request);
  void wait_for_rate_slot();

  std::shared_ptr<ChatBackend> backend_;
  std::string model_name_;
  std::shared_ptr<const ResponseCache> cache_;
  ClientOptions options_;
  double temperature_ = 0.0;
  int max_output_tokens_ = 1024;

  mutable std::mutex mutex_;
  std::condition_variable slots_;
  int in_flight_ = 0;
  ClientStats stats_;
  Engine jitter_engine_;
  std::chrono::steady_clock::time_point next_slot_{};
};

}  // namespace sdglens::llm
