#include <doctest.h>

#include <cmath>
#include <fstream>
#include <thread>

#include "completion.hpp"
#include "hash.hpp"
#include "support.hpp"

using namespace sdglens;
using namespace sdglens::llm;
using testing::ScriptedBackend;

TEST_SUITE("completion") {
  TEST_CASE("second identical request is served from cache") {
    testing::TempDir tmp;
    auto backend = std::make_shared<ScriptedBackend>(std::vector{ScriptedBackend::reply("SDG 13")});
    auto cache = std::make_shared<ResponseCache>(tmp.path());
    CompletionClient client(backend, "m", cache, testing::instant_options());
    const auto first = client.complete(client.make_request("prompt"));
    const auto second = client.complete(client.make_request("prompt"));
    CHECK_FALSE(first.from_cache);
    CHECK(second.from_cache);
    CHECK(second.raw_text == first.raw_text);
    CHECK(backend->calls() == 1);
    CHECK(client.stats().cache_hits == 1);
    CHECK(client.stats().network_calls == 1);

    CompletionClient fresh(backend, "m", cache, testing::instant_options());
    CHECK(fresh.complete(fresh.make_request("prompt")).from_cache);
    CHECK(fresh.complete(fresh.make_request("prompt"), CachePolicy::kBypass).from_cache == false);
    CHECK(backend->calls() == 2);
  }

  TEST_CASE("cache key covers backend, model, prompt and temperature") {
    CompletionRequest r{"mock", "m", "p", 0.0, 10};
    auto other = r;
    CHECK(ResponseCache::key_for(r) == ResponseCache::key_for(other));
    other.max_output_tokens = 99;
    CHECK(ResponseCache::key_for(r) == ResponseCache::key_for(other));
    for (auto change : {0, 1, 2, 3}) {
      auto x = r;
      if (change == 0) x.backend_id = "other";
      if (change == 1) x.model_name = "other";
      if (change == 2) x.prompt_text = "other";
      if (change == 3) x.temperature = 0.5;
      CHECK(ResponseCache::key_for(r) != ResponseCache::key_for(x));
    }
    const ResponseCache cache("/c");
    CHECK(cache.path_for(r) == std::filesystem::path("/c") / (sha256_hex(ResponseCache::key_for(r)) + ".json"));
  }

  TEST_CASE("429 twice then 200 succeeds on the third attempt") {
    auto backend = std::make_shared<ScriptedBackend>(std::vector{
        ScriptedBackend::status(429), ScriptedBackend::status(429), ScriptedBackend::reply("ok")});
    std::vector<std::chrono::milliseconds> sleeps;
    auto options = testing::instant_options();
    options.sleep = [&](std::chrono::milliseconds d) { sleeps.push_back(d); };
    CompletionClient client(backend, "m", nullptr, options);
    CHECK(client.complete(client.make_request("p")).raw_text == "ok");
    CHECK(backend->calls() == 3);
    CHECK(client.stats().retries == 2);
    CHECK(sleeps.size() == 2);
  }

  TEST_CASE("401 fails immediately") {
    auto backend = std::make_shared<ScriptedBackend>(std::vector{ScriptedBackend::status(401)});
    CompletionClient client(backend, "m", nullptr, testing::instant_options());
    CHECK_THROWS_AS(client.complete(client.make_request("p")), PermanentBackendError);
    CHECK(backend->calls() == 1);
  }

  TEST_CASE("malformed backend json is not retried") {
    auto backend = std::make_shared<ScriptedBackend>(std::vector{ScriptedBackend::malformed()});
    CompletionClient client(backend, "m", nullptr, testing::instant_options());
    CHECK_THROWS_AS(client.complete(client.make_request("p")), MalformedBackendResponse);
    CHECK(backend->calls() == 1);
  }

  TEST_CASE("retries stop after five attempts") {
    auto backend = std::make_shared<ScriptedBackend>(std::vector{ScriptedBackend::status(503)});
    CompletionClient client(backend, "m", nullptr, testing::instant_options());
    CHECK_THROWS_AS(client.complete(client.make_request("p")), RetriesExhausted);
    CHECK(backend->calls() == 5);
    CHECK(client.stats().failures == 1);
  }

  TEST_CASE("backoff grows exponentially with bounded jitter") {
    auto backend = std::make_shared<ScriptedBackend>(std::vector{ScriptedBackend::reply("x")});
    CompletionClient client(backend, "m");
    for (int attempt = 1; attempt <= 6; ++attempt) {
      const auto d = client.backoff_delay(attempt);
      const double full = std::min(250.0 * std::pow(2.0, attempt - 1), 8000.0);
      CHECK(static_cast<double>(d.count()) <= full);
      CHECK(static_cast<double>(d.count()) >= std::floor(full * 0.5));
    }
  }

  TEST_CASE("global in-flight cap") {
    auto backend = std::make_shared<ScriptedBackend>(std::vector{ScriptedBackend::reply("x")},
                                                     std::chrono::milliseconds(20));
    CompletionClient client(backend, "m", nullptr, testing::instant_options(2));
    std::vector<std::thread> threads;
    for (int i = 0; i < 6; ++i) {
      threads.emplace_back([&, i] { client.complete(client.make_request("p" + std::to_string(i))); });
    }
    for (auto& t : threads) t.join();
    CHECK(backend->calls() == 6);
    CHECK(backend->peak_concurrency() <= 2);
    CHECK(client.stats().max_observed_in_flight <= 2);
  }

  TEST_CASE("temperature is validated") {
    auto backend = std::make_shared<ScriptedBackend>(std::vector{ScriptedBackend::reply("x")});
    CompletionClient client(backend, "m");
    CHECK_THROWS_AS(client.set_temperature(2.5), ValidationError);
    client.set_temperature(2.0);
    CHECK(client.make_request("p").temperature == 2.0);
  }

  TEST_CASE("corrupt cache entry is a miss") {
    testing::TempDir tmp;
    auto backend = std::make_shared<ScriptedBackend>(std::vector{ScriptedBackend::reply("fresh")});
    auto cache = std::make_shared<ResponseCache>(tmp.path());
    CompletionClient client(backend, "m", cache, testing::instant_options());
    const auto req = client.make_request("p");
    std::filesystem::create_directories(tmp.path());
    { std::ofstream(cache->path_for(req)) << "{not json"; }
    CHECK(client.complete(req).raw_text == "fresh");
    CHECK(client.complete(req).from_cache);
  }
}
