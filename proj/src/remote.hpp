#pragma once

#include <chrono>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clean.hpp"
#include "sentiment.hpp"
#include "tagger.hpp"

namespace sdglens::remote {

// Adapters for the optional model service: POST /segment, /embed and
// /classify-sentiment under one base URL. Transport failures and non-200
// replies throw Error(kBackend).
struct ServiceOptions {
  std::string base_url;
  std::chrono::milliseconds timeout{30000};
};

class RemoteSegmenter final : public clean::SegmenterBackend {
 public:
  explicit RemoteSegmenter(ServiceOptions options) : options_(std::move(options)) {}
  // {"blocks": [text...]} -> {"merge": [bool...]}, one per adjacent pair.
  std::vector<bool> merge_decisions(std::span<const ingest::TextBlock> blocks) override;

 private:
  ServiceOptions options_;
};

// Cosine between /embed vectors, clamped to [0,1]. Description vectors are
// fetched once per instance.
class RemoteEmbeddingSimilarity final : public tagger::SimilarityBackend {
 public:
  explicit RemoteEmbeddingSimilarity(ServiceOptions options) : options_(std::move(options)) {}
  tagger::Scores score(std::string_view paragraph, std::span<const SdgDescription> descriptions) override;
  std::vector<double> embed(std::string_view text);

 private:
  ServiceOptions options_;
  std::vector<std::vector<double>> description_vectors_;
};

// {"text"} -> {"p0","p1","p2"}; the reply is validated.
class RemoteSentiment final : public sentiment::Classifier {
 public:
  explicit RemoteSentiment(ServiceOptions options) : options_(std::move(options)) {}
  sentiment::Distribution classify(std::string_view text) override;

 private:
  ServiceOptions options_;
};

}  // namespace sdglens::remote
