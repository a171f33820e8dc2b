#include "remote.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "net.hpp"

namespace sdglens::remote {

using nlohmann::json;

namespace {

json call(const ServiceOptions& options, std::string_view endpoint, const json& body) {
  const auto url = options.base_url + std::string(endpoint);
  const auto res = net::post_json(url, body.dump(), options.timeout);
  if (!res.transport_ok) throw Error(ErrorCode::kBackend, url + ": " + res.error);
  if (res.status != 200) throw Error(ErrorCode::kBackend, url + ": HTTP " + std::to_string(res.status));
  try {
    return json::parse(res.body);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kBackend, url + ": malformed JSON: " + e.what());
  }
}

}  // namespace

std::vector<bool> RemoteSegmenter::merge_decisions(std::span<const ingest::TextBlock> blocks) {
  json texts = json::array();
  for (const auto& b : blocks) texts.push_back(b.text);
  const auto reply = call(options_, "/segment", {{"blocks", texts}});
  try {
    auto merge = reply.at("merge").get<std::vector<bool>>();
    if (merge.size() + 1 != std::max<std::size_t>(blocks.size(), 1)) {
      throw Error(ErrorCode::kBackend, "/segment returned " + std::to_string(merge.size()) + " decisions for " +
                                           std::to_string(blocks.size()) + " blocks");
    }
    return merge;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kBackend, std::string("/segment: ") + e.what());
  }
}

std::vector<double> RemoteEmbeddingSimilarity::embed(std::string_view text) {
  const auto reply = call(options_, "/embed", {{"text", std::string(text)}});
  try {
    return reply.at("vector").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kBackend, std::string("/embed: ") + e.what());
  }
}

tagger::Scores RemoteEmbeddingSimilarity::score(std::string_view paragraph,
                                                std::span<const SdgDescription> descriptions) {
  if (descriptions.size() != kSdgCount) throw ValidationError("expected 17 SDG descriptions");
  if (description_vectors_.empty()) {
    for (const auto& d : descriptions) description_vectors_.push_back(embed(d.description));
  }
  const auto para = embed(paragraph);
  tagger::Scores scores{};
  for (std::size_t i = 0; i < kSdgCount; ++i) {
    const auto& v = description_vectors_[i];
    if (v.size() != para.size()) throw Error(ErrorCode::kBackend, "/embed dimension changed between calls");
    const auto target = static_cast<std::size_t>(descriptions[i].sdg.value() - 1);
    scores[target] = tagger::cosine_similarity(std::span<const double>(para), std::span<const double>(v));
  }
  return scores;
}

sentiment::Distribution RemoteSentiment::classify(std::string_view text) {
  const auto reply = call(options_, "/classify-sentiment", {{"text", std::string(text)}});
  sentiment::Distribution d;
  try {
    d = {reply.at("p0").get<double>(), reply.at("p1").get<double>(), reply.at("p2").get<double>()};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kBackend, std::string("/classify-sentiment: ") + e.what());
  }
  // The service guarantees normalization to 1e-6; renormalize the residue.
  const double sum = d.p0 + d.p1 + d.p2;
  if (!(sum > 0.0) || std::abs(sum - 1.0) > 1e-6) {
    throw Error(ErrorCode::kBackend, "/classify-sentiment: probabilities do not sum to 1");
  }
  d = {d.p0 / sum, d.p1 / sum, 0.0};
  d.p2 = std::max(0.0, 1.0 - d.p0 - d.p1);
  sentiment::validate(d);
  return d;
}

}  // namespace sdglens::remote
