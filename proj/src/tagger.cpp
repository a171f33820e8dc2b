#include "tagger.hpp"

#include <json.hpp>

namespace sdglens::tagger {

Scores TfidfSimilarity::score(std::string_view paragraph, std::span<const SdgDescription> descriptions) {
  if (descriptions.size() != kSdgCount) throw ValidationError("expected 17 SDG descriptions");
  std::vector<std::string> corpus;
  corpus.reserve(kSdgCount + 1);
  for (const auto& d : descriptions) corpus.push_back(d.description);
  corpus.emplace_back(paragraph);
  const auto model = TfidfModel::build(corpus);
  const auto& para = model.vector(kSdgCount);

  Scores scores{};
  for (std::size_t i = 0; i < kSdgCount; ++i) {
    const auto target = static_cast<std::size_t>(descriptions[i].sdg.value() - 1);
    const auto& desc = model.vector(i);
    scores[target] = scale_ == 1.0 ? cosine_similarity(para, desc) : cosine_similarity(para, desc.scaled(scale_));
  }
  return scores;
}

SimilarityAssignment pick_best(std::string para_id, const Scores& scores) {
  SimilarityAssignment a;
  a.para_id = std::move(para_id);
  a.scores = scores;
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  a.best_score = scores[best];
  a.best = a.best_score > 0.0 ? SdgId(static_cast<int>(best) + 1) : SdgId::none();
  return a;
}

SimilarityAssignment assign_sdg(const std::string& para_id, std::string_view paragraph,
                                std::span<const SdgDescription> descriptions, SimilarityBackend& backend) {
  Scores scores;
  try {
    scores = backend.score(paragraph, descriptions);
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    throw BackendError(para_id, e.what());
  }
  for (double s : scores) {
    if (!(s >= 0.0 && s <= 1.0)) throw BackendError(para_id, "similarity score outside [0,1]");
  }
  return pick_best(para_id, scores);
}

std::string to_json_line(const SimilarityAssignment& a, std::string_view doc_id) {
  nlohmann::json j = {{"para_id", a.para_id},
                      {"doc_id", doc_id},
                      {"best", a.best.value()},
                      {"best_score", a.best_score},
                      {"scores", a.scores}};
  j["sdgs"] = a.best.value() == 0 ? std::vector<int>{0} : std::vector<int>{a.best.value()};
  return j.dump();
}

}  // namespace sdglens::tagger
