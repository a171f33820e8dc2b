#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "sdg.hpp"
#include "tfidf.hpp"

namespace sdglens::tagger {

using Scores = std::array<double, kSdgCount>;  // index i holds SDG i+1

struct SimilarityAssignment {
  std::string para_id;
  Scores scores{};
  SdgId best;
  double best_score = 0.0;

  friend bool operator==(const SimilarityAssignment&, const SimilarityAssignment&) = default;
};

// Scores one paragraph against the 17 descriptions; every score in [0,1].
class SimilarityBackend {
 public:
  virtual ~SimilarityBackend() = default;
  virtual Scores score(std::string_view paragraph, std::span<const SdgDescription> descriptions) = 0;
};

// TF-IDF over the 17 descriptions plus the paragraph, cosine against each
// description. Description vectors can be scaled uniformly, which exercises
// the scale invariance of the argmax.
class TfidfSimilarity final : public SimilarityBackend {
 public:
  explicit TfidfSimilarity(double description_scale = 1.0) : scale_(description_scale) {}
  Scores score(std::string_view paragraph, std::span<const SdgDescription> descriptions) override;

 private:
  double scale_;
};

class BackendError : public Error {
 public:
  BackendError(std::string para_id, const std::string& message)
      : Error(ErrorCode::kBackend, "similarity backend failed for " + para_id + ": " + message),
        para_id_(std::move(para_id)) {}
  const std::string& para_id() const { return para_id_; }

 private:
  std::string para_id_;
};

// Argmax with ties to the lowest SDG; all-zero scores give SDG 0.
SimilarityAssignment pick_best(std::string para_id, const Scores& scores);

// Wraps backend exceptions into BackendError carrying para_id.
SimilarityAssignment assign_sdg(const std::string& para_id, std::string_view paragraph,
                                std::span<const SdgDescription> descriptions, SimilarityBackend& backend);

std::string to_json_line(const SimilarityAssignment& a, std::string_view doc_id);

}  // namespace sdglens::tagger
