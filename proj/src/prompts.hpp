#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sdglens::llm {

enum class TemplateId {
  kVariantDominance,
  kVariantRelevance,
  kVariantProminence,
  kTwoStepSdg,
  kTwoStepSentiment,
  kInterlinkStage1,
  kInterlinkStage2,
};

std::string_view template_id_name(TemplateId id);  // "variant_dominance", ...
std::optional<TemplateId> template_id_from_name(std::string_view name);

// Named values for {text}, {Read_description}, {main_sdg}, {secondary_sdg}.
using Bindings = std::map<std::string, std::string, std::less<>>;

// A prompt body with placeholders. A placeholder is "{name}" or
// "{name[...]}" (the index suffix is ignored); only the four names above are
// allowed, which the constructor enforces.
class PromptTemplate {
 public:
  PromptTemplate(TemplateId id, std::string body);

  TemplateId id() const { return id_; }
  const std::string& body() const { return body_; }
  std::vector<std::string> placeholders() const;

  // Throws ValidationError when a placeholder has no binding.
  std::string render(const Bindings& bindings) const;
  // Bound names that the body never uses; callers log these as warnings.
  std::vector<std::string> unused_bindings(const Bindings& bindings) const;

 private:
  TemplateId id_;
  std::string body_;
};

// The seven built-in prompts. `corrected` fixes two typos in the published
// wording ("if if", and a trade-off example introduced as synergic).
class PromptSet {
 public:
  static PromptSet builtin(bool corrected = false);

  const PromptTemplate& get(TemplateId id) const;
  std::vector<PromptTemplate> variants() const;  // dominance, relevance, prominence

 private:
  std::vector<PromptTemplate> templates_;
};

// Marker preceding the paragraph in single-stage prompts.
inline constexpr std::string_view kTextMarker = "\n\n** Text **:\n";

}  // namespace sdglens::llm
