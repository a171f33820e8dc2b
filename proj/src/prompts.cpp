#include "prompts.hpp"

#include <algorithm>
#include <array>

#include "error.hpp"

namespace sdglens::llm {

namespace {

#include "prompts_text.inc"

constexpr std::array<std::string_view, 4> kPlaceholderNames = {"text", "Read_description", "main_sdg",
                                                               "secondary_sdg"};

bool is_ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

struct Token {
  std::size_t begin;
  std::size_t end;  // one past '}'
  std::string name;
};

// Finds "{ident}" and "{ident[...]}" spans. Braces that do not open an
// identifier are literal text.
std::vector<Token> scan_placeholders(std::string_view body) {
  std::vector<Token> out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] != '{') continue;
    std::size_t j = i + 1;
    while (j < body.size() && is_ident_char(body[j])) ++j;
    if (j == i + 1 || j >= body.size()) continue;
    std::size_t close = j;
    if (body[j] == '[') {
      close = body.find(']', j);
      if (close == std::string_view::npos) continue;
      ++close;
    }
    if (close >= body.size() || body[close] != '}') continue;
    out.push_back({i, close + 1, std::string(body.substr(i + 1, j - i - 1))});
    i = close;
  }
  return out;
}

std::string corrected_sentiment(std::string text) {
  const std::string typo = "Assign 0 if if the";
  if (auto pos = text.find(typo); pos != std::string::npos) text.replace(pos, typo.size(), "Assign 0 if the");
  return text;
}

std::string corrected_stage2(std::string text) {
  // The trade-off definition reuses the synergy sentence.
  const std::string anchor = "**Trade-off:**";
  const std::string wrong = "An example of a synergic relationship";
  if (auto at = text.find(anchor); at != std::string::npos) {
    if (auto pos = text.find(wrong, at); pos != std::string::npos) {
      text.replace(pos, wrong.size(), "An example of a trade-off relationship");
    }
  }
  return text;
}

std::string with_text(std::string_view instruction) {
  return std::string(instruction) + std::string(kTextMarker) + "{text}";
}

}  // namespace

std::string_view template_id_name(TemplateId id) {
  switch (id) {
    case TemplateId::kVariantDominance: return "variant_dominance";
    case TemplateId::kVariantRelevance: return "variant_relevance";
    case TemplateId::kVariantProminence: return "variant_prominence";
    case TemplateId::kTwoStepSdg: return "twostep_sdg";
    case TemplateId::kTwoStepSentiment: return "twostep_sentiment";
    case TemplateId::kInterlinkStage1: return "interlink_stage1";
    case TemplateId::kInterlinkStage2: return "interlink_stage2";
  }
  return "";
}

std::optional<TemplateId> template_id_from_name(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(TemplateId::kInterlinkStage2); ++i) {
    const auto id = static_cast<TemplateId>(i);
    if (template_id_name(id) == name) return id;
  }
  return std::nullopt;
}

PromptTemplate::PromptTemplate(TemplateId id, std::string body) : id_(id), body_(std::move(body)) {
  for (const auto& tok : scan_placeholders(body_)) {
    if (std::find(kPlaceholderNames.begin(), kPlaceholderNames.end(), tok.name) == kPlaceholderNames.end()) {
      throw ValidationError("template " + std::string(template_id_name(id)) + ": unknown placeholder {" + tok.name +
                            "}");
    }
  }
}

std::vector<std::string> PromptTemplate::placeholders() const {
  std::vector<std::string> names;
  for (auto& tok : scan_placeholders(body_)) names.push_back(std::move(tok.name));
  return names;
}

std::string PromptTemplate::render(const Bindings& bindings) const {
  std::string out;
  out.reserve(body_.size());
  std::size_t cursor = 0;
  for (const auto& tok : scan_placeholders(body_)) {
    auto it = bindings.find(tok.name);
    if (it == bindings.end()) {
      throw ValidationError("template " + std::string(template_id_name(id_)) + ": unbound placeholder: " + tok.name);
    }
    out.append(body_, cursor, tok.begin - cursor);
    out += it->second;
    cursor = tok.end;
  }
  out.append(body_, cursor, std::string::npos);
  return out;
}

std::vector<std::string> PromptTemplate::unused_bindings(const Bindings& bindings) const {
  const auto used = placeholders();
  std::vector<std::string> out;
  for (const auto& [name, _] : bindings) {
    if (std::find(used.begin(), used.end(), name) == used.end()) out.push_back(name);
  }
  return out;
}

PromptSet PromptSet::builtin(bool corrected) {
  PromptSet set;
  auto& t = set.templates_;
  t.emplace_back(TemplateId::kVariantDominance, with_text(kDominance));
  t.emplace_back(TemplateId::kVariantRelevance, with_text(kRelevance));
  t.emplace_back(TemplateId::kVariantProminence, with_text(kProminence));
  t.emplace_back(TemplateId::kTwoStepSdg, with_text(kTwoStepSdg));
  std::string sentiment(kTwoStepSentiment);
  std::string stage2(kInterlinkStage2);
  if (corrected) {
    sentiment = corrected_sentiment(std::move(sentiment));
    stage2 = corrected_stage2(std::move(stage2));
  }
  t.emplace_back(TemplateId::kTwoStepSentiment, with_text(sentiment));
  t.emplace_back(TemplateId::kInterlinkStage1, std::string(kInterlinkStage1));
  t.emplace_back(TemplateId::kInterlinkStage2, std::move(stage2));
  return set;
}

const PromptTemplate& PromptSet::get(TemplateId id) const { return templates_.at(static_cast<std::size_t>(id)); }

std::vector<PromptTemplate> PromptSet::variants() const {
  return {get(TemplateId::kVariantDominance), get(TemplateId::kVariantRelevance), get(TemplateId::kVariantProminence)};
}

}  // namespace sdglens::llm
