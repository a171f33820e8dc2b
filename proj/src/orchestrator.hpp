#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "completion.hpp"
#include "parser.hpp"
#include "prompts.hpp"
#include "sdg.hpp"

namespace sdglens::llm {

// A model answer that neither strict nor lenient parsing accepted.
class ResponseParseError : public Error {
 public:
  ResponseParseError(TemplateId tmpl, const std::string& message, std::string raw_text)
      : Error(ErrorCode::kParse, std::string(template_id_name(tmpl)) + ": " + message),
        tmpl_(tmpl),
        raw_text_(std::move(raw_text)) {}
  TemplateId template_id() const { return tmpl_; }
  const std::string& raw_text() const { return raw_text_; }

 private:
  TemplateId tmpl_;
  std::string raw_text_;
};

// Strict first, then lenient. A set containing 0 collapses to {0}; an empty
// set is a parse failure.
parse::Parsed<std::set<SdgId>> parse_label_set(std::string_view raw, TemplateId tmpl);

struct TwoStepResult {
  std::set<SdgId> sdgs;
  int sentiment = 1;
  std::vector<parse::Warning> warnings;
};

TwoStepResult two_step_classify(std::string_view paragraph, CompletionClient& client, const PromptSet& prompts,
                                CachePolicy policy = CachePolicy::kUse);

struct PairFailure {
  SdgId secondary;
  std::string message;
  std::string raw_text;
};

struct InterlinkResult {
  parse::SdgAssignment assignment;
  std::vector<parse::InterlinkageRecord> records;
  std::vector<PairFailure> failures;
  std::vector<parse::Warning> warnings;
  std::size_t stage2_calls = 0;
  bool partial() const { return !failures.empty(); }
};

// Stage 1 assigns main and secondary SDGs; stage 2 runs once per
// (main, secondary) pair. Stage-1 failures throw ResponseParseError; stage-2
// failures are collected per pair.
InterlinkResult interlink_extract(std::string_view text, std::string_view descriptions, CompletionClient& client,
                                  const PromptSet& prompts, CachePolicy policy = CachePolicy::kUse);

// SDG-set agreement between two label sets; two empty sets agree fully.
double jaccard(const std::set<SdgId>& a, const std::set<SdgId>& b);

struct VariantAgreement {
  TemplateId variant;
  std::vector<double> paragraph_jaccard;  // mean over run pairs, per paragraph
  std::vector<double> paragraph_exact;    // fraction of run pairs with identical sets
  double mean_jaccard = 1.0;
  double exact_match_fraction = 1.0;
  bool order_sensitive = false;
  // labels[run][paragraph], paragraphs in input order.
  std::vector<std::vector<std::set<SdgId>>> labels;
};

struct AgreementReport {
  std::vector<std::string> para_ids;
  std::vector<VariantAgreement> variants;
  // cross_variant[i][j]: mean Jaccard over all run combinations of variants i
  // and j; the diagonal holds the within-variant mean.
  std::vector<std::vector<double>> cross_variant;
  bool order_sensitivity = false;
  std::uint64_t requests = 0;
  std::uint64_t parse_failures = 0;
};

struct RobustnessParagraph {
  std::string para_id;
  std::string text;
};

// Every variant runs `runs` passes over its own seeded shuffle of the
// paragraphs. Requests bypass the cache so each run reaches the backend.
AgreementReport run_robustness_protocol(const std::vector<PromptTemplate>& variants,
                                        const std::vector<RobustnessParagraph>& paragraphs, CompletionClient& client,
                                        int runs, std::uint64_t shuffle_seed);

// Permutation used for run `run` of variant `variant_index`.
std::vector<std::size_t> run_order(std::size_t n, std::uint64_t shuffle_seed, std::size_t variant_index, int run);

std::string to_json(const AgreementReport& report, int indent = 2);

}  // namespace sdglens::llm
