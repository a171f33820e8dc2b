#include "orchestrator.hpp"

#include <algorithm>
#include <numeric>

#include <json.hpp>

#include "io.hpp"
#include "rng.hpp"

namespace sdglens::llm {

using parse::Mode;
using parse::ParseError;

parse::Parsed<std::set<SdgId>> parse_label_set(std::string_view raw, TemplateId tmpl) {
  parse::Parsed<std::set<SdgId>> parsed;
  try {
    parsed = parse::parse_sdg_set(raw, Mode::kLenient);
  } catch (const ParseError& e) {
    throw ResponseParseError(tmpl, e.what(), std::string(raw));
  }
  if (parsed.value.empty()) throw ResponseParseError(tmpl, "no SDG numbers in response", std::string(raw));
  if (parsed.value.contains(SdgId::none()) && parsed.value.size() > 1) {
    parsed.warnings.push_back({"zero_with_others", "SDG 0 listed with other SDGs; set collapsed to {0}"});
    parsed.value = {SdgId::none()};
  }
  return parsed;
}

TwoStepResult two_step_classify(std::string_view paragraph, CompletionClient& client, const PromptSet& prompts,
                                CachePolicy policy) {
  if (paragraph.empty()) throw ValidationError("two-step classification needs a non-empty paragraph");
  const Bindings bindings{{"text", std::string(paragraph)}};
  TwoStepResult result;

  const auto sdg_reply = client.complete(client.make_request(prompts.get(TemplateId::kTwoStepSdg).render(bindings)), policy);
  auto sdgs = parse_label_set(sdg_reply.raw_text, TemplateId::kTwoStepSdg);
  result.sdgs = std::move(sdgs.value);
  result.warnings = std::move(sdgs.warnings);

  const auto sent_reply =
      client.complete(client.make_request(prompts.get(TemplateId::kTwoStepSentiment).render(bindings)), policy);
  try {
    result.sentiment = parse::parse_sentiment_label(sent_reply.raw_text);
  } catch (const ParseError& e) {
    throw ResponseParseError(TemplateId::kTwoStepSentiment, e.what(), sent_reply.raw_text);
  }
  return result;
}

namespace {

parse::Parsed<parse::SdgAssignment> parse_stage1(const std::string& raw) {
  try {
    return parse::parse_sdg_assignment(raw, Mode::kLenient);
  } catch (const ParseError& e) {
    throw ResponseParseError(TemplateId::kInterlinkStage1, e.what(), raw);
  }
}

}  // namespace

InterlinkResult interlink_extract(std::string_view text, std::string_view descriptions, CompletionClient& client,
                                  const PromptSet& prompts, CachePolicy policy) {
  if (text.empty()) throw ValidationError("interlinkage extraction needs a non-empty text");
  if (descriptions.empty()) throw ValidationError("SDG descriptions are not loaded");
  InterlinkResult result;
  Bindings bindings{{"text", std::string(text)}, {"Read_description", std::string(descriptions)}};

  const auto stage1 =
      client.complete(client.make_request(prompts.get(TemplateId::kInterlinkStage1).render(bindings)), policy);
  auto parsed = parse_stage1(stage1.raw_text);
  result.assignment = std::move(parsed.value);
  result.warnings = std::move(parsed.warnings);
  if (result.assignment.main == SdgId::none()) return result;

  const int main = result.assignment.main.value();
  bindings["main_sdg"] = std::to_string(main);
  for (const auto& secondary : result.assignment.secondaries) {
    const int second = secondary.sdg.value();
    bindings["secondary_sdg"] = std::to_string(second);
    ++result.stage2_calls;
    std::string raw;
    try {
      raw = client.complete(client.make_request(prompts.get(TemplateId::kInterlinkStage2).render(bindings)), policy)
                .raw_text;
      auto records = parse::parse_interlinkage(raw, Mode::kLenient);
      const auto match = std::find_if(records.value.begin(), records.value.end(), [&](const auto& r) {
        const int a = r.sdg_a.value(), b = r.sdg_b.value();
        return (a == main && b == second) || (a == second && b == main);
      });
      if (match == records.value.end()) {
        result.failures.push_back({secondary.sdg, "no record for the requested SDG pair", raw});
        continue;
      }
      for (auto& w : records.warnings) result.warnings.push_back(std::move(w));
      result.records.push_back(*match);
    } catch (const ParseError& e) {
      result.failures.push_back({secondary.sdg, e.what(), raw});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kBackend) throw;
      result.failures.push_back({secondary.sdg, e.what(), raw});
    }
  }
  return result;
}

double jaccard(const std::set<SdgId>& a, const std::set<SdgId>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& x : a) common += b.count(x);
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

std::vector<std::size_t> run_order(std::size_t n, std::uint64_t shuffle_seed, std::size_t variant_index, int run) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Engine engine(mix64(shuffle_seed ^ mix64(variant_index * 1000003u + static_cast<std::uint64_t>(run))));
  fisher_yates(std::span<std::size_t>(order), engine);
  return order;
}

AgreementReport run_robustness_protocol(const std::vector<PromptTemplate>& variants,
                                        const std::vector<RobustnessParagraph>& paragraphs, CompletionClient& client,
                                        int runs, std::uint64_t shuffle_seed) {
  if (variants.empty()) throw ValidationError("robustness protocol needs at least one prompt variant");
  if (paragraphs.size() < 2) throw ValidationError("robustness protocol needs at least two paragraphs");
  if (runs < 1) throw ValidationError("robustness runs must be at least 1");

  AgreementReport report;
  for (const auto& p : paragraphs) report.para_ids.push_back(p.para_id);
  const auto before = client.stats().requests;
  const std::size_t n = paragraphs.size();

  for (std::size_t v = 0; v < variants.size(); ++v) {
    VariantAgreement va;
    va.variant = variants[v].id();
    va.labels.assign(static_cast<std::size_t>(runs), std::vector<std::set<SdgId>>(n));
    for (int r = 0; r < runs; ++r) {
      for (const std::size_t i : run_order(n, shuffle_seed, v, r)) {
        const auto prompt = variants[v].render({{"text", paragraphs[i].text}});
        const auto reply = client.complete(client.make_request(prompt), CachePolicy::kBypass);
        try {
          va.labels[r][i] = parse_label_set(reply.raw_text, va.variant).value;
        } catch (const ResponseParseError&) {
          ++report.parse_failures;  // kept as an empty set
        }
      }
    }
    std::size_t pair_count = 0;
    double jac_sum = 0.0, exact_sum = 0.0;
    va.paragraph_jaccard.assign(n, 1.0);
    va.paragraph_exact.assign(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      double pj = 0.0, pe = 0.0;
      std::size_t pairs = 0;
      for (int a = 0; a < runs; ++a) {
        for (int b = a + 1; b < runs; ++b) {
          const auto& x = va.labels[a][i];
          const auto& y = va.labels[b][i];
          pj += jaccard(x, y);
          pe += x == y ? 1.0 : 0.0;
          ++pairs;
          if (x != y) va.order_sensitive = true;
        }
      }
      if (pairs > 0) {
        va.paragraph_jaccard[i] = pj / static_cast<double>(pairs);
        va.paragraph_exact[i] = pe / static_cast<double>(pairs);
      }
      jac_sum += pj;
      exact_sum += pe;
      pair_count += pairs;
    }
    if (pair_count > 0) {
      va.mean_jaccard = jac_sum / static_cast<double>(pair_count);
      va.exact_match_fraction = exact_sum / static_cast<double>(pair_count);
    }
    report.order_sensitivity = report.order_sensitivity || va.order_sensitive;
    report.variants.push_back(std::move(va));
  }

  const std::size_t k = report.variants.size();
  report.cross_variant.assign(k, std::vector<double>(k, 1.0));
  for (std::size_t a = 0; a < k; ++a) {
    report.cross_variant[a][a] = report.variants[a].mean_jaccard;
    for (std::size_t b = a + 1; b < k; ++b) {
      double sum = 0.0;
      std::size_t count = 0;
      for (const auto& ra : report.variants[a].labels) {
        for (const auto& rb : report.variants[b].labels) {
          for (std::size_t i = 0; i < n; ++i) sum += jaccard(ra[i], rb[i]);
          count += n;
        }
      }
      report.cross_variant[a][b] = report.cross_variant[b][a] = sum / static_cast<double>(count);
    }
  }

  report.requests = client.stats().requests - before;
  const auto budget = static_cast<std::uint64_t>(variants.size()) * static_cast<std::uint64_t>(runs) * n;
  if (report.requests > budget) {
    throw Error(ErrorCode::kInternal, "robustness protocol exceeded its request budget");
  }
  return report;
}

std::string to_json(const AgreementReport& report, int indent) {
  using nlohmann::ordered_json;
  const auto num = [](double x) { return ordered_json::parse(io::format_double(x)); };
  ordered_json j;
  j["order_sensitivity"] = report.order_sensitivity;
  j["requests"] = report.requests;
  j["parse_failures"] = report.parse_failures;
  ordered_json variants = ordered_json::array();
  for (const auto& v : report.variants) {
    ordered_json jv;
    jv["variant"] = template_id_name(v.variant);
    jv["mean_jaccard"] = num(v.mean_jaccard);
    jv["exact_match_fraction"] = num(v.exact_match_fraction);
    jv["order_sensitive"] = v.order_sensitive;
    ordered_json paras = ordered_json::array();
    for (std::size_t i = 0; i < report.para_ids.size(); ++i) {
      ordered_json runs = ordered_json::array();
      for (const auto& run : v.labels) {
        ordered_json set = ordered_json::array();
        for (const auto& s : run[i]) set.push_back(s.value());
        runs.push_back(std::move(set));
      }
      paras.push_back({{"para_id", report.para_ids[i]},
                       {"jaccard", num(v.paragraph_jaccard[i])},
                       {"exact", num(v.paragraph_exact[i])},
                       {"runs", std::move(runs)}});
    }
    jv["paragraphs"] = std::move(paras);
    variants.push_back(std::move(jv));
  }
  j["variants"] = std::move(variants);
  ordered_json matrix = ordered_json::array();
  for (const auto& row : report.cross_variant) {
    ordered_json r = ordered_json::array();
    for (double x : row) r.push_back(num(x));
    matrix.push_back(std::move(r));
  }
  j["cross_variant"] = std::move(matrix);
  return j.dump(indent);
}

}  // namespace sdglens::llm
