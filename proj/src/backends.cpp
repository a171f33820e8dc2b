#include "backends.hpp"

#include <algorithm>
#include <cstdlib>

#include <json.hpp>

#include "hash.hpp"
#include "io.hpp"
#include "net.hpp"
#include "prompts.hpp"
#include "rng.hpp"
#include "unicode.hpp"

namespace sdglens::llm {

using nlohmann::json;

// ---- HTTP ------------------------------------------------------------------

HttpChatBackend::HttpChatBackend(Options options) : options_(std::move(options)) {
  if (!net::is_url(options_.url)) throw ValidationError("backend url must be http(s): " + options_.url);
}

BackendReply HttpChatBackend::send(const CompletionRequest& request) {
  const json body = {{"model", request.model_name},
                     {"prompt", request.prompt_text},
                     {"temperature", request.temperature},
                     {"max_tokens", request.max_output_tokens}};
  net::Headers headers;
  if (!options_.api_key_env.empty()) {
    if (const char* key = std::getenv(options_.api_key_env.c_str()); key && *key) {
      headers.emplace_back("Authorization", std::string("Bearer ") + key);
    }
  }
  const auto res = net::post_json(options_.url, body.dump(), options_.timeout, headers);
  if (!res.transport_ok) throw TransientBackendError("backend transport error: " + res.error);
  if (res.status == 429 || res.status >= 500) {
    throw TransientBackendError("backend returned HTTP " + std::to_string(res.status));
  }
  if (res.status != 200) {
    const std::string what = res.status == 401 || res.status == 403 ? "authentication failed" : "request rejected";
    throw PermanentBackendError(res.status, "backend " + what + " (HTTP " + std::to_string(res.status) + ")");
  }
  try {
    const auto j = json::parse(res.body);
    BackendReply reply;
    reply.text = j.at("text").get<std::string>();
    reply.finish_reason = j.value("finish_reason", std::string("stop"));
    return reply;
  } catch (const json::exception& e) {
    throw MalformedBackendResponse(std::string("malformed backend JSON: ") + e.what());
  }
}

// ---- mock rules ------------------------------------------------------------

MockRules MockRules::parse(std::string_view json_text) {
  MockRules rules;
  try {
    const auto j = json::parse(json_text);
    for (const auto& k : j.at("sdg_keywords")) {
      KeywordRule rule;
      rule.keyword = unicode::fold_case(k.at("keyword").get<std::string>());
      rule.sdgs = k.at("sdgs").get<std::vector<int>>();
      rule.weight = k.value("weight", 1);
      for (int s : rule.sdgs) SdgId{s};
      rules.keywords.push_back(std::move(rule));
    }
    for (const auto& s : j.at("sentiment").at("negative")) rules.negative.push_back(unicode::fold_case(s.get<std::string>()));
    for (const auto& s : j.at("sentiment").at("positive")) rules.positive.push_back(unicode::fold_case(s.get<std::string>()));
    for (const auto& r : j.value("relations", json::array())) {
      RelationRule rule;
      const auto pair = r.at("sdgs").get<std::vector<int>>();
      if (pair.size() != 2) throw ValidationError("mock relation rule needs two SDGs");
      rule.first = pair[0];
      rule.second = pair[1];
      rule.contains = unicode::fold_case(r.at("contains").get<std::string>());
      rule.relationship = parse::relationship_from_name(r.at("relationship").get<std::string>());
      rule.directionality = parse::directionality_from_name(r.at("directionality").get<std::string>());
      rules.relations.push_back(std::move(rule));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("mock rules: ") + e.what());
  }
  return rules;
}

MockRules MockRules::load(const std::filesystem::path& path) { return parse(io::read_file(path)); }

// ---- prompt text extraction -------------------------------------------------

namespace {

std::string_view between(std::string_view s, std::string_view open, std::string_view close) {
  const auto a = s.find(open);
  if (a == std::string_view::npos) return {};
  const auto start = a + open.size();
  const auto b = s.find(close, start);
  return s.substr(start, b == std::string_view::npos ? std::string_view::npos : b - start);
}

bool word_boundary(std::string_view s, std::size_t pos) {
  if (pos == 0 || pos >= s.size()) return true;
  const auto c = static_cast<unsigned char>(s[pos]);
  const auto p = static_cast<unsigned char>(s[pos - 1]);
  const auto wordy = [](unsigned char ch) { return std::isalnum(ch) || ch >= 0x80; };
  return !(wordy(c) && wordy(p));
}

// Occurrences of a phrase on word boundaries; first position in `first`.
std::size_t count_phrase(std::string_view text, std::string_view phrase, std::size_t& first) {
  std::size_t n = 0;
  first = std::string_view::npos;
  for (auto pos = text.find(phrase); pos != std::string_view::npos; pos = text.find(phrase, pos + 1)) {
    if (word_boundary(text, pos) && word_boundary(text, pos + phrase.size())) {
      if (n == 0) first = pos;
      ++n;
    }
  }
  return n;
}

bool contains_phrase(std::string_view text, std::string_view phrase) {
  std::size_t first = 0;
  return count_phrase(text, phrase, first) > 0;
}

}  // namespace

std::string_view extract_single_stage_text(std::string_view prompt) {
  const auto pos = prompt.rfind(kTextMarker);
  return pos == std::string_view::npos ? std::string_view{} : prompt.substr(pos + kTextMarker.size());
}

std::string_view extract_stage1_text(std::string_view prompt) {
  return between(prompt, "** Text ** :\n", "\n** Instructions **:");
}

std::string_view extract_stage2_text(std::string_view prompt) {
  return between(prompt, "Text to analyze: \"", "\"\n** SDG Description **");
}

// ---- mock backend ----------------------------------------------------------

MockBackend::MockBackend(MockRules rules) : rules_(std::move(rules)) {}

std::vector<MockBackend::KeywordHit> MockBackend::sdg_hits(std::string_view text) const {
  const std::string folded = unicode::fold_case(text);
  std::map<int, KeywordHit> by_sdg;
  for (const auto& rule : rules_.keywords) {
    std::size_t first = 0;
    const auto n = count_phrase(folded, rule.keyword, first);
    if (n == 0) continue;
    for (int sdg : rule.sdgs) {
      auto [it, fresh] = by_sdg.try_emplace(sdg, KeywordHit{sdg, 0, first, 0, rule.keyword});
      auto& hit = it->second;
      hit.count += n;
      hit.weight = std::max(hit.weight, rule.weight);
      if (first < hit.first_position) {
        hit.first_position = first;
        hit.keyword = rule.keyword;
      }
    }
  }
  std::vector<KeywordHit> hits;
  for (auto& [_, h] : by_sdg) hits.push_back(std::move(h));
  return hits;
}

std::set<SdgId> MockBackend::all_sdgs(std::string_view text) const {
  std::set<SdgId> out;
  for (const auto& h : sdg_hits(text)) out.insert(SdgId(h.sdg));
  return out;
}

std::vector<int> MockBackend::top_three(std::string_view text, std::string_view variant) const {
  auto hits = sdg_hits(text);
  const auto score = [&](const KeywordHit& h) -> std::size_t {
    if (variant == "dominance") return h.count;
    if (variant == "relevance") return static_cast<std::size_t>(h.weight);
    return h.count * static_cast<std::size_t>(h.weight);  // prominence
  };
  std::stable_sort(hits.begin(), hits.end(), [&](const auto& a, const auto& b) { return score(a) > score(b); });
  std::vector<int> out;
  for (std::size_t i = 0; i < hits.size() && i < 3; ++i) out.push_back(hits[i].sdg);
  std::sort(out.begin(), out.end());
  return out;
}

int MockBackend::sentiment(std::string_view text) const {
  const std::string folded = unicode::fold_case(text);
  for (const auto& p : rules_.negative) {
    if (contains_phrase(folded, p)) return 0;
  }
  for (const auto& p : rules_.positive) {
    if (contains_phrase(folded, p)) return 2;
  }
  return 1;
}

parse::SdgAssignment MockBackend::assignment(std::string_view text) const {
  auto hits = sdg_hits(text);
  parse::SdgAssignment a;
  if (hits.empty()) return a;
  std::sort(hits.begin(), hits.end(), [](const auto& x, const auto& y) {
    if (x.count != y.count) return x.count > y.count;
    if (x.first_position != y.first_position) return x.first_position < y.first_position;
    return x.sdg < y.sdg;
  });
  a.main = SdgId(hits[0].sdg);
  a.main_reason = "the text mentions \"" + hits[0].keyword + "\"";
  std::sort(hits.begin() + 1, hits.end(), [](const auto& x, const auto& y) {
    if (x.first_position != y.first_position) return x.first_position < y.first_position;
    return x.sdg < y.sdg;
  });
  for (std::size_t i = 1; i < hits.size(); ++i) {
    a.secondaries.push_back({SdgId(hits[i].sdg), "the text also mentions \"" + hits[i].keyword + "\""});
  }
  return a;
}

parse::InterlinkageRecord MockBackend::relation(int first, int second, std::string_view text) const {
  using parse::Directionality;
  using parse::Relationship;
  parse::InterlinkageRecord r;
  r.sdg_a = SdgId(first);
  r.sdg_b = SdgId(second);
  const std::string folded = unicode::fold_case(text);
  for (const auto& rule : rules_.relations) {
    const bool same = rule.first == first && rule.second == second;
    const bool swapped = rule.first == second && rule.second == first;
    if (!(same || swapped) || !contains_phrase(folded, rule.contains)) continue;
    r.relationship = rule.relationship;
    r.directionality = rule.directionality;
    if (swapped && r.directionality == Directionality::kOutward) {
      r.directionality = Directionality::kInward;
    } else if (swapped && r.directionality == Directionality::kInward) {
      r.directionality = Directionality::kOutward;
    }
    r.explanation = "the text states \"" + rule.contains + "\"";
    return r;
  }
  switch (sentiment(text)) {
    case 0:
      r.relationship = Relationship::kTradeoff;
      r.directionality = Directionality::kOutward;
      r.explanation = "the text describes a risk linked to SDG " + std::to_string(first);
      break;
    case 2:
      r.relationship = Relationship::kSynergy;
      r.directionality = Directionality::kOutward;
      r.explanation = "the text describes an opportunity linked to SDG " + std::to_string(first);
      break;
    default:
      r.relationship = Relationship::kNeutral;
      r.directionality = Directionality::kNone;
      r.explanation = "the link is not clear in the text";
      break;
  }
  return r;
}

BackendReply MockBackend::send(const CompletionRequest& request) {
  const std::string_view prompt = request.prompt_text;
  BackendReply reply;
  const auto set_answer = [](const std::set<SdgId>& sdgs) {
    return sdgs.empty() ? std::string("0") : parse::serialize_sdg_set(sdgs);
  };

  if (prompt.find("** Original Text **") != std::string_view::npos) {
    const auto text = extract_stage2_text(prompt);
    const auto fmt = prompt.rfind("- SDG Pair: ");
    if (fmt == std::string_view::npos) throw PermanentBackendError(400, "mock: stage-2 prompt without an SDG pair");
    const auto line_end = prompt.find('\n', fmt);
    const auto pair_line = prompt.substr(fmt, line_end == std::string_view::npos ? std::string_view::npos : line_end - fmt);
    // The rendered pair line is "- SDG Pair: SDG SDG <a> - <b>"; read it back
    // with the lenient record parser.
    std::string probe = std::string(pair_line) + "\n- Relationship: Neutral\n- Explanation: -";
    const auto parsed = parse::parse_interlinkage(probe, parse::Mode::kLenient);
    const auto& pr = parsed.value.at(0);
    reply.text = parse::serialize_interlinkage(relation(pr.sdg_a.value(), pr.sdg_b.value(), text));
    return reply;
  }
  if (prompt.find("Main SDG (pertinent number)") != std::string_view::npos) {
    reply.text = parse::serialize_assignment(assignment(extract_stage1_text(prompt)));
    return reply;
  }
  const auto text = extract_single_stage_text(prompt);
  if (prompt.find("one and one only number") != std::string_view::npos) {
    reply.text = std::to_string(sentiment(text));
    return reply;
  }
  if (prompt.find("to all relevant SDGs") != std::string_view::npos) {
    reply.text = set_answer(all_sdgs(text));
    return reply;
  }
  if (prompt.find("top three SDGs") != std::string_view::npos) {
    const std::string_view variant = prompt.find("dominance") < prompt.size()   ? "dominance"
                                     : prompt.find("relevance") < prompt.size() ? "relevance"
                                                                                 : "prominence";
    std::set<SdgId> sdgs;
    for (int s : top_three(text, variant)) sdgs.insert(SdgId(s));
    reply.text = set_answer(sdgs);
    return reply;
  }
  throw PermanentBackendError(400, "mock: unrecognized prompt");
}

// ---- noise -----------------------------------------------------------------

NoiseBackend::NoiseBackend(std::shared_ptr<ChatBackend> inner, double probability, std::uint64_t seed)
    : inner_(std::move(inner)), probability_(probability), seed_(seed) {
  if (!(probability >= 0.0 && probability <= 1.0)) throw ValidationError("noise probability must lie in [0,1]");
}

NoiseBackend::Decision NoiseBackend::decide(std::uint64_t seed, double probability, std::string_view prompt,
                                            std::uint64_t occurrence) {
  Engine engine(mix64(seed ^ fnv1a64(prompt)) ^ mix64(occurrence + 1));
  Decision d;
  d.flip = uniform_unit(engine) < probability;
  const auto k = static_cast<int>(uniform_below(engine, kSdgCount)) + 1;
  if (d.flip) d.toggled = k;
  return d;
}

std::set<SdgId> NoiseBackend::apply(std::set<SdgId> sdgs, const Decision& d) {
  if (!d.flip) return sdgs;
  sdgs.erase(SdgId::none());
  const SdgId k(d.toggled);
  if (!sdgs.erase(k)) sdgs.insert(k);
  if (sdgs.empty()) sdgs.insert(SdgId::none());
  return sdgs;
}

namespace {

// Only label-set prompts are perturbed; sentiment digits and structured
// replies pass through.
bool asks_for_sdg_set(std::string_view prompt) {
  if (prompt.find("one and one only number") != std::string_view::npos) return false;
  if (prompt.find("Main SDG (pertinent number)") != std::string_view::npos) return false;
  return prompt.find("to all relevant SDGs") != std::string_view::npos ||
         prompt.find("top three SDGs") != std::string_view::npos;
}

}  // namespace

BackendReply NoiseBackend::send(const CompletionRequest& request) {
  auto reply = inner_->send(request);
  if (!asks_for_sdg_set(request.prompt_text)) return reply;
  std::uint64_t occurrence = 0;
  {
    std::lock_guard lock(mutex_);
    occurrence = occurrences_[request.prompt_text]++;
  }
  std::set<SdgId> sdgs;
  try {
    sdgs = parse::parse_sdg_set(reply.text, parse::Mode::kStrict).value;
  } catch (const parse::ParseError&) {
    return reply;
  }
  const auto d = decide(seed_, probability_, request.prompt_text, occurrence);
  if (d.flip) {
    const auto noisy = apply(std::move(sdgs), d);
    reply.text = noisy == std::set<SdgId>{SdgId::none()} ? std::string("0") : parse::serialize_sdg_set(noisy);
  }
  return reply;
}

}  // namespace sdglens::llm
