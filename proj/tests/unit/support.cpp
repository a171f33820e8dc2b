#include "support.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <thread>

#include "clean.hpp"
#include "io.hpp"
#include "parser.hpp"
#include "sdg.hpp"
#include "tfidf.hpp"

namespace sdglens::testing {

namespace fs = std::filesystem;

fs::path fixture(const std::string& relative) { return fs::path(SDGLENS_FIXTURES) / relative; }
fs::path data(const std::string& relative) { return fs::path(SDGLENS_TEST_DATA) / relative; }

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  path_ = fs::temp_directory_path() /
          ("sdglens-test-" + std::to_string(stamp) + "-" + std::to_string(counter.fetch_add(1)));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

ScriptedBackend::Step ScriptedBackend::status(int code) {
  Step s;
  s.kind = (code == 429 || code >= 500) ? Step::Kind::kTransient : Step::Kind::kPermanent;
  s.status = code;
  return s;
}

llm::BackendReply ScriptedBackend::send(const llm::CompletionRequest& request) {
  const int index = calls_.fetch_add(1);
  {
    std::lock_guard lock(mutex_);
    prompts_.push_back(request.prompt_text);
  }
  const int now = active_.fetch_add(1) + 1;
  int peak = peak_.load();
  while (now > peak && !peak_.compare_exchange_weak(peak, now)) {
  }
  if (delay_.count() > 0) std::this_thread::sleep_for(delay_);
  active_.fetch_sub(1);

  const Step& step = steps_.at(std::min<std::size_t>(static_cast<std::size_t>(index), steps_.size() - 1));
  switch (step.kind) {
    case Step::Kind::kReply:
      return {step.text, "stop"};
    case Step::Kind::kTransient:
      throw llm::TransientBackendError("HTTP " + std::to_string(step.status));
    case Step::Kind::kPermanent:
      throw llm::PermanentBackendError(step.status, "HTTP " + std::to_string(step.status));
    case Step::Kind::kMalformed:
      throw llm::MalformedBackendResponse("response is not JSON");
  }
  return {};
}

std::vector<std::string> ScriptedBackend::prompts() const {
  std::lock_guard lock(mutex_);
  return prompts_;
}

llm::ClientOptions instant_options(int max_in_flight) {
  llm::ClientOptions o;
  o.max_in_flight = max_in_flight;
  o.sleep = [](std::chrono::milliseconds) {};
  return o;
}

llm::MockRules mock_rules() { return llm::MockRules::load(data("mock_rules.json")); }

std::shared_ptr<llm::MockBackend> mock_backend() { return std::make_shared<llm::MockBackend>(mock_rules()); }

namespace {

const std::vector<std::string> kWords = {
    "climate", "energy", "water", "policy", "sector", "national", "emissions", "adaptation", "forest",
    "plan", "measures", "target", "urban", "coastal", "heat", "river", "budget", "capacity",
    "transport", "buildings", "farmers", "storage", "grid", "monitoring", "vulnerable", "lowland"};

std::string pick(Engine& e, const std::vector<std::string>& v) {
  return v[static_cast<std::size_t>(uniform_below(e, v.size()))];
}

std::string words(Engine& e, std::size_t n, bool capitalize) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    auto w = pick(e, kWords);
    if (i == 0 && capitalize) w[0] = static_cast<char>(w[0] - 'a' + 'A');
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

}  // namespace

std::vector<ingest::TextBlock> random_blocks(Engine& engine, std::size_t max_blocks) {
  static const std::vector<std::string> kEnds = {".", "!", "?", ":", ";", "", "", ","};
  static const std::vector<std::string> kHeaders = {"Ministry of Climate and Energy", "Draft for consultation"};
  static const std::vector<std::string> kCaptions = {"Figure 2: emissions by sector", "Table 4 targets",
                                                     "page 12 of the plan", "Chapitre 3. Adaptation"};
  const auto n = static_cast<std::size_t>(uniform_below(engine, max_blocks + 1));
  std::vector<ingest::TextBlock> blocks;
  for (std::size_t i = 0; i < n; ++i) {
    std::string text;
    switch (uniform_below(engine, 10)) {
      case 0:
        text = pick(engine, kHeaders);
        break;
      case 1:
        text = pick(engine, kCaptions);
        break;
      case 2:
        text = std::to_string(2000 + uniform_below(engine, 60)) + " " + std::to_string(uniform_below(engine, 100)) +
               "% " + pick(engine, kWords);
        break;
      case 3:
        text = words(engine, 1, uniform_below(engine, 2) == 0);
        break;
      case 4:
        text = std::to_string(uniform_below(engine, 90) + 10) + " " + words(engine, 3, false) +
               pick(engine, kEnds);
        break;
      default:
        text = words(engine, 2 + uniform_below(engine, 14), uniform_below(engine, 3) != 0) + pick(engine, kEnds);
        break;
    }
    std::optional<int> page;
    if (uniform_below(engine, 4) != 0) page = static_cast<int>(1 + i / 5);
    blocks.push_back(ingest::make_block(i, std::move(text), page));
  }
  return blocks;
}

std::string merge_property_violation(const std::vector<ingest::TextBlock>& blocks) {
  const clean::CaptionFilter captions;
  clean::HeuristicSegmenter segmenter;
  std::vector<ingest::TextBlock> kept;
  for (const auto& b : blocks) {
    if (!captions.drop(b) && !clean::drop_min_tokens(b) && !clean::drop_numeric_ratio(b)) kept.push_back(b);
  }
  const auto survivors = clean::dedup_short_repeats(kept);
  std::size_t survivor_words = 0;
  for (const auto& b : survivors) survivor_words += b.word_count;

  const auto first = clean::clean_pipeline("D", blocks, captions, segmenter);
  std::size_t words_out = 0;
  for (const auto& p : first.paragraphs) words_out += p.word_count;
  if (words_out != survivor_words) {
    return "word count " + std::to_string(words_out) + " != " + std::to_string(survivor_words);
  }
  if (first.paragraphs.size() > survivors.size()) return "more paragraphs than surviving blocks";
  if (first.report.blocks_in != blocks.size()) return "blocks_in mismatch";

  std::vector<ingest::TextBlock> reblocked;
  for (std::size_t i = 0; i < first.paragraphs.size(); ++i) {
    reblocked.push_back(ingest::make_block(i, first.paragraphs[i].text));
  }
  const auto second = clean::clean_pipeline("D", reblocked, captions, segmenter);
  if (second.report.dropped_total() != 0) return "re-cleaning dropped blocks";
  if (second.paragraphs.size() != first.paragraphs.size()) return "re-cleaning merged paragraphs";
  for (std::size_t i = 0; i < second.paragraphs.size(); ++i) {
    if (second.paragraphs[i].text != first.paragraphs[i].text) return "re-cleaning changed text";
  }
  return {};
}

std::string golden_cleaning_mismatch() {
  ingest::DocumentRecord doc;
  doc.doc_id = "AND-1";
  const auto blocks = ingest::load_blocks(doc, fixture("clean/doc.jsonl"));
  const clean::CaptionFilter captions;
  clean::HeuristicSegmenter segmenter;
  const auto result = clean::clean_pipeline("AND-1", blocks, captions, segmenter);

  const auto expected_text = io::read_file(fixture("clean/expected_paragraphs.jsonl"));
  std::vector<nlohmann::json> expected;
  std::size_t start = 0;
  while (start < expected_text.size()) {
    auto end = expected_text.find('\n', start);
    if (end == std::string::npos) end = expected_text.size();
    if (end > start) expected.push_back(nlohmann::json::parse(expected_text.substr(start, end - start)));
    start = end + 1;
  }
  if (expected.size() != result.paragraphs.size()) {
    return "paragraph count " + std::to_string(result.paragraphs.size()) + " != " + std::to_string(expected.size());
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (nlohmann::json::parse(clean::to_json_line(result.paragraphs[i])) != expected[i]) {
      return "paragraph " + std::to_string(i) + " differs";
    }
  }
  const auto want = nlohmann::json::parse(io::read_file(fixture("clean/expected_report.json")));
  if (nlohmann::json::parse(clean::report_to_json(result.report)) != want) return "cleaning report differs";
  return {};
}

std::vector<std::map<std::string, double>> brute_force_tfidf(const std::vector<std::vector<std::string>>& docs) {
  const double n = static_cast<double>(docs.size());
  std::vector<std::map<std::string, double>> out(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const auto& term : docs[d]) {
      if (out[d].count(term)) continue;
      double tf = 0.0;
      for (const auto& t : docs[d]) tf += t == term ? 1.0 : 0.0;
      double df = 0.0;
      for (const auto& other : docs) {
        bool present = false;
        for (const auto& t : other) present = present || t == term;
        df += present ? 1.0 : 0.0;
      }
      out[d][term] = tf * std::log(n / df);
    }
  }
  return out;
}

std::vector<std::string> random_corpus(Engine& engine, std::size_t docs, std::size_t min_len, std::size_t max_len) {
  std::vector<std::string> corpus;
  for (std::size_t d = 0; d < docs; ++d) {
    const auto len = min_len + static_cast<std::size_t>(uniform_below(engine, max_len - min_len + 1));
    corpus.push_back(words(engine, len, false));
  }
  return corpus;
}

std::vector<std::string> argmax_paragraphs(std::size_t count, std::uint64_t seed) {
  const auto descriptions = load_descriptions(data("sdg_descriptions.json"));
  std::vector<std::string> vocab;
  {
    std::set<std::string> seen;
    for (const auto& d : descriptions) {
      for (auto& t : tagger::tokenize(d.description)) {
        if (seen.insert(t).second) vocab.push_back(t);
      }
    }
  }
  Engine engine(seed);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::string text;
    const auto len = 5 + uniform_below(engine, 30);
    for (std::uint64_t w = 0; w < len; ++w) {
      if (!text.empty()) text += ' ';
      text += uniform_below(engine, 5) == 0 ? pick(engine, kWords) : pick(engine, vocab);
    }
    out.push_back(std::move(text));
  }
  return out;
}

namespace {

std::string random_text(Engine& e) {
  static const std::vector<std::string> pieces = {
      "the text",  "mentions",   "solar",     "SDG 7",   "(13)",        "Trade-off:", "- bullet",
      "\xc3\xa9nergie", "50%",   "Reason:",   "both",    "\"quoted\"", "a - b",     "Main SDG"};
  const auto n = uniform_below(e, 6);
  std::string out;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (!out.empty()) out += ' ';
    out += pieces[static_cast<std::size_t>(uniform_below(e, pieces.size()))];
  }
  return out;
}

}  // namespace

parse::InterlinkageRecord random_record(Engine& e) {
  parse::InterlinkageRecord r;
  const int a = static_cast<int>(uniform_below(e, 17)) + 1;
  int b = static_cast<int>(uniform_below(e, 16)) + 1;
  if (b >= a) ++b;
  r.sdg_a = SdgId(a);
  r.sdg_b = SdgId(b);
  r.relationship = static_cast<parse::Relationship>(uniform_below(e, 3));
  r.directionality = r.relationship == parse::Relationship::kNeutral ? parse::Directionality::kNone
                                                              : static_cast<parse::Directionality>(uniform_below(e, 3));
  r.explanation = random_text(e);
  return r;
}

parse::SdgAssignment random_assignment(Engine& e) {
  parse::SdgAssignment a;
  a.main = SdgId(static_cast<int>(uniform_below(e, 18)));
  a.main_reason = random_text(e);
  if (a.main.is_goal()) {
    std::vector<int> pool;
    for (int s = 1; s <= 17; ++s) {
      if (s != a.main.value()) pool.push_back(s);
    }
    fisher_yates(std::span<int>(pool), e);
    const auto n = uniform_below(e, 5);
    for (std::uint64_t i = 0; i < n; ++i) a.secondaries.push_back({SdgId(pool[i]), random_text(e)});
  }
  return a;
}

std::string random_bytes(Engine& e) {
  static const std::vector<std::string> fragments = {
      "Main SDG (", "Reason main SDG (", "Secondary SDG (", ")", ": ", "\n", "SDG Pair: SDG SDG ", " - ",
      "Relationship: ", "Directionality: ", "Explanation: ", "Trade-off", "Outward", "Neutral", "13", "99",
      "-1", "0", "\xff", "\xc3", "*", "\xe2\x80\xa2 ", "\r\n"};
  std::string out;
  const auto n = uniform_below(e, 40);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (uniform_below(e, 3) == 0) {
      out += static_cast<char>(uniform_below(e, 256));
    } else {
      out += fragments[static_cast<std::size_t>(uniform_below(e, fragments.size()))];
    }
  }
  return out;
}

RobustnessFixture robustness_fixture() {
  const auto j = nlohmann::json::parse(io::read_file(fixture("robustness/paragraphs.json")));
  RobustnessFixture f;
  for (const auto& p : j) {
    f.paragraphs.push_back({p.at("para_id").get<std::string>(), p.at("text").get<std::string>()});
    f.answers.push_back(p.at("answers").get<std::map<std::string, std::string>>());
  }
  return f;
}

}  // namespace sdglens::testing
