#include "pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "analytics.hpp"
#include "backends.hpp"
#include "clean.hpp"
#include "ingest.hpp"
#include "io.hpp"
#include "orchestrator.hpp"
#include "remote.hpp"
#include "rng.hpp"
#include "sentiment.hpp"
#include "tagger.hpp"

namespace sdglens::pipeline {

namespace fs = std::filesystem;
using config::Strategy;
using nlohmann::json;
using nlohmann::ordered_json;

std::string files::tags(Strategy s) { return "tags_" + std::string(config::strategy_name(s)) + ".jsonl"; }
std::string files::sentiment(Strategy s) { return "sentiment_" + std::string(config::strategy_name(s)) + ".jsonl"; }
std::string files::eval(Strategy s) { return "eval_" + std::string(config::strategy_name(s)) + ".json"; }

namespace {

ordered_json num(double x) { return ordered_json::parse(io::format_double(x)); }

std::vector<std::string> read_lines(const fs::path& path) {
  std::vector<std::string> lines;
  std::istringstream in(io::read_file(path));
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

std::vector<json> read_stage_jsonl(const fs::path& path, std::string_view producer) {
  if (!fs::is_regular_file(path)) {
    throw ValidationError("missing " + path.filename().string() + "; run the " + std::string(producer) + " stage first");
  }
  return io::read_jsonl(path);
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

std::vector<clean::Paragraph> load_paragraphs(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw ValidationError("missing paragraphs.jsonl; run the clean stage first");
  std::vector<clean::Paragraph> out;
  for (const auto& line : read_lines(path)) out.push_back(clean::paragraph_from_json(line));
  return out;
}

std::vector<ingest::DocumentRecord> load_corpus(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw ValidationError("missing corpus.json; run the ingest stage first");
  return ingest::parse_manifest(io::read_file(path));
}

// Runs f(i) for i in [0, n) on up to `workers` threads. The first failure in
// index order is rethrown after all workers finish.
template <typename F>
void parallel_for(std::size_t n, int workers, F&& f) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::size_t>(std::max(1, workers));
  if (count == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < std::min(count, n); ++t) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

ordered_json set_json(const std::set<SdgId>& sdgs) {
  ordered_json a = ordered_json::array();
  for (const auto& s : sdgs) a.push_back(s.value());
  return a;
}

std::set<SdgId> set_from_json(const json& j) {
  std::set<SdgId> out;
  for (const auto& v : j) out.insert(SdgId(v.get<int>()));
  return out;
}

ordered_json record_json(const parse::InterlinkageRecord& r) {
  return {{"sdg_a", r.sdg_a.value()},
          {"sdg_b", r.sdg_b.value()},
          {"relationship", parse::relationship_name(r.relationship)},
          {"directionality", parse::directionality_name(r.directionality)},
          {"explanation", r.explanation}};
}

parse::InterlinkageRecord record_from_json(const json& j) {
  parse::InterlinkageRecord r;
  r.sdg_a = SdgId(j.at("sdg_a").get<int>());
  r.sdg_b = SdgId(j.at("sdg_b").get<int>());
  r.relationship = parse::relationship_from_name(j.at("relationship").get<std::string>());
  r.directionality = parse::directionality_from_name(j.at("directionality").get<std::string>());
  r.explanation = j.value("explanation", std::string());
  if (const auto problem = parse::validate(r); !problem.empty()) throw ValidationError("interlinkage record: " + problem);
  return r;
}

bool file_safe(std::string_view id) {
  if (id.empty() || id == "." || id == "..") return false;
  return std::none_of(id.begin(), id.end(), [](char c) { return c == '/' || c == '\\' || c == '\0'; });
}

}  // namespace

Pipeline::Pipeline(config::PipelineConfig config, std::shared_ptr<Logger> logger)
    : config_(std::move(config)), log_(logger ? std::move(logger) : std::make_shared<Logger>()) {}

void Pipeline::apply(const Overrides& o) {
  if (o.strategy) config_.strategy = *o.strategy;
  if (o.backend) {
    if (!config_.backend) {
      config_.backend = config::BackendSettings{};
      config_.backend->mock_rules = config::data_dir() / "mock_rules.json";
    }
    config_.backend->kind = *o.backend;
  }
  if (o.seed) {
    config_.robustness.seed = *o.seed;
    if (config_.backend && config_.backend->noise) config_.backend->noise->seed = *o.seed;
  }
  if (o.out) {
    const bool default_cache = config_.cache_dir && *config_.cache_dir == config_.out / "cache";
    config_.out = fs::absolute(*o.out).lexically_normal();
    if (default_cache) config_.cache_dir = config_.out / "cache";
  }
  if (o.gold) config_.gold = fs::absolute(*o.gold).lexically_normal();
  config::validate(config_);
}

fs::path Pipeline::out(std::string_view name) const { return config_.out / fs::path(std::string(name)); }

std::unique_ptr<llm::CompletionClient> Pipeline::make_client() const {
  if (!config_.backend) throw ValidationError("this stage needs backend settings");
  const auto& b = *config_.backend;
  std::shared_ptr<llm::ChatBackend> backend;
  if (b.kind == "mock") {
    backend = std::make_shared<llm::MockBackend>(llm::MockRules::load(b.mock_rules));
  } else if (b.kind == "http") {
    backend = std::make_shared<llm::HttpChatBackend>(
        llm::HttpChatBackend::Options{b.url, b.api_key_env, std::chrono::milliseconds(b.timeout_ms)});
  } else {
    throw ValidationError("backend.kind must be \"mock\" or \"http\"");
  }
  if (b.noise) backend = std::make_shared<llm::NoiseBackend>(backend, b.noise->probability, b.noise->seed);

  std::shared_ptr<const llm::ResponseCache> cache;
  if (config_.cache_dir) cache = std::make_shared<llm::ResponseCache>(*config_.cache_dir);
  llm::ClientOptions options;
  options.retry.max_attempts = b.max_attempts;
  options.max_in_flight = b.max_in_flight;
  options.requests_per_second = b.requests_per_second;
  auto client = std::make_unique<llm::CompletionClient>(backend, b.model, cache, options);
  client->set_temperature(b.temperature);
  client->set_max_output_tokens(b.max_tokens);
  return client;
}

StageOutcome Pipeline::run(std::string_view stage) {
  log_->set_stage(std::string(stage));
  const auto started = std::chrono::steady_clock::now();
  last_stats_ = {};
  std::error_code ec;
  fs::create_directories(config_.out, ec);
  if (ec) throw IoError("cannot create output directory " + config_.out.string() + ": " + ec.message());

  StageOutcome outcome;
  if (stage == "ingest") {
    outcome = ingest();
  } else if (stage == "clean") {
    outcome = clean();
  } else if (stage == "tag") {
    outcome = tag();
  } else if (stage == "sentiment") {
    outcome = sentiment();
  } else if (stage == "interlink") {
    outcome = interlink();
  } else if (stage == "robustness") {
    outcome = robustness();
  } else if (stage == "eval") {
    outcome = eval();
  } else if (stage == "report") {
    outcome = report();
  } else {
    throw ValidationError("unknown stage \"" + std::string(stage) + "\"");
  }
  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started).count();
  ordered_json fields = outcome.summary;
  fields["exit_code"] = outcome.exit_code;
  fields["network_calls"] = last_stats_.network_calls;
  fields["cache_hits"] = last_stats_.cache_hits;
  fields["elapsed_ms"] = elapsed;
  log_->info("stage_done", std::move(fields));
  return outcome;
}

// ---- ingest ----------------------------------------------------------------

StageOutcome Pipeline::ingest() {
  const auto docs = ingest::fetch_manifest(config_.manifest);
  const auto blocks_dir = out(files::kBlocksDir);
  fs::create_directories(blocks_dir);
  ordered_json report = ordered_json::array();
  std::size_t total_blocks = 0, empty = 0;
  for (const auto& doc : docs) {
    if (!file_safe(doc.doc_id)) throw ValidationError("doc_id \"" + doc.doc_id + "\" cannot be used as a file name");
    const auto source = config_.extractor_dir / (doc.doc_id + ".jsonl");
    const auto target = blocks_dir / (doc.doc_id + ".jsonl");
    std::vector<ingest::TextBlock> blocks;
    try {
      blocks = ingest::load_blocks(doc, source);
    } catch (const ingest::EmptyDocumentError& e) {
      log_->warn("empty_document", {{"doc_id", doc.doc_id}, {"message", e.what()}});
      fs::remove(target);
      report.push_back({{"doc_id", doc.doc_id}, {"blocks", 0}, {"empty", true}});
      ++empty;
      continue;
    }
    std::vector<std::string> lines;
    lines.reserve(blocks.size());
    for (const auto& b : blocks) lines.push_back(ingest::to_json_line(b));
    io::write_file_atomic(target, join_lines(lines));
    report.push_back({{"doc_id", doc.doc_id}, {"blocks", blocks.size()}, {"empty", false}});
    total_blocks += blocks.size();
  }
  io::write_file_atomic(out(files::kCorpus), ingest::manifest_to_json(docs));
  io::write_file_atomic(out(files::kIngestReport), report.dump(2) + "\n");
  StageOutcome o;
  o.summary = {{"documents", docs.size()}, {"blocks", total_blocks}, {"empty_documents", empty}};
  return o;
}

// ---- clean -----------------------------------------------------------------

StageOutcome Pipeline::clean() {
  const auto docs = load_corpus(out(files::kCorpus));
  const auto captions = config_.caption_keywords
                            ? clean::CaptionFilter(clean::CaptionFilter::parse_keyword_list(io::read_file(*config_.caption_keywords)))
                            : clean::CaptionFilter();
  std::unique_ptr<clean::SegmenterBackend> segmenter;
  if (config_.segmenter == "remote") {
    segmenter = std::make_unique<remote::RemoteSegmenter>(remote::ServiceOptions{config_.service_url});
  } else {
    segmenter = std::make_unique<clean::HeuristicSegmenter>();
  }

  std::vector<std::string> lines;
  ordered_json per_doc = ordered_json::array();
  clean::CleaningReport total;
  for (const auto& doc : docs) {
    const auto path = out(files::kBlocksDir) / (doc.doc_id + ".jsonl");
    if (!fs::exists(path)) {
      log_->info("skip_document", {{"doc_id", doc.doc_id}, {"reason", "no blocks"}});
      continue;
    }
    const auto blocks = ingest::load_blocks(doc, path);
    auto result = clean::clean_pipeline(doc.doc_id, blocks, captions, *segmenter);
    if (result.report.segmenter_fallback) {
      log_->warn("segmenter_fallback", {{"doc_id", doc.doc_id}, {"message", result.report.segmenter_error}});
    }
    for (const auto& p : result.paragraphs) lines.push_back(clean::to_json_line(p));
    auto doc_report = ordered_json::parse(clean::report_to_json(result.report));
    ordered_json entry;
    entry["doc_id"] = doc.doc_id;
    for (auto& [k, v] : doc_report.items()) entry[k] = v;
    per_doc.push_back(std::move(entry));

    const auto& r = result.report;
    total.blocks_in += r.blocks_in;
    total.dropped_caption += r.dropped_caption;
    total.dropped_min_tokens += r.dropped_min_tokens;
    total.dropped_numeric += r.dropped_numeric;
    total.dropped_repeats += r.dropped_repeats;
    total.paragraphs_out += r.paragraphs_out;
    total.segmenter_fallback = total.segmenter_fallback || r.segmenter_fallback;
  }
  io::write_file_atomic(out(files::kParagraphs), join_lines(lines));
  ordered_json totals;
  totals["blocks_in"] = total.blocks_in;
  totals["dropped_caption"] = total.dropped_caption;
  totals["dropped_min_tokens"] = total.dropped_min_tokens;
  totals["dropped_numeric"] = total.dropped_numeric;
  totals["dropped_repeats"] = total.dropped_repeats;
  totals["paragraphs_out"] = total.paragraphs_out;
  totals["segmenter_fallback"] = total.segmenter_fallback;
  ordered_json report;
  report["documents"] = std::move(per_doc);
  report["totals"] = totals;
  io::write_file_atomic(out(files::kCleaningReport), report.dump(2) + "\n");
  StageOutcome o;
  o.summary = totals;
  return o;
}

// ---- tag -------------------------------------------------------------------

namespace {

// Identical prompts must see one deterministic call order, so only a plain
// HTTP backend runs concurrently.
int worker_count(const config::PipelineConfig& c) {
  if (!c.backend || c.backend->kind != "http" || c.backend->noise) return 1;
  return c.backend->max_in_flight;
}

int tolerance_exit(std::size_t failures, std::size_t total, double tolerance) {
  if (total == 0) return 0;
  return static_cast<double>(failures) / static_cast<double>(total) > tolerance ? kExitParseTolerance : 0;
}

}  // namespace

StageOutcome Pipeline::tag() {
  const auto paragraphs = load_paragraphs(out(files::kParagraphs));
  std::vector<std::string> lines(paragraphs.size());
  StageOutcome o;
  o.summary["strategy"] = config::strategy_name(config_.strategy);
  o.summary["paragraphs"] = paragraphs.size();

  if (config_.strategy == Strategy::kSimilarity) {
    const auto descriptions = load_descriptions(config_.descriptions);
    std::unique_ptr<tagger::SimilarityBackend> backend;
    if (config_.similarity_backend == "remote") {
      backend = std::make_unique<remote::RemoteEmbeddingSimilarity>(remote::ServiceOptions{config_.service_url});
    } else {
      backend = std::make_unique<tagger::TfidfSimilarity>();
    }
    for (std::size_t i = 0; i < paragraphs.size(); ++i) {
      const auto& p = paragraphs[i];
      lines[i] = tagger::to_json_line(tagger::assign_sdg(p.para_id, p.text, descriptions, *backend), p.doc_id);
    }
    io::write_file_atomic(out(files::tags(config_.strategy)), join_lines(lines));
    return o;
  }

  auto client = make_client();
  const auto prompts = llm::PromptSet::builtin(config_.corrected_prompts);
  std::atomic<std::size_t> failures{0};
  parallel_for(paragraphs.size(), worker_count(config_), [&](std::size_t i) {
    const auto& p = paragraphs[i];
    ordered_json line;
    line["para_id"] = p.para_id;
    line["doc_id"] = p.doc_id;
    try {
      const auto r = llm::two_step_classify(p.text, *client, prompts);
      line["sdgs"] = set_json(r.sdgs);
      line["sentiment_label"] = r.sentiment;
      for (const auto& w : r.warnings) {
        log_->warn("parse_warning", {{"para_id", p.para_id}, {"rule", w.rule}, {"message", w.message}});
      }
    } catch (const llm::ResponseParseError& e) {
      ++failures;
      log_->warn("parse_failure", {{"para_id", p.para_id}, {"message", e.what()}, {"raw_text", e.raw_text()}});
      line["sdgs"] = ordered_json::array();
      line["sentiment_label"] = nullptr;
      line["error"] = e.what();
    }
    lines[i] = line.dump();
  });
  io::write_file_atomic(out(files::tags(config_.strategy)), join_lines(lines));
  last_stats_ = client->stats();
  o.summary["parse_failures"] = failures.load();
  o.exit_code = tolerance_exit(failures, paragraphs.size(), config_.parse_failure_tolerance);
  return o;
}

// ---- sentiment -------------------------------------------------------------

StageOutcome Pipeline::sentiment() {
  std::vector<std::string> lines;
  StageOutcome o;
  o.summary["strategy"] = config::strategy_name(config_.strategy);
  const auto emit = [&](const std::string& para_id, const std::string& doc_id, const sentiment::Distribution& d) {
    ordered_json line;
    line["para_id"] = para_id;
    line["doc_id"] = doc_id;
    line["p0"] = num(d.p0);
    line["p1"] = num(d.p1);
    line["p2"] = num(d.p2);
    line["expected"] = num(sentiment::expected_sentiment(d));
    lines.push_back(line.dump());
  };

  if (config_.strategy == Strategy::kLlm) {
    // Labels come from the two-step tag output, as one-hot distributions.
    std::size_t skipped = 0;
    for (const auto& row : read_stage_jsonl(out(files::tags(Strategy::kLlm)), "tag")) {
      if (!row.contains("sentiment_label") || row["sentiment_label"].is_null()) {
        ++skipped;
        continue;
      }
      emit(row.at("para_id").get<std::string>(), row.at("doc_id").get<std::string>(),
           sentiment::one_hot(row["sentiment_label"].get<int>()));
    }
    o.summary["skipped"] = skipped;
  } else {
    std::unique_ptr<sentiment::Classifier> classifier;
    if (config_.sentiment_backend == "remote") {
      classifier = std::make_unique<remote::RemoteSentiment>(remote::ServiceOptions{config_.service_url});
    } else {
      const auto rules = llm::MockRules::load(config_.sentiment_lexicon);
      classifier = std::make_unique<sentiment::LexiconClassifier>(rules.negative, rules.positive);
    }
    for (const auto& p : load_paragraphs(out(files::kParagraphs))) emit(p.para_id, p.doc_id, classifier->classify(p.text));
  }
  io::write_file_atomic(out(files::sentiment(config_.strategy)), join_lines(lines));
  o.summary["paragraphs"] = lines.size();
  return o;
}

// ---- interlink -------------------------------------------------------------

StageOutcome Pipeline::interlink() {
  const auto paragraphs = load_paragraphs(out(files::kParagraphs));
  const auto descriptions = render_descriptions(load_descriptions(config_.descriptions));
  auto client = make_client();
  const auto prompts = llm::PromptSet::builtin(config_.corrected_prompts);
  std::vector<std::string> lines(paragraphs.size());
  std::atomic<std::size_t> failures{0}, records{0}, partial{0}, stage2{0};

  parallel_for(paragraphs.size(), worker_count(config_), [&](std::size_t i) {
    const auto& p = paragraphs[i];
    ordered_json line;
    line["para_id"] = p.para_id;
    line["doc_id"] = p.doc_id;
    try {
      const auto r = llm::interlink_extract(p.text, descriptions, *client, prompts);
      line["main"] = r.assignment.main.value();
      line["main_reason"] = r.assignment.main_reason;
      ordered_json secs = ordered_json::array();
      for (const auto& s : r.assignment.secondaries) secs.push_back({{"sdg", s.sdg.value()}, {"reason", s.reason}});
      line["secondaries"] = std::move(secs);
      ordered_json recs = ordered_json::array();
      for (const auto& rec : r.records) recs.push_back(record_json(rec));
      line["records"] = std::move(recs);
      ordered_json fails = ordered_json::array();
      for (const auto& f : r.failures) {
        fails.push_back({{"secondary", f.secondary.value()}, {"message", f.message}});
        log_->warn("pair_failure", {{"para_id", p.para_id}, {"secondary", f.secondary.value()}, {"message", f.message}});
      }
      line["failures"] = std::move(fails);
      line["partial"] = r.partial();
      for (const auto& w : r.warnings) {
        log_->warn("parse_warning", {{"para_id", p.para_id}, {"rule", w.rule}, {"message", w.message}});
      }
      records += r.records.size();
      stage2 += r.stage2_calls;
      if (r.partial()) ++partial;
    } catch (const llm::ResponseParseError& e) {
      ++failures;
      log_->warn("parse_failure", {{"para_id", p.para_id}, {"message", e.what()}, {"raw_text", e.raw_text()}});
      line["main"] = nullptr;
      line["records"] = ordered_json::array();
      line["error"] = e.what();
    }
    lines[i] = line.dump();
  });
  io::write_file_atomic(out(files::kInterlinkages), join_lines(lines));
  last_stats_ = client->stats();
  StageOutcome o;
  o.summary = {{"paragraphs", paragraphs.size()},
               {"records", records.load()},
               {"stage2_calls", stage2.load()},
               {"partial", partial.load()},
               {"parse_failures", failures.load()}};
  o.exit_code = tolerance_exit(failures, paragraphs.size(), config_.parse_failure_tolerance);
  return o;
}

// ---- robustness ------------------------------------------------------------

StageOutcome Pipeline::robustness() {
  const auto paragraphs = load_paragraphs(out(files::kParagraphs));
  std::vector<std::size_t> picked(paragraphs.size());
  std::iota(picked.begin(), picked.end(), std::size_t{0});
  Engine engine(mix64(config_.robustness.seed));
  fisher_yates(std::span<std::size_t>(picked), engine);
  picked.resize(std::min(picked.size(), config_.robustness.sample_size));
  std::sort(picked.begin(), picked.end());

  std::vector<llm::RobustnessParagraph> sample;
  for (auto i : picked) sample.push_back({paragraphs[i].para_id, paragraphs[i].text});
  auto client = make_client();
  const auto prompts = llm::PromptSet::builtin(config_.corrected_prompts);
  const auto report =
      llm::run_robustness_protocol(prompts.variants(), sample, *client, config_.robustness.runs, config_.robustness.seed);
  io::write_file_atomic(out(files::kRobustness), llm::to_json(report) + "\n");
  last_stats_ = client->stats();

  StageOutcome o;
  o.summary = {{"sample", sample.size()},
               {"runs", config_.robustness.runs},
               {"requests", report.requests},
               {"order_sensitivity", report.order_sensitivity},
               {"parse_failures", report.parse_failures}};
  const auto attempted = report.requests;
  o.exit_code = tolerance_exit(report.parse_failures, attempted, config_.parse_failure_tolerance);
  return o;
}

// ---- eval ------------------------------------------------------------------

namespace {

analytics::LabelMap load_predictions(const fs::path& path, Strategy strategy) {
  analytics::LabelMap out;
  for (const auto& row : read_stage_jsonl(path, "tag")) {
    const auto id = row.at("para_id").get<std::string>();
    if (strategy == Strategy::kSimilarity) {
      out[id] = {SdgId(row.at("best").get<int>())};
    } else {
      out[id] = set_from_json(row.at("sdgs"));
    }
  }
  return out;
}

analytics::EvalReport evaluate(const fs::path& tags, Strategy strategy, const analytics::GoldSet& gold, Logger& log) {
  const auto all = load_predictions(tags, strategy);
  analytics::LabelMap predictions;
  for (const auto& [item, _] : gold.labels) {
    const auto it = all.find(item);
    if (it == all.end()) throw ValidationError("gold item \"" + item + "\" has no prediction");
    predictions.emplace(item, it->second);
  }
  if (gold.coarsened) log.info("gold_coarsened", {{"targets", gold.coarsened}});
  return analytics::match_rate(predictions, gold.labels);
}

}  // namespace

StageOutcome Pipeline::eval() {
  if (!config_.gold) throw ValidationError("eval needs a gold CSV (--gold or config key \"gold\")");
  const auto gold = analytics::load_gold_csv(*config_.gold);
  const auto report = evaluate(out(files::tags(config_.strategy)), config_.strategy, gold, *log_);
  io::write_file_atomic(out(files::eval(config_.strategy)), analytics::eval_json(report) + "\n");
  StageOutcome o;
  o.summary = {{"items", report.n_items}, {"match_rate", num(report.match_rate)}, {"precision", num(report.precision)}};
  return o;
}

// ---- report ----------------------------------------------------------------

StageOutcome Pipeline::report() {
  const auto docs = load_corpus(out(files::kCorpus));
  std::map<std::string, std::string> country;
  for (const auto& d : docs) country[d.doc_id] = d.country;
  const auto country_of = [&](const std::string& doc_id) {
    const auto it = country.find(doc_id);
    if (it == country.end()) throw ValidationError("paragraph from unknown document \"" + doc_id + "\"");
    return it->second;
  };

  analytics::ReportInputs inputs;
  std::vector<std::pair<std::string, double>> values;
  for (const auto& row : read_stage_jsonl(out(files::sentiment(config_.strategy)), "sentiment")) {
    const auto c = country_of(row.at("doc_id").get<std::string>());
    if (c == "N/A") continue;
    values.emplace_back(c, row.at("expected").get<double>());
  }
  inputs.scores = analytics::country_scores(values);

  std::vector<std::pair<std::string, SdgId>> assignments;
  const auto tags_path = out(files::tags(config_.strategy));
  for (const auto& row : read_stage_jsonl(tags_path, "tag")) {
    const auto c = country_of(row.at("doc_id").get<std::string>());
    if (c == "N/A") continue;
    const auto sdgs = config_.strategy == Strategy::kSimilarity ? std::set<SdgId>{SdgId(row.at("best").get<int>())}
                                                                : set_from_json(row.at("sdgs"));
    for (const auto& s : sdgs) {
      if (s != SdgId::none()) assignments.emplace_back(c, s);
    }
  }
  inputs.shares = analytics::category_shares(assignments);

  std::size_t record_count = 0;
  if (fs::exists(out(files::kInterlinkages))) {
    for (const auto& row : io::read_jsonl(out(files::kInterlinkages))) {
      for (const auto& r : row.at("records")) {
        inputs.graph.add(record_from_json(r));
        ++record_count;
      }
    }
  }
  if (config_.gold) inputs.eval = evaluate(tags_path, config_.strategy, analytics::load_gold_csv(*config_.gold), *log_);

  analytics::export_report(out(files::kReportDir), inputs);
  StageOutcome o;
  o.summary = {{"countries", inputs.scores.size()},
               {"assignments", assignments.size()},
               {"interlinkage_records", record_count},
               {"edges", inputs.graph.edges().size()},
               {"eval", inputs.eval.has_value()}};
  return o;
}

}  // namespace sdglens::pipeline
