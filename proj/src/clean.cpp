#include "clean.hpp"

#include <cctype>
#include <cstdio>
#include <map>
#include <sstream>

#include <json.hpp>

#include "error.hpp"
#include "unicode.hpp"

namespace sdglens::clean {

namespace {

using nlohmann::json;

bool is_caption_separator(char32_t cp) {
  if (unicode::is_space(cp)) return true;
  if (cp < 0x80) return std::ispunct(static_cast<int>(cp)) != 0;
  switch (cp) {
    case 0xB0:    // degree sign, used as "N°"
    case 0xBA:    // masculine ordinal, "nº"
    case 0x2013:  // en dash
    case 0x2014:  // em dash
    case 0x2022:  // bullet
      return true;
    default:
      return false;
  }
}

std::vector<char32_t> folded(std::string_view text) {
  auto cps = unicode::decode(text);
  for (auto& cp : cps) cp = unicode::to_lower(cp);
  return cps;
}

}  // namespace

bool drop_min_tokens(const TextBlock& block) { return block.word_count < 2; }

bool drop_numeric_ratio(const TextBlock& block) { return block.numeric_char_ratio > 0.5; }

std::vector<std::string> CaptionFilter::default_keywords() {
  return {"figure", "figura", "fig",      "table", "tableau", "tabla",
          "chapter", "chapitre", "capítulo", "page", "pagina",  "página"};
}

std::vector<std::string> CaptionFilter::parse_keyword_list(std::string_view content) {
  std::vector<std::string> out;
  std::istringstream in{std::string(content)};
  std::string line;
  while (std::getline(in, line)) {
    auto kw = unicode::trim(line);
    if (kw.empty() || kw.front() == '#') continue;
    out.emplace_back(kw);
  }
  return out;
}

CaptionFilter::CaptionFilter() : CaptionFilter(default_keywords()) {}

CaptionFilter::CaptionFilter(std::vector<std::string> keywords) : keywords_(std::move(keywords)) {
  for (const auto& kw : keywords_) {
    if (kw.empty()) throw ValidationError("caption keyword must not be empty");
    folded_.push_back(folded(kw));
  }
}

bool CaptionFilter::drop(const TextBlock& block) const {
  const auto text = folded(block.text);
  std::size_t start = 0;
  while (start < text.size() && unicode::is_space(text[start])) ++start;
  for (const auto& kw : folded_) {
    if (text.size() - start < kw.size()) continue;
    if (!std::equal(kw.begin(), kw.end(), text.begin() + static_cast<std::ptrdiff_t>(start))) continue;
    std::size_t i = start + kw.size();
    while (i < text.size() && is_caption_separator(text[i])) ++i;
    if (i < text.size() && unicode::is_ascii_digit(text[i])) return true;
  }
  return false;
}

std::vector<TextBlock> dedup_short_repeats(std::span<const TextBlock> blocks) {
  std::vector<std::string> keys;
  keys.reserve(blocks.size());
  std::map<std::string, std::size_t> counts;
  for (const auto& b : blocks) {
    keys.push_back(unicode::normalize_for_compare(b.text));
    ++counts[keys.back()];
  }
  std::vector<TextBlock> kept;
  kept.reserve(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const bool repeated = counts[keys[i]] > kRepeatMaxCount && unicode::count_words(keys[i]) < kRepeatMaxWords;
    if (!repeated) kept.push_back(blocks[i]);
  }
  return kept;
}

bool HeuristicSegmenter::should_merge(std::string_view first, std::string_view second) {
  const auto a = unicode::decode(first);
  std::size_t end = a.size();
  while (end > 0 && unicode::is_space(a[end - 1])) --end;
  if (end == 0) return false;
  switch (a[end - 1]) {
    case U'.':
    case U'!':
    case U'?':
    case U':':
    case U';':
      return false;
    default:
      break;
  }
  const auto b = unicode::decode(second);
  std::size_t start = 0;
  while (start < b.size() && unicode::is_space(b[start])) ++start;
  if (start == b.size()) return false;
  return unicode::is_lower_letter(b[start]) || unicode::is_ascii_digit(b[start]);
}

std::vector<bool> HeuristicSegmenter::merge_decisions(std::span<const TextBlock> blocks) {
  std::vector<bool> out;
  for (std::size_t i = 1; i < blocks.size(); ++i) out.push_back(should_merge(blocks[i - 1].text, blocks[i].text));
  return out;
}

std::string paragraph_id(std::string_view doc_id, std::size_t ordinal) {
  char suffix[32];
  std::snprintf(suffix, sizeof suffix, "-p%04zu", ordinal);
  return std::string(doc_id) + suffix;
}

MergeResult merge_paragraphs(std::string_view doc_id, std::span<const TextBlock> blocks,
                             SegmenterBackend& segmenter) {
  MergeResult result;
  if (blocks.empty()) return result;
  std::vector<bool> merges;
  try {
    merges = segmenter.merge_decisions(blocks);
    if (merges.size() != blocks.size() - 1) {
      throw Error(ErrorCode::kBackend, "segmenter returned " + std::to_string(merges.size()) + " decisions for " +
                                           std::to_string(blocks.size() - 1) + " boundaries");
    }
  } catch (const std::exception& e) {
    result.fallback = true;
    result.error = e.what();
    HeuristicSegmenter heuristic;
    merges = heuristic.merge_decisions(blocks);
  }

  Paragraph current;
  const auto flush = [&] {
    current.doc_id = std::string(doc_id);
    current.para_id = paragraph_id(doc_id, result.paragraphs.size());
    result.paragraphs.push_back(std::move(current));
    current = Paragraph{};
  };
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (i > 0 && !merges[i - 1]) flush();
    if (!current.source_blocks.empty()) current.text.push_back(' ');
    current.text += blocks[i].text;
    current.word_count += blocks[i].word_count;
    current.source_blocks.push_back(blocks[i].block_index);
  }
  flush();
  return result;
}

CleanResult clean_pipeline(std::string_view doc_id, std::span<const TextBlock> blocks,
                           const CaptionFilter& captions, SegmenterBackend& segmenter) {
  CleanResult out;
  auto& r = out.report;
  r.blocks_in = blocks.size();

  std::vector<TextBlock> survivors;
  survivors.reserve(blocks.size());
  for (const auto& b : blocks) {
    if (captions.drop(b)) {
      ++r.dropped_caption;
    } else if (drop_min_tokens(b)) {
      ++r.dropped_min_tokens;
    } else if (drop_numeric_ratio(b)) {
      ++r.dropped_numeric;
    } else {
      survivors.push_back(b);
    }
  }
  auto deduped = dedup_short_repeats(survivors);
  r.dropped_repeats = survivors.size() - deduped.size();

  auto merged = merge_paragraphs(doc_id, deduped, segmenter);
  r.segmenter_fallback = merged.fallback;
  r.segmenter_error = merged.error;
  out.paragraphs = std::move(merged.paragraphs);
  r.paragraphs_out = out.paragraphs.size();
  std::size_t words = 0;
  for (const auto& p : out.paragraphs) words += p.word_count;
  r.mean_words_per_paragraph = r.paragraphs_out ? static_cast<double>(words) / static_cast<double>(r.paragraphs_out) : 0.0;
  return out;
}

std::string to_json_line(const Paragraph& p) {
  json j = {{"para_id", p.para_id},
            {"doc_id", p.doc_id},
            {"text", p.text},
            {"word_count", p.word_count},
            {"source_blocks", p.source_blocks}};
  return j.dump();
}

Paragraph paragraph_from_json(std::string_view line) {
  try {
    const auto j = json::parse(line);
    Paragraph p;
    p.para_id = j.at("para_id").get<std::string>();
    p.doc_id = j.at("doc_id").get<std::string>();
    p.text = j.at("text").get<std::string>();
    p.word_count = j.at("word_count").get<std::size_t>();
    p.source_blocks = j.at("source_blocks").get<std::vector<std::size_t>>();
    return p;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed paragraph record: ") + e.what());
  }
}

std::string report_to_json(const CleaningReport& r, int indent) {
  json j = {{"blocks_in", r.blocks_in},
            {"dropped_caption", r.dropped_caption},
            {"dropped_min_tokens", r.dropped_min_tokens},
            {"dropped_numeric", r.dropped_numeric},
            {"dropped_repeats", r.dropped_repeats},
            {"paragraphs_out", r.paragraphs_out},
            {"mean_words_per_paragraph", r.mean_words_per_paragraph},
            {"segmenter_fallback", r.segmenter_fallback}};
  if (!r.segmenter_error.empty()) j["segmenter_error"] = r.segmenter_error;
  return j.dump(indent);
}

}  // namespace sdglens::clean
