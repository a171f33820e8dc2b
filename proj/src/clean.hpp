#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ingest.hpp"

namespace sdglens::clean {

using ingest::TextBlock;

struct Paragraph {
  std::string para_id;
  std::string doc_id;
  std::string text;
  std::size_t word_count = 0;
  std::vector<std::size_t> source_blocks;

  friend bool operator==(const Paragraph&, const Paragraph&) = default;
};

struct CleaningReport {
  std::size_t blocks_in = 0;
  std::size_t dropped_caption = 0;
  std::size_t dropped_min_tokens = 0;
  std::size_t dropped_numeric = 0;
  std::size_t dropped_repeats = 0;
  std::size_t paragraphs_out = 0;
  double mean_words_per_paragraph = 0.0;
  bool segmenter_fallback = false;
  std::string segmenter_error;

  std::size_t dropped_total() const {
    return dropped_caption + dropped_min_tokens + dropped_numeric + dropped_repeats;
  }
  friend bool operator==(const CleaningReport&, const CleaningReport&) = default;
};

// Block filters return true when the block should be dropped.
bool drop_min_tokens(const TextBlock& block);
bool drop_numeric_ratio(const TextBlock& block);

// Drops blocks starting (case-insensitively) with a caption keyword, then
// optional punctuation/whitespace, then a digit.
class CaptionFilter {
 public:
  CaptionFilter();  // built-in keyword list
  explicit CaptionFilter(std::vector<std::string> keywords);

  static std::vector<std::string> default_keywords();
  // One keyword per line; blank lines and '#' comments ignored.
  static std::vector<std::string> parse_keyword_list(std::string_view content);

  bool drop(const TextBlock& block) const;
  const std::vector<std::string>& keywords() const { return keywords_; }

 private:
  std::vector<std::string> keywords_;
  std::vector<std::vector<char32_t>> folded_;
};

inline constexpr std::size_t kRepeatMaxWords = 25;  // strictly fewer words
inline constexpr std::size_t kRepeatMaxCount = 5;   // strictly more occurrences

// Removes every occurrence of a short text that repeats too often.
std::vector<TextBlock> dedup_short_repeats(std::span<const TextBlock> blocks);

// Decides, for each adjacent pair of blocks, whether the second continues the
// sentence begun in the first. Returns blocks.size()-1 flags (empty for <2).
class SegmenterBackend {
 public:
  virtual ~SegmenterBackend() = default;
  virtual std::vector<bool> merge_decisions(std::span<const TextBlock> blocks) = 0;
};

// Merges when A lacks terminal punctuation (. ! ? : ;) and B starts with a
// lowercase letter or a digit.
class HeuristicSegmenter final : public SegmenterBackend {
 public:
  std::vector<bool> merge_decisions(std::span<const TextBlock> blocks) override;
  static bool should_merge(std::string_view first, std::string_view second);
};

struct MergeResult {
  std::vector<Paragraph> paragraphs;
  bool fallback = false;
  std::string error;
};

// Falls back to the heuristic when the backend throws or returns the wrong
// number of decisions.
MergeResult merge_paragraphs(std::string_view doc_id, std::span<const TextBlock> blocks,
                             SegmenterBackend& segmenter);

struct CleanResult {
  std::vector<Paragraph> paragraphs;
  CleaningReport report;
};

// caption -> min tokens -> numeric ratio -> repeats -> merge.
CleanResult clean_pipeline(std::string_view doc_id, std::span<const TextBlock> blocks,
                           const CaptionFilter& captions, SegmenterBackend& segmenter);

std::string paragraph_id(std::string_view doc_id, std::size_t ordinal);

std::string to_json_line(const Paragraph& p);
Paragraph paragraph_from_json(std::string_view line);
std::string report_to_json(const CleaningReport& r, int indent = 2);

}  // namespace sdglens::clean
