#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"

namespace sdglens::ingest {

enum class DocType { kNdc, kPeerReviewed, kNationalReport, kCivilSociety, kNews };

std::string_view doc_type_name(DocType type);
std::optional<DocType> parse_doc_type(std::string_view name);

struct DocumentRecord {
  std::string doc_id;
  std::string country;  // ISO-3166 alpha-3 or "N/A"
  std::optional<int> submission_round;
  DocType doc_type = DocType::kNdc;
  std::string language;  // BCP-47
  std::string source_uri;
  std::string title;

  friend bool operator==(const DocumentRecord&, const DocumentRecord&) = default;
};

struct TextBlock {
  std::size_t block_index = 0;
  std::optional<int> page;
  std::string text;
  std::size_t word_count = 0;
  double numeric_char_ratio = 0.0;

  friend bool operator==(const TextBlock&, const TextBlock&) = default;
};

// Builds a block with word_count and numeric_char_ratio derived from text.
TextBlock make_block(std::size_t index, std::string text, std::optional<int> page = std::nullopt);

// ASCII digits over non-whitespace code points; 0 for an all-whitespace text.
double numeric_char_ratio(std::string_view text);

// A manifest entry failed validation. `index` is the array position.
class ManifestError : public ValidationError {
 public:
  ManifestError(std::size_t index, std::string field, const std::string& message)
      : ValidationError("manifest entry " + std::to_string(index) + " field \"" + field + "\": " + message),
        index_(index),
        field_(std::move(field)) {}

  std::size_t index() const { return index_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t index_;
  std::string field_;
};

class EmptyDocumentError : public Error {
 public:
  explicit EmptyDocumentError(const std::string& doc_id)
      : Error(ErrorCode::kEmptyDocument, "empty document " + doc_id) {}
};

struct FetchOptions {
  std::chrono::milliseconds timeout{10000};
  int max_retries = 3;  // retries after the first attempt
  std::chrono::milliseconds retry_delay{200};
};

// All-or-nothing: validation stops at the first bad entry and nothing is
// returned.
std::vector<DocumentRecord> parse_manifest(std::string_view json_text);

// `source` is a local path or an http(s):// URL.
std::vector<DocumentRecord> fetch_manifest(const std::string& source, const FetchOptions& options = {});

// Line-delimited JSON, one {index, page?, text} object per line. Indices must
// run 0,1,2,... in file order.
std::vector<TextBlock> load_blocks(const DocumentRecord& doc, const std::filesystem::path& extractor_output);
std::vector<TextBlock> parse_blocks(const DocumentRecord& doc, std::string_view content);

std::string to_json_line(const TextBlock& block);

// Manifest text that parse_manifest reads back to the same records.
std::string manifest_to_json(const std::vector<DocumentRecord>& records);

}  // namespace sdglens::ingest
