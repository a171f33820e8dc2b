#include "ingest.hpp"

#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "io.hpp"
#include "net.hpp"
#include "unicode.hpp"

namespace sdglens::ingest {

namespace {

using nlohmann::json;

bool valid_country(const std::string& code) {
  if (code == "N/A") return true;
  return code.size() == 3 && std::all_of(code.begin(), code.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

bool valid_language(const std::string& tag) {
  static const std::regex kBcp47("^[A-Za-z]{2,3}(-[A-Za-z0-9]{1,8})*$");
  return std::regex_match(tag, kBcp47);
}

std::string required_string(const json& entry, std::size_t index, const char* field, bool allow_empty = false) {
  if (!entry.contains(field)) throw ManifestError(index, field, "missing");
  const auto& v = entry[field];
  if (!v.is_string()) throw ManifestError(index, field, "expected a string");
  auto s = v.get<std::string>();
  if (!allow_empty && s.empty()) throw ManifestError(index, field, "must not be empty");
  return s;
}

DocumentRecord parse_record(const json& entry, std::size_t index) {
  if (!entry.is_object()) throw ManifestError(index, "<entry>", "expected an object");
  DocumentRecord rec;
  rec.doc_id = required_string(entry, index, "doc_id");
  rec.country = required_string(entry, index, "country");
  if (!valid_country(rec.country)) {
    throw ManifestError(index, "country", "\"" + rec.country + "\" is not an ISO-3166 alpha-3 code or N/A");
  }
  if (entry.contains("submission_round") && !entry["submission_round"].is_null()) {
    const auto& round = entry["submission_round"];
    if (!round.is_number_integer() || round.get<long long>() < 1) {
      throw ManifestError(index, "submission_round", "expected an integer >= 1");
    }
    rec.submission_round = static_cast<int>(round.get<long long>());
  }
  const auto type_name = required_string(entry, index, "doc_type");
  const auto type = parse_doc_type(type_name);
  if (!type) throw ManifestError(index, "doc_type", "unknown document type \"" + type_name + "\"");
  rec.doc_type = *type;
  rec.language = required_string(entry, index, "language");
  if (!valid_language(rec.language)) {
    throw ManifestError(index, "language", "\"" + rec.language + "\" is not a BCP-47 tag");
  }
  rec.source_uri = required_string(entry, index, "source_uri", true);
  rec.title = required_string(entry, index, "title", true);
  return rec;
}

std::string http_get(const std::string& url, const FetchOptions& options) {
  std::string last_error;
  for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(options.retry_delay * (1 << (attempt - 1)));
    const auto res = net::get(url, options.timeout);
    if (!res.transport_ok) {
      last_error = res.error;
      continue;
    }
    if (res.status == 200) return res.body;
    last_error = "HTTP " + std::to_string(res.status);
    if (res.status < 500 && res.status != 429) break;
  }
  throw Error(ErrorCode::kBackend, "cannot fetch manifest " + url + ": " + last_error);
}

}  // namespace

std::string_view doc_type_name(DocType type) {
  switch (type) {
    case DocType::kNdc:
      return "ndc";
    case DocType::kPeerReviewed:
      return "peer_reviewed";
    case DocType::kNationalReport:
      return "national_report";
    case DocType::kCivilSociety:
      return "civil_society";
    case DocType::kNews:
      return "news";
  }
  return "";
}

std::optional<DocType> parse_doc_type(std::string_view name) {
  for (auto t : {DocType::kNdc, DocType::kPeerReviewed, DocType::kNationalReport, DocType::kCivilSociety,
                 DocType::kNews}) {
    if (doc_type_name(t) == name) return t;
  }
  return std::nullopt;
}

double numeric_char_ratio(std::string_view text) {
  std::size_t digits = 0;
  std::size_t visible = 0;
  for (char32_t cp : unicode::decode(text)) {
    if (unicode::is_space(cp)) continue;
    ++visible;
    if (unicode::is_ascii_digit(cp)) ++digits;
  }
  return visible == 0 ? 0.0 : static_cast<double>(digits) / static_cast<double>(visible);
}

TextBlock make_block(std::size_t index, std::string text, std::optional<int> page) {
  TextBlock b;
  b.block_index = index;
  b.page = page;
  b.word_count = unicode::count_words(text);
  b.numeric_char_ratio = numeric_char_ratio(text);
  b.text = std::move(text);
  return b;
}

std::vector<DocumentRecord> parse_manifest(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw ValidationError("manifest must be a JSON array");
  std::vector<DocumentRecord> records;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    auto rec = parse_record(doc[i], i);
    if (!ids.insert(rec.doc_id).second) {
      throw ManifestError(i, "doc_id", "duplicate doc_id \"" + rec.doc_id + "\"");
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<DocumentRecord> fetch_manifest(const std::string& source, const FetchOptions& options) {
  if (net::is_url(source)) return parse_manifest(http_get(source, options));
  std::error_code ec;
  if (!std::filesystem::is_regular_file(source, ec)) {
    throw IoError("manifest source " + source + " is unreachable");
  }
  return parse_manifest(io::read_file(source));
}

std::vector<TextBlock> parse_blocks(const DocumentRecord& doc, std::string_view content) {
  if (!unicode::is_valid_utf8(content)) {
    throw ValidationError("document " + doc.doc_id + ": block file is not valid UTF-8");
  }
  std::vector<TextBlock> blocks;
  std::istringstream lines{std::string(content)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (unicode::trim(line).empty()) continue;
    const std::string where = "document " + doc.doc_id + " line " + std::to_string(lineno);
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      throw ValidationError(where + ": " + e.what());
    }
    if (!obj.is_object() || !obj.contains("index") || !obj["index"].is_number_integer()) {
      throw ValidationError(where + ": missing integer field \"index\"");
    }
    if (!obj.contains("text") || !obj["text"].is_string()) {
      throw ValidationError(where + ": missing string field \"text\"");
    }
    const auto index = obj["index"].get<long long>();
    if (index != static_cast<long long>(blocks.size())) {
      const bool backwards = index < static_cast<long long>(blocks.size());
      throw ValidationError(where + ": " + (backwards ? "non-monotonic" : "non-contiguous") + " block index " +
                            std::to_string(index));
    }
    std::optional<int> page;
    if (obj.contains("page") && !obj["page"].is_null()) {
      if (!obj["page"].is_number_integer() || obj["page"].get<long long>() < 1) {
        throw ValidationError(where + ": page must be an integer >= 1");
      }
      page = static_cast<int>(obj["page"].get<long long>());
    }
    blocks.push_back(make_block(static_cast<std::size_t>(index), obj["text"].get<std::string>(), page));
  }
  if (blocks.empty()) throw EmptyDocumentError(doc.doc_id);
  return blocks;
}

std::vector<TextBlock> load_blocks(const DocumentRecord& doc, const std::filesystem::path& extractor_output) {
  return parse_blocks(doc, io::read_file(extractor_output));
}

std::string to_json_line(const TextBlock& block) {
  json j = {{"index", block.block_index}, {"text", block.text}};
  if (block.page) j["page"] = *block.page;
  j["word_count"] = block.word_count;
  j["numeric_char_ratio"] = block.numeric_char_ratio;
  return j.dump();
}

std::string manifest_to_json(const std::vector<DocumentRecord>& records) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json e;
    e["doc_id"] = r.doc_id;
    e["country"] = r.country;
    if (r.submission_round) e["submission_round"] = *r.submission_round;
    e["doc_type"] = doc_type_name(r.doc_type);
    e["language"] = r.language;
    e["source_uri"] = r.source_uri;
    e["title"] = r.title;
    arr.push_back(std::move(e));
  }
  return arr.dump(2) + "\n";
}

}  // namespace sdglens::ingest
