#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "sdg.hpp"

namespace sdglens::parse {

enum class Mode { kStrict, kLenient };

enum class ParseErrorKind {
  kNoMainLine,
  kOutOfRange,
  kDuplicateSecondary,
  kMainAsSecondary,
  kSecondariesWithNone,
  kDuplicateMain,
  kNumberMismatch,
  kMalformedLine,
  kMissingField,
  kUnknownValue,
  kSamePair,
  kNoLabel,
  kAmbiguousLabel,
};

std::string_view error_kind_name(ParseErrorKind kind);

class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, const std::string& message, std::size_t line = 0)
      : Error(ErrorCode::kParse, message), kind_(kind), line_(line) {}
  ParseErrorKind kind() const { return kind_; }
  // 1-based line number, 0 when not tied to a line.
  std::size_t line() const { return line_; }

 private:
  ParseErrorKind kind_;
  std::size_t line_;
};

struct Warning {
  std::string rule;
  std::string message;
};

template <typename T>
struct Parsed {
  T value;
  std::vector<Warning> warnings;
};

struct SecondarySdg {
  SdgId sdg;
  std::string reason;
  friend bool operator==(const SecondarySdg&, const SecondarySdg&) = default;
};

struct SdgAssignment {
  SdgId main;
  std::string main_reason;
  std::vector<SecondarySdg> secondaries;
  friend bool operator==(const SdgAssignment&, const SdgAssignment&) = default;
};

enum class Relationship { kSynergy, kTradeoff, kNeutral };
enum class Directionality { kInward, kOutward, kBoth, kNone };

std::string_view relationship_name(Relationship r);      // "synergy", "tradeoff", "neutral"
std::string_view directionality_name(Directionality d);  // "inward", ...
Relationship relationship_from_name(std::string_view name);      // throws ValidationError
Directionality directionality_from_name(std::string_view name);  // throws ValidationError

struct InterlinkageRecord {
  SdgId sdg_a;
  SdgId sdg_b;
  Relationship relationship = Relationship::kNeutral;
  Directionality directionality = Directionality::kNone;
  std::string explanation;
  friend bool operator==(const InterlinkageRecord&, const InterlinkageRecord&) = default;
};

// Record-level invariants; a non-empty string describes the first violation.
std::string validate(const SdgAssignment& a);
std::string validate(const InterlinkageRecord& r);

// Lenient mode first tries strict parsing; a strict success is returned
// unchanged, so anything strict accepts lenient accepts identically.
Parsed<SdgAssignment> parse_sdg_assignment(std::string_view raw, Mode mode);
Parsed<std::vector<InterlinkageRecord>> parse_interlinkage(std::string_view raw, Mode mode);
// SDG list answers such as "7, 13" or "SDG 7\nSDG 13". Strict requires the
// whole text to be the list; lenient scans for "SDG n" mentions, then bare
// numbers.
Parsed<std::set<SdgId>> parse_sdg_set(std::string_view raw, Mode mode);
// The single distinct standalone 0, 1 or 2 in the text.
int parse_sentiment_label(std::string_view raw);

std::string serialize_assignment(const SdgAssignment& a);
std::string serialize_interlinkage(const InterlinkageRecord& r);
std::string serialize_interlinkages(const std::vector<InterlinkageRecord>& records);
std::string serialize_sdg_set(const std::set<SdgId>& sdgs);

// Surface forms accepted for each enum (lowercase). Exposed for tests.
const std::vector<std::pair<std::string_view, Relationship>>& relationship_surface_forms();
const std::vector<std::pair<std::string_view, Directionality>>& directionality_surface_forms();

}  // namespace sdglens::parse
