#include "parser.hpp"

#include <algorithm>
#include <optional>

#include "unicode.hpp"

namespace sdglens::parse {

namespace {

constexpr long long kHuge = 1'000'000'000LL;

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = ascii_lower(c);
  return out;
}

// Byte cursor over one line.
class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  bool done() const { return pos_ >= s_.size(); }
  char peek() const { return done() ? '\0' : s_[pos_]; }
  std::size_t pos() const { return pos_; }
  void reset(std::size_t p) { pos_ = p; }

  void skip_spaces() {
    while (!done() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  void skip_blank_lines() {
    while (!done() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r' || s_[pos_] == '\n')) ++pos_;
  }

  // One literal space in strict mode, any run of blanks in lenient mode.
  bool gap(bool lenient) {
    if (lenient) {
      skip_spaces();
      return true;
    }
    return take(" ", false);
  }

  bool take(std::string_view lit, bool icase) {
    if (s_.size() - pos_ < lit.size()) return false;
    for (std::size_t i = 0; i < lit.size(); ++i) {
      const char a = s_[pos_ + i];
      const char b = lit[i];
      if (icase ? ascii_lower(a) != ascii_lower(b) : a != b) return false;
    }
    pos_ += lit.size();
    return true;
  }

  // Word match: the literal must not run into a following letter.
  bool take_word(std::string_view lit, bool icase) {
    const auto save = pos_;
    if (!take(lit, icase)) return false;
    if (!done() && is_alpha(s_[pos_])) {
      pos_ = save;
      return false;
    }
    return true;
  }

  std::optional<long long> number() {
    if (done() || !is_digit(s_[pos_])) return std::nullopt;
    long long v = 0;
    while (!done() && is_digit(s_[pos_])) {
      v = std::min(kHuge, v * 10 + (s_[pos_] - '0'));
      ++pos_;
    }
    return v;
  }

  std::string_view rest() const { return done() ? std::string_view{} : s_.substr(pos_); }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

// Lenient line cleanup: drops markdown bold markers, then leading bullets and
// blanks. "•" is U+2022.
std::string lenient_clean(std::string_view line) {
  std::string s;
  s.reserve(line.size());
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '*' && i + 1 < line.size() && line[i + 1] == '*') {
      ++i;
      continue;
    }
    s.push_back(line[i]);
  }
  std::size_t b = 0;
  while (b < s.size()) {
    if (s[b] == ' ' || s[b] == '\t' || s[b] == '-' || s[b] == '*') {
      ++b;
    } else if (s.compare(b, 3, "\xE2\x80\xA2") == 0) {
      b += 3;
    } else {
      break;
    }
  }
  return std::string(unicode::trim(std::string_view(s).substr(b)));
}

std::string reason_text(std::string_view raw) {
  auto t = unicode::trim(raw);
  if (t == "-") return {};
  return std::string(t);
}

ParseError out_of_range(long long n, std::size_t line, std::string_view what) {
  return ParseError(ParseErrorKind::kOutOfRange,
                    std::string(what) + " number " + (n >= kHuge ? std::string("(too large)") : std::to_string(n)) +
                        " outside the allowed range",
                    line);
}

// ---- SDG assignment --------------------------------------------------------

enum class AssignKind { kMain, kMainReason, kSecondary, kSecondaryReason };

struct AssignLine {
  AssignKind kind;
  long long number;
  std::string text;
};

// Number part after "Main SDG": "(13)" in strict mode; lenient also accepts
// "(SDG 13)", "SDG 13" and a bare "13".
std::optional<long long> assignment_number(Cursor& c, bool lenient) {
  if (!lenient) {
    if (!c.take(" (", false)) return std::nullopt;
    auto n = c.number();
    if (!n || !c.take(")", false)) return std::nullopt;
    return n;
  }
  c.skip_spaces();
  if (c.take("(", false)) {
    c.skip_spaces();
    if (c.take_word("sdg", true)) c.skip_spaces();
    auto n = c.number();
    c.skip_spaces();
    if (!n || !c.take(")", false)) return std::nullopt;
    return n;
  }
  if (c.take_word("sdg", true)) {
    c.skip_spaces();
    c.take("-", false);
    c.skip_spaces();
  }
  return c.number();
}

std::optional<AssignLine> classify_assignment_line(std::string_view line, bool lenient) {
  Cursor c(line);
  bool is_reason = false;
  if (c.take_word("Reason", lenient)) {
    is_reason = true;
    if (!c.gap(lenient)) return std::nullopt;
  }
  bool is_main = false;
  if (c.take_word(is_reason ? "main" : "Main", lenient)) {
    is_main = true;
  } else if (!c.take_word(is_reason ? "secondary" : "Secondary", lenient)) {
    return std::nullopt;
  }
  if (!c.gap(lenient)) return std::nullopt;
  if (!c.take("SDG", lenient)) return std::nullopt;
  auto n = assignment_number(c, lenient);
  if (!n) return std::nullopt;
  if (lenient) c.skip_spaces();
  if (!c.take(":", false)) return std::nullopt;
  if (lenient) {
    c.skip_spaces();
  } else if (!c.done() && !c.take(" ", false)) {
    return std::nullopt;
  }
  AssignKind kind = is_reason ? (is_main ? AssignKind::kMainReason : AssignKind::kSecondaryReason)
                              : (is_main ? AssignKind::kMain : AssignKind::kSecondary);
  return AssignLine{kind, *n, std::string(unicode::trim(c.rest()))};
}

void check_name(SdgId id, const std::string& name, std::vector<Warning>& warnings) {
  if (!sdg_name_matches(id, name)) {
    warnings.push_back({"name_mismatch", "SDG " + std::to_string(id.value()) + " labelled \"" + name +
                                             "\"; the number is kept"});
  }
}

Parsed<SdgAssignment> parse_assignment_strict(std::string_view raw) {
  Parsed<SdgAssignment> out;
  auto lines = split_lines(unicode::trim(raw));
  std::size_t i = 0;
  const auto line_no = [&] { return i + 1; };
  if (lines.empty() || lines[0].empty()) throw ParseError(ParseErrorKind::kNoMainLine, "no main SDG line found");

  auto first = classify_assignment_line(lines[0], false);
  if (!first || first->kind != AssignKind::kMain) {
    throw ParseError(ParseErrorKind::kNoMainLine, "first line is not a main SDG line", 1);
  }
  auto main = SdgId::try_from(first->number);
  if (!main) throw out_of_range(first->number, 1, "main SDG");
  out.value.main = *main;
  check_name(*main, first->text, out.warnings);
  ++i;

  if (i < lines.size()) {
    if (auto l = classify_assignment_line(lines[i], false); l && l->kind == AssignKind::kMainReason) {
      if (l->number != first->number) {
        throw ParseError(ParseErrorKind::kNumberMismatch, "reason line number differs from main SDG", line_no());
      }
      out.value.main_reason = reason_text(l->text);
      ++i;
    }
  }

  std::set<int> seen;
  while (i < lines.size()) {
    auto header = classify_assignment_line(lines[i], false);
    if (!header) throw ParseError(ParseErrorKind::kMalformedLine, "unrecognized line", line_no());
    if (header->kind == AssignKind::kMain || header->kind == AssignKind::kMainReason) {
      throw ParseError(ParseErrorKind::kDuplicateMain, "repeated main SDG line", line_no());
    }
    if (header->kind != AssignKind::kSecondary) {
      throw ParseError(ParseErrorKind::kMalformedLine, "reason line without a secondary SDG line", line_no());
    }
    auto sdg = SdgId::try_from(header->number);
    if (!sdg || sdg->value() == 0) throw out_of_range(header->number, line_no(), "secondary SDG");
    if (out.value.main.value() == 0) {
      throw ParseError(ParseErrorKind::kSecondariesWithNone, "secondary SDGs listed with main SDG 0", line_no());
    }
    if (*sdg == out.value.main) {
      throw ParseError(ParseErrorKind::kMainAsSecondary, "main SDG repeated as secondary", line_no());
    }
    if (!seen.insert(sdg->value()).second) {
      throw ParseError(ParseErrorKind::kDuplicateSecondary,
                       "duplicate secondary SDG " + std::to_string(sdg->value()), line_no());
    }
    check_name(*sdg, header->text, out.warnings);
    ++i;
    std::optional<AssignLine> reason;
    if (i < lines.size()) reason = classify_assignment_line(lines[i], false);
    if (!reason || reason->kind != AssignKind::kSecondaryReason) {
      throw ParseError(ParseErrorKind::kMissingField, "secondary SDG without a reason line", line_no());
    }
    if (reason->number != header->number) {
      throw ParseError(ParseErrorKind::kNumberMismatch, "reason line number differs from secondary SDG", line_no());
    }
    out.value.secondaries.push_back({*sdg, reason_text(reason->text)});
    ++i;
  }
  return out;
}

Parsed<SdgAssignment> parse_assignment_lenient(std::string_view raw) {
  Parsed<SdgAssignment> out;
  auto& w = out.warnings;
  std::optional<long long> main_number;
  std::set<int> seen;
  std::string* last_reason = nullptr;
  bool main_reason_set = false;
  const auto lines = split_lines(raw);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const auto cleaned = lenient_clean(lines[i]);
    if (cleaned.empty()) {
      last_reason = nullptr;
      continue;
    }
    auto l = classify_assignment_line(cleaned, true);
    if (!l) {
      // Wrapped reason text continues on the next line.
      if (last_reason) {
        if (!last_reason->empty()) last_reason->push_back(' ');
        *last_reason += cleaned;
      }
      continue;
    }
    last_reason = nullptr;
    switch (l->kind) {
      case AssignKind::kMain: {
        if (main_number) {
          w.push_back({"duplicate_main", "ignoring repeated main SDG line " + std::to_string(line_no)});
          break;
        }
        auto main = SdgId::try_from(l->number);
        if (!main) throw out_of_range(l->number, line_no, "main SDG");
        main_number = l->number;
        out.value.main = *main;
        check_name(*main, l->text, w);
        break;
      }
      case AssignKind::kMainReason:
        if (!main_number || main_reason_set) break;
        if (l->number != *main_number) w.push_back({"number_mismatch", "main reason line number differs"});
        out.value.main_reason = reason_text(l->text);
        main_reason_set = true;
        last_reason = &out.value.main_reason;
        break;
      case AssignKind::kSecondary: {
        if (!main_number) break;  // secondaries before the main line are prose
        auto sdg = SdgId::try_from(l->number);
        if (!sdg) throw out_of_range(l->number, line_no, "secondary SDG");
        if (sdg->value() == 0) {
          w.push_back({"secondary_zero", "dropping secondary SDG 0"});
          break;
        }
        if (*sdg == out.value.main) {
          w.push_back({"main_as_secondary", "dropping main SDG repeated as secondary"});
          break;
        }
        if (!seen.insert(sdg->value()).second) {
          throw ParseError(ParseErrorKind::kDuplicateSecondary,
                           "duplicate secondary SDG " + std::to_string(sdg->value()), line_no);
        }
        check_name(*sdg, l->text, w);
        out.value.secondaries.push_back({*sdg, {}});
        break;
      }
      case AssignKind::kSecondaryReason: {
        if (out.value.secondaries.empty()) break;
        auto& target = out.value.secondaries.back();
        if (l->number != target.sdg.value()) {
          // Attach to the matching secondary when there is one.
          auto it = std::find_if(out.value.secondaries.begin(), out.value.secondaries.end(),
                                 [&](const SecondarySdg& s) { return s.sdg.value() == l->number; });
          if (it == out.value.secondaries.end()) {
            w.push_back({"number_mismatch", "secondary reason line number differs"});
            it = out.value.secondaries.end() - 1;
          }
          it->reason = reason_text(l->text);
          last_reason = &it->reason;
        } else {
          target.reason = reason_text(l->text);
          last_reason = &target.reason;
        }
        break;
      }
    }
  }
  if (!main_number) throw ParseError(ParseErrorKind::kNoMainLine, "no main SDG line found");
  if (out.value.main.value() == 0 && !out.value.secondaries.empty()) {
    w.push_back({"secondaries_with_none", "dropping secondary SDGs listed with main SDG 0"});
    out.value.secondaries.clear();
  }
  return out;
}

// ---- Interlinkage ----------------------------------------------------------

enum class Field { kPair, kRelationship, kDirectionality, kExplanation };

struct FieldLine {
  Field field;
  std::string value;
};

std::optional<FieldLine> classify_field_line(std::string_view line, bool lenient) {
  Cursor c(line);
  if (!lenient) c.take("- ", false);
  struct Label {
    std::string_view text;
    Field field;
  };
  static constexpr Label kLabels[] = {{"SDG Pair", Field::kPair},
                                      {"Relationship", Field::kRelationship},
                                      {"Directionality", Field::kDirectionality},
                                      {"Explanation", Field::kExplanation}};
  for (const auto& label : kLabels) {
    const auto save = c.pos();
    bool ok = false;
    if (lenient && label.field == Field::kPair) {
      ok = c.take("SDG", true) && (c.skip_spaces(), c.take_word("Pair", true));
    } else {
      ok = c.take_word(label.text, lenient);
    }
    if (ok) {
      if (lenient) c.skip_spaces();
      if (c.take(":", false)) {
        if (lenient) {
          c.skip_spaces();
        } else if (!c.done() && !c.take(" ", false)) {
          return std::nullopt;
        }
        return FieldLine{label.field, std::string(unicode::trim(c.rest()))};
      }
    }
    c.reset(save);
  }
  return std::nullopt;
}

struct PairNumbers {
  long long a;
  long long b;
};

void skip_sdg_words(Cursor& c, bool lenient) {
  while (true) {
    const auto save = c.pos();
    if (!c.take("SDG", lenient)) return;
    if (lenient) {
      c.skip_spaces();
      c.take("#", false);
      c.skip_spaces();
    } else if (!c.take(" ", false)) {
      c.reset(save);
      return;
    }
  }
}

bool take_pair_separator(Cursor& c, bool lenient) {
  if (c.take("-", false)) return true;
  if (!lenient) return false;
  for (std::string_view sep : {"\xE2\x80\x93", "\xE2\x80\x94", "/", ",", "&"}) {
    if (c.take(sep, false)) return true;
  }
  return c.take_word("and", true);
}

std::optional<PairNumbers> parse_pair_value(std::string_view value, bool lenient) {
  Cursor c(value);
  skip_sdg_words(c, lenient);
  auto a = c.number();
  if (!a) return std::nullopt;
  c.skip_spaces();
  if (!take_pair_separator(c, lenient)) return std::nullopt;
  c.skip_spaces();
  skip_sdg_words(c, lenient);
  auto b = c.number();
  if (!b) return std::nullopt;
  if (!lenient) {
    c.skip_spaces();
    if (!c.done()) return std::nullopt;
  }
  return PairNumbers{*a, *b};
}

std::string lenient_enum_value(std::string_view value) {
  std::string s = lower(unicode::trim(value));
  const auto strip = [](char ch) { return ch == '[' || ch == ']' || ch == '"' || ch == '\'' || ch == '`' || ch == '.'; };
  while (!s.empty() && strip(s.front())) s.erase(s.begin());
  while (!s.empty() && strip(s.back())) s.pop_back();
  return std::string(unicode::trim(s));
}

template <typename E>
std::optional<E> match_surface(const std::vector<std::pair<std::string_view, E>>& forms, std::string_view value,
                               bool lenient) {
  const std::string v = lenient ? lenient_enum_value(value) : lower(unicode::trim(value));
  for (const auto& [form, e] : forms) {
    if (v == form) return e;
  }
  if (lenient) {
    // "Trade-off (negative link)": accept a known form followed by a non-letter.
    for (const auto& [form, e] : forms) {
      if (form.empty() || v.size() <= form.size() || v.compare(0, form.size(), form) != 0) continue;
      if (!is_alpha(v[form.size()]) && v[form.size()] != '-') return e;
    }
  }
  return std::nullopt;
}

struct Group {
  std::size_t line = 0;
  std::optional<std::string> pair, relationship, directionality, explanation;
};

InterlinkageRecord finish_group(const Group& g, bool lenient, std::vector<Warning>& warnings) {
  const auto missing = [&](const char* name) {
    return ParseError(ParseErrorKind::kMissingField, std::string("interlinkage group missing ") + name, g.line);
  };
  if (!g.pair) throw missing("SDG Pair");
  if (!g.relationship) throw missing("Relationship");
  if (!g.explanation && !lenient) throw missing("Explanation");
  auto pair = parse_pair_value(*g.pair, lenient);
  if (!pair) throw ParseError(ParseErrorKind::kMalformedLine, "cannot read SDG pair \"" + *g.pair + "\"", g.line);
  InterlinkageRecord r;
  auto a = SdgId::try_from(pair->a);
  auto b = SdgId::try_from(pair->b);
  if (!a || a->value() == 0) throw out_of_range(pair->a, g.line, "pair SDG");
  if (!b || b->value() == 0) throw out_of_range(pair->b, g.line, "pair SDG");
  if (*a == *b) throw ParseError(ParseErrorKind::kSamePair, "SDG pair names the same goal twice", g.line);
  r.sdg_a = *a;
  r.sdg_b = *b;

  auto rel = match_surface(relationship_surface_forms(), *g.relationship, lenient);
  if (!rel) throw ParseError(ParseErrorKind::kUnknownValue, "unknown relationship \"" + *g.relationship + "\"", g.line);
  r.relationship = *rel;

  std::optional<Directionality> dir;
  if (g.directionality) {
    dir = match_surface(directionality_surface_forms(), *g.directionality, lenient);
    if (!dir) {
      throw ParseError(ParseErrorKind::kUnknownValue, "unknown directionality \"" + *g.directionality + "\"", g.line);
    }
  } else if (!(lenient && r.relationship == Relationship::kNeutral)) {
    throw missing("Directionality");
  }
  if (r.relationship == Relationship::kNeutral) {
    if (dir && *dir != Directionality::kNone) {
      warnings.push_back({"neutral_directionality",
                          "neutral relationship stated as " + std::string(directionality_name(*dir)) +
                              "; stored as none"});
    }
    r.directionality = Directionality::kNone;
  } else {
    if (*dir == Directionality::kNone) {
      throw ParseError(ParseErrorKind::kUnknownValue,
                       std::string(relationship_name(r.relationship)) + " needs inward, outward or both", g.line);
    }
    r.directionality = *dir;
  }
  r.explanation = g.explanation ? reason_text(*g.explanation) : std::string();
  return r;
}

Parsed<std::vector<InterlinkageRecord>> parse_interlinkage_impl(std::string_view raw, bool lenient) {
  Parsed<std::vector<InterlinkageRecord>> out;
  const auto lines = split_lines(raw);
  std::optional<Group> group;
  Field last = Field::kExplanation;
  bool continuing_explanation = false;

  const auto close = [&] {
    if (group) out.value.push_back(finish_group(*group, lenient, out.warnings));
    group.reset();
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const std::string cleaned = lenient ? lenient_clean(lines[i]) : std::string(lines[i]);
    if (unicode::trim(cleaned).empty()) {
      if (!lenient && group && last != Field::kExplanation) {
        throw ParseError(ParseErrorKind::kMissingField, "interlinkage group interrupted by a blank line", line_no);
      }
      continuing_explanation = false;
      continue;
    }
    auto f = classify_field_line(cleaned, lenient);
    if (!f) {
      if (!lenient) throw ParseError(ParseErrorKind::kMalformedLine, "unrecognized line", line_no);
      if (continuing_explanation && group && group->explanation) {
        *group->explanation += " " + cleaned;
      }
      continue;
    }
    continuing_explanation = false;
    if (f->field == Field::kPair) {
      if (!lenient && group && last != Field::kExplanation) {
        throw ParseError(ParseErrorKind::kMissingField, "interlinkage group ends before its Explanation", line_no);
      }
      close();
      group = Group{};
      group->line = line_no;
      group->pair = f->value;
      last = Field::kPair;
      continue;
    }
    if (!group) {
      if (!lenient) throw ParseError(ParseErrorKind::kMalformedLine, "field line before any SDG Pair", line_no);
      continue;
    }
    if (!lenient && static_cast<int>(f->field) != static_cast<int>(last) + 1) {
      throw ParseError(ParseErrorKind::kMalformedLine, "interlinkage fields out of order", line_no);
    }
    auto& slot = f->field == Field::kRelationship     ? group->relationship
                 : f->field == Field::kDirectionality ? group->directionality
                                                      : group->explanation;
    if (slot) {
      if (!lenient) throw ParseError(ParseErrorKind::kMalformedLine, "repeated field in interlinkage group", line_no);
      out.warnings.push_back({"repeated_field", "ignoring repeated field on line " + std::to_string(line_no)});
      continue;
    }
    slot = f->value;
    last = f->field;
    continuing_explanation = lenient && f->field == Field::kExplanation;
  }
  if (!lenient && group && last != Field::kExplanation) throw ParseError(ParseErrorKind::kMissingField, "interlinkage group ends before its Explanation", lines.size());
  close();
  return out;
}

// ---- SDG sets --------------------------------------------------------------

Parsed<std::set<SdgId>> parse_sdg_set_strict(std::string_view raw) {
  Parsed<std::set<SdgId>> out;
  const auto text = unicode::trim(raw);
  if (text.empty()) throw ParseError(ParseErrorKind::kNoLabel, "empty SDG list");
  Cursor c(text);
  while (true) {
    c.skip_blank_lines();
    if (c.take("SDG", false)) c.skip_spaces();
    auto n = c.number();
    if (!n) throw ParseError(ParseErrorKind::kMalformedLine, "expected an SDG number");
    auto id = SdgId::try_from(*n);
    if (!id) throw out_of_range(*n, 0, "SDG");
    out.value.insert(*id);
    c.skip_spaces();
    if (c.done()) break;
    if (!(c.take(",", false) || c.take(";", false) || c.take("\n", false) || c.take("\r\n", false))) {
      throw ParseError(ParseErrorKind::kMalformedLine, "unexpected text in SDG list");
    }
  }
  return out;
}

Parsed<std::set<SdgId>> parse_sdg_set_lenient(std::string_view raw) {
  Parsed<std::set<SdgId>> out;
  // Pass 1: explicit "SDG n" mentions.
  const std::string low = lower(raw);
  for (std::size_t pos = low.find("sdg"); pos != std::string::npos; pos = low.find("sdg", pos + 3)) {
    if (pos > 0 && is_alpha(low[pos - 1])) continue;
    Cursor c(std::string_view(low).substr(pos + 3));
    c.skip_spaces();
    if (c.take("s", false)) continue;  // "SDGs" is the word, not a mention
    c.take("-", false);
    c.take("#", false);
    c.skip_spaces();
    auto n = c.number();
    if (!n) continue;
    if (c.peek() == '.' && is_digit(c.rest().size() > 1 ? c.rest()[1] : '\0')) {
      // "SDG 13.2" names a target; keep the goal.
      out.warnings.push_back({"target_coarsened", "SDG target coarsened to goal " + std::to_string(*n)});
    }
    auto id = SdgId::try_from(*n);
    if (!id) {
      out.warnings.push_back({"out_of_range", "ignoring SDG number out of range"});
      continue;
    }
    out.value.insert(*id);
  }
  if (!out.value.empty()) return out;

  // Pass 2: standalone integers 0..17 (not part of decimals or percentages).
  std::size_t i = 0;
  while (i < raw.size()) {
    if (!is_digit(raw[i])) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < raw.size() && is_digit(raw[i])) ++i;
    const bool glued_before = start > 0 && (is_alpha(raw[start - 1]) || raw[start - 1] == '.' || raw[start - 1] == ',');
    const bool glued_after =
        i < raw.size() && (is_alpha(raw[i]) || raw[i] == '%' ||
                           ((raw[i] == '.' || raw[i] == ',') && i + 1 < raw.size() && is_digit(raw[i + 1])));
    if (glued_before || glued_after || i - start > 2) continue;
    const int n = std::stoi(std::string(raw.substr(start, i - start)));
    if (auto id = SdgId::try_from(n)) out.value.insert(*id);
  }
  if (out.value.empty()) throw ParseError(ParseErrorKind::kNoLabel, "no SDG numbers found");
  return out;
}

}  // namespace

// ---- public ----------------------------------------------------------------

std::string_view error_kind_name(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::kNoMainLine: return "no_main_line";
    case ParseErrorKind::kOutOfRange: return "out_of_range";
    case ParseErrorKind::kDuplicateSecondary: return "duplicate_secondary";
    case ParseErrorKind::kMainAsSecondary: return "main_as_secondary";
    case ParseErrorKind::kSecondariesWithNone: return "secondaries_with_none";
    case ParseErrorKind::kDuplicateMain: return "duplicate_main";
    case ParseErrorKind::kNumberMismatch: return "number_mismatch";
    case ParseErrorKind::kMalformedLine: return "malformed_line";
    case ParseErrorKind::kMissingField: return "missing_field";
    case ParseErrorKind::kUnknownValue: return "unknown_value";
    case ParseErrorKind::kSamePair: return "same_pair";
    case ParseErrorKind::kNoLabel: return "no_label";
    case ParseErrorKind::kAmbiguousLabel: return "ambiguous_label";
  }
  return "unknown";
}

const std::vector<std::pair<std::string_view, Relationship>>& relationship_surface_forms() {
  static const std::vector<std::pair<std::string_view, Relationship>> kForms = {
      {"synergy", Relationship::kSynergy},      {"synergies", Relationship::kSynergy},
      {"synergic", Relationship::kSynergy},     {"synergistic", Relationship::kSynergy},
      {"trade-off", Relationship::kTradeoff},   {"tradeoff", Relationship::kTradeoff},
      {"trade off", Relationship::kTradeoff},   {"trade-offs", Relationship::kTradeoff},
      {"tradeoffs", Relationship::kTradeoff},   {"trade offs", Relationship::kTradeoff},
      {"neutral", Relationship::kNeutral},
  };
  return kForms;
}

const std::vector<std::pair<std::string_view, Directionality>>& directionality_surface_forms() {
  static const std::vector<std::pair<std::string_view, Directionality>> kForms = {
      {"inward", Directionality::kInward}, {"outward", Directionality::kOutward},
      {"both", Directionality::kBoth},     {"none", Directionality::kNone},
      {"n/a", Directionality::kNone},      {"-", Directionality::kNone},
      {"", Directionality::kNone},
  };
  return kForms;
}

std::string_view relationship_name(Relationship r) {
  switch (r) {
    case Relationship::kSynergy: return "synergy";
    case Relationship::kTradeoff: return "tradeoff";
    case Relationship::kNeutral: return "neutral";
  }
  return "";
}

std::string_view directionality_name(Directionality d) {
  switch (d) {
    case Directionality::kInward: return "inward";
    case Directionality::kOutward: return "outward";
    case Directionality::kBoth: return "both";
    case Directionality::kNone: return "none";
  }
  return "";
}

Relationship relationship_from_name(std::string_view name) {
  for (auto r : {Relationship::kSynergy, Relationship::kTradeoff, Relationship::kNeutral}) {
    if (relationship_name(r) == name) return r;
  }
  throw ValidationError("unknown relationship \"" + std::string(name) + "\"");
}

Directionality directionality_from_name(std::string_view name) {
  for (auto d : {Directionality::kInward, Directionality::kOutward, Directionality::kBoth, Directionality::kNone}) {
    if (directionality_name(d) == name) return d;
  }
  throw ValidationError("unknown directionality \"" + std::string(name) + "\"");
}

namespace {

std::string single_line_problem(const std::string& text, const char* what) {
  if (text.find_first_of("\r\n") != std::string::npos) return std::string(what) + " spans lines";
  if (unicode::trim(text) != text) return std::string(what) + " has surrounding whitespace";
  if (text == "-") return std::string(what) + " is the empty-text marker";
  return {};
}

}  // namespace

std::string validate(const SdgAssignment& a) {
  if (auto p = single_line_problem(a.main_reason, "main reason"); !p.empty()) return p;
  if (a.main.value() == 0 && !a.secondaries.empty()) return "main SDG 0 with secondaries";
  std::set<int> seen;
  for (const auto& s : a.secondaries) {
    if (s.sdg.value() == 0) return "secondary SDG 0";
    if (s.sdg == a.main) return "main SDG listed as secondary";
    if (!seen.insert(s.sdg.value()).second) return "duplicate secondary";
    if (auto p = single_line_problem(s.reason, "secondary reason"); !p.empty()) return p;
  }
  return {};
}

std::string validate(const InterlinkageRecord& r) {
  if (!r.sdg_a.is_goal() || !r.sdg_b.is_goal()) return "pair SDGs must be 1..17";
  if (r.sdg_a == r.sdg_b) return "pair names the same SDG twice";
  if ((r.relationship == Relationship::kNeutral) != (r.directionality == Directionality::kNone)) {
    return "neutral relationships, and only those, have directionality none";
  }
  return single_line_problem(r.explanation, "explanation");
}

Parsed<SdgAssignment> parse_sdg_assignment(std::string_view raw, Mode mode) {
  if (mode == Mode::kStrict) return parse_assignment_strict(raw);
  try {
    return parse_assignment_strict(raw);
  } catch (const ParseError&) {
    return parse_assignment_lenient(raw);
  }
}

Parsed<std::vector<InterlinkageRecord>> parse_interlinkage(std::string_view raw, Mode mode) {
  if (mode == Mode::kStrict) return parse_interlinkage_impl(raw, false);
  try {
    return parse_interlinkage_impl(raw, false);
  } catch (const ParseError&) {
    return parse_interlinkage_impl(raw, true);
  }
}

Parsed<std::set<SdgId>> parse_sdg_set(std::string_view raw, Mode mode) {
  if (mode == Mode::kStrict) return parse_sdg_set_strict(raw);
  try {
    return parse_sdg_set_strict(raw);
  } catch (const ParseError&) {
    return parse_sdg_set_lenient(raw);
  }
}

int parse_sentiment_label(std::string_view raw) {
  std::set<int> found;
  std::size_t i = 0;
  while (i < raw.size()) {
    const unsigned char ch = static_cast<unsigned char>(raw[i]);
    if (!(is_digit(raw[i]) || is_alpha(raw[i]) || ch >= 0x80)) {
      ++i;
      continue;
    }
    // Token: a run of letters, digits and non-ASCII bytes, with '.'/',' kept
    // inside numbers so "2.5" is one token.
    const std::size_t start = i;
    while (i < raw.size()) {
      const unsigned char c = static_cast<unsigned char>(raw[i]);
      if (is_digit(raw[i]) || is_alpha(raw[i]) || c >= 0x80) {
        ++i;
      } else if ((raw[i] == '.' || raw[i] == ',') && i > start && is_digit(raw[i - 1]) && i + 1 < raw.size() &&
                 is_digit(raw[i + 1])) {
        ++i;
      } else {
        break;
      }
    }
    const auto token = raw.substr(start, i - start);
    if (token == "0" || token == "1" || token == "2") found.insert(token[0] - '0');
  }
  if (found.empty()) throw ParseError(ParseErrorKind::kNoLabel, "no sentiment class 0, 1 or 2 found");
  if (found.size() > 1) throw ParseError(ParseErrorKind::kAmbiguousLabel, "more than one sentiment class in response");
  return *found.begin();
}

std::string serialize_assignment(const SdgAssignment& a) {
  const auto reason = [](const std::string& r) { return r.empty() ? std::string("-") : r; };
  const std::string n = std::to_string(a.main.value());
  std::string out = "Main SDG (" + n + "): " + std::string(sdg_name(a.main)) + "\n";
  out += "Reason main SDG (" + n + "): " + reason(a.main_reason);
  for (const auto& s : a.secondaries) {
    const std::string m = std::to_string(s.sdg.value());
    out += "\nSecondary SDG (" + m + "): " + std::string(sdg_name(s.sdg));
    out += "\nReason secondary SDG (" + m + "): " + reason(s.reason);
  }
  return out;
}

std::string serialize_interlinkage(const InterlinkageRecord& r) {
  static constexpr std::string_view kRel[] = {"Synergy", "Trade-off", "Neutral"};
  static constexpr std::string_view kDir[] = {"Inward", "Outward", "Both", "None"};
  std::string out = "- SDG Pair: SDG " + std::to_string(r.sdg_a.value()) + " - SDG " + std::to_string(r.sdg_b.value());
  out += "\n- Relationship: " + std::string(kRel[static_cast<int>(r.relationship)]);
  out += "\n- Directionality: " + std::string(kDir[static_cast<int>(r.directionality)]);
  out += "\n- Explanation: " + (r.explanation.empty() ? std::string("-") : r.explanation);
  return out;
}

std::string serialize_interlinkages(const std::vector<InterlinkageRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    if (!out.empty()) out += "\n\n";
    out += serialize_interlinkage(r);
  }
  return out;
}

std::string serialize_sdg_set(const std::set<SdgId>& sdgs) {
  std::string out;
  for (auto id : sdgs) {
    if (!out.empty()) out += ", ";
    out += "SDG " + std::to_string(id.value());
  }
  return out;
}

}  // namespace sdglens::parse
