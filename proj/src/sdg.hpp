#pragma once

#include <array>
#include <compare>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sdglens {

inline constexpr int kSdgCount = 17;

// 0 means "not relevant to any SDG"; 1..17 are the goals.
class SdgId {
 public:
  constexpr SdgId() = default;
  // Throws ValidationError outside 0..17.
  explicit SdgId(int value);

  static std::optional<SdgId> try_from(long long value);
  static constexpr SdgId none() { return SdgId(); }

  constexpr int value() const { return value_; }
  constexpr bool is_goal() const { return value_ >= 1; }

  friend constexpr auto operator<=>(SdgId, SdgId) = default;

 private:
  int value_ = 0;
};

// Goal names as listed in the SDG assignment prompts.
std::string_view sdg_name(SdgId id);

// Case/punctuation-insensitive comparison against the canonical name.
bool sdg_name_matches(SdgId id, std::string_view name);

enum class SdgCategory { kEnvironment, kSociety, kEconomy };

std::string_view category_name(SdgCategory category);
// Throws ValidationError for SDG 0.
SdgCategory category_of(SdgId id);

struct SdgDescription {
  SdgId sdg;
  std::string name;
  std::string description;
};

// Loads the JSON array {sdg, name, description}. Requires exactly 17 entries,
// one per goal, with names matching the canonical list verbatim. Result is
// ordered by goal number.
std::vector<SdgDescription> load_descriptions(const std::filesystem::path& path);
std::vector<SdgDescription> parse_descriptions(std::string_view json_text);

// "1) No poverty: <description>" lines, used to fill {Read_description}.
std::string render_descriptions(const std::vector<SdgDescription>& descriptions);

}  // namespace sdglens
