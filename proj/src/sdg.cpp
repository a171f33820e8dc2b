#include "sdg.hpp"

#include <set>

#include <json.hpp>

#include "error.hpp"
#include "io.hpp"
#include "unicode.hpp"

namespace sdglens {

namespace {

constexpr std::array<std::string_view, kSdgCount + 1> kNames = {
    "Not relevant",
    "No poverty",
    "Zero Hunger",
    "Good health and well-being",
    "Quality education",
    "Gender equality",
    "Clean Water and Sanitation",
    "Affordable and clean energy",
    "Decent work and economic growth",
    "Industry, innovation and infrastructure",
    "Reduced inequalities",
    "Sustainable cities and communities",
    "Responsible consumption and production",
    "Climate action",
    "Life below water",
    "Life on land",
    "Peace, justice and strong institutions",
    "Partnerships for the goals",
};

std::string letters_only(std::string_view text) {
  std::string out;
  for (char32_t cp : unicode::decode(text)) {
    if (unicode::is_word_char(cp)) unicode::append_utf8(out, unicode::to_lower(cp));
  }
  return out;
}

}  // namespace

SdgId::SdgId(int value) : value_(value) {
  if (value < 0 || value > kSdgCount) {
    throw ValidationError("SDG number " + std::to_string(value) + " outside 0..17");
  }
}

std::optional<SdgId> SdgId::try_from(long long value) {
  if (value < 0 || value > kSdgCount) return std::nullopt;
  return SdgId(static_cast<int>(value));
}

std::string_view sdg_name(SdgId id) { return kNames[static_cast<std::size_t>(id.value())]; }

bool sdg_name_matches(SdgId id, std::string_view name) {
  const std::string given = letters_only(name);
  if (id.value() == 0) return given == "notrelevant" || given == "none" || given.empty();
  return given == letters_only(sdg_name(id));
}

std::string_view category_name(SdgCategory category) {
  switch (category) {
    case SdgCategory::kEnvironment:
      return "environment";
    case SdgCategory::kSociety:
      return "society";
    case SdgCategory::kEconomy:
      return "economy";
  }
  return "";
}

SdgCategory category_of(SdgId id) {
  switch (id.value()) {
    case 6:
    case 13:
    case 14:
    case 15:
      return SdgCategory::kEnvironment;
    case 8:
    case 9:
    case 10:
    case 12:
      return SdgCategory::kEconomy;
    case 0:
      throw ValidationError("SDG 0 has no category");
    default:
      return SdgCategory::kSociety;
  }
}

std::vector<SdgDescription> parse_descriptions(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("descriptions: ") + e.what());
  }
  if (!doc.is_array()) throw ValidationError("descriptions: expected a JSON array");
  if (doc.size() != kSdgCount) {
    throw ValidationError("descriptions: expected 17 entries, found " + std::to_string(doc.size()));
  }
  std::vector<SdgDescription> out(kSdgCount);
  std::set<int> seen;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& entry = doc[i];
    const std::string where = "descriptions[" + std::to_string(i) + "]";
    if (!entry.is_object() || !entry.contains("sdg") || !entry["sdg"].is_number_integer()) {
      throw ValidationError(where + ": missing integer field \"sdg\"");
    }
    const auto number = entry["sdg"].get<long long>();
    if (number < 1 || number > kSdgCount) throw ValidationError(where + ": sdg outside 1..17");
    if (!seen.insert(static_cast<int>(number)).second) {
      throw ValidationError(where + ": duplicate sdg " + std::to_string(number));
    }
    for (const char* field : {"name", "description"}) {
      if (!entry.contains(field) || !entry[field].is_string()) {
        throw ValidationError(where + ": missing string field \"" + field + "\"");
      }
    }
    SdgId id(static_cast<int>(number));
    auto name = entry["name"].get<std::string>();
    if (name != sdg_name(id)) {
      throw ValidationError(where + ": name \"" + name + "\" does not match \"" + std::string(sdg_name(id)) + "\"");
    }
    out[static_cast<std::size_t>(number - 1)] = {id, std::move(name), entry["description"].get<std::string>()};
  }
  return out;
}

std::vector<SdgDescription> load_descriptions(const std::filesystem::path& path) {
  return parse_descriptions(io::read_file(path));
}

std::string render_descriptions(const std::vector<SdgDescription>& descriptions) {
  std::string out;
  for (const auto& d : descriptions) {
    if (!out.empty()) out.push_back('\n');
    out += std::to_string(d.sdg.value()) + ") " + d.name + ": " + d.description;
  }
  return out;
}

}  // namespace sdglens
