#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace sdglens {

// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

// FNV-1a, used for cheap deterministic seeding (not for cache keys).
std::uint64_t fnv1a64(std::string_view data);

}  // namespace sdglens
