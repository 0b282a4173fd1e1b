#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace powercf {

/// 64-bit FNV-1a; stable across platforms, used to stamp outputs with the
/// config they came from.
std::uint64_t fnv1a64(std::string_view bytes);

/// 16 lowercase hex digits.
std::string hex64(std::uint64_t value);

}  // namespace powercf
