#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vaxpass {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

inline std::string to_string(ByteView b) {
    return std::string(b.begin(), b.end());
}

inline void append(Bytes& out, ByteView tail) {
    out.insert(out.end(), tail.begin(), tail.end());
}

/// Lowercase hex, two characters per byte.
std::string to_hex(ByteView bytes);

/// Accepts upper or lower case; throws DecodeError on odd length or a non-hex digit.
Bytes from_hex(std::string_view hex);

}  // namespace vaxpass
