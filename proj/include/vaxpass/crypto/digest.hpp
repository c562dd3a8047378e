#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "vaxpass/core/bytes.hpp"

namespace vaxpass::crypto {

/// 32-byte Keccak-256 output.
struct Digest {
    std::array<std::uint8_t, 32> bytes{};

    std::string hex() const { return to_hex(bytes); }
    ByteView view() const { return bytes; }
    bool is_zero() const;

    static Digest from_hex(std::string_view hex);
    static Digest from_bytes(ByteView b);

    auto operator<=>(const Digest&) const = default;
};

Digest hash(ByteView msg);
Digest hash(std::string_view msg);

/// Hash of the concatenation of the given parts, without separators.
Digest hash_concat(std::initializer_list<ByteView> parts);

/// Commit-by-hashing: commit(m) = H(m); opening is recomputation.
inline Digest commit(ByteView msg) { return hash(msg); }
inline bool open_commitment(const Digest& c, ByteView msg) { return hash(msg) == c; }

}  // namespace vaxpass::crypto

template <>
struct std::hash<vaxpass::crypto::Digest> {
    std::size_t operator()(const vaxpass::crypto::Digest& d) const noexcept {
        std::size_t h = 0;
        for (int i = 0; i < 8; ++i) h = (h << 8) | d.bytes[i];
        return h;
    }
};
