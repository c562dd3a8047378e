#include "vaxpass/crypto/digest.hpp"

#include <algorithm>

#include "vaxpass/core/errors.hpp"
#include "vaxpass/crypto/keccak.hpp"

namespace vaxpass::crypto {

bool Digest::is_zero() const {
    return std::all_of(bytes.begin(), bytes.end(), [](auto b) { return b == 0; });
}

Digest Digest::from_bytes(ByteView b) {
    require(b.size() == 32, ErrorKind::DecodeError, "digest must be 32 bytes");
    Digest d;
    std::copy(b.begin(), b.end(), d.bytes.begin());
    return d;
}

Digest Digest::from_hex(std::string_view hex) {
    return from_bytes(vaxpass::from_hex(hex));
}

Digest hash(ByteView msg) {
    return Digest{Keccak256{}.update(msg).finish()};
}

Digest hash(std::string_view msg) {
    auto p = reinterpret_cast<const std::uint8_t*>(msg.data());
    return hash(ByteView(p, msg.size()));
}

Digest hash_concat(std::initializer_list<ByteView> parts) {
    Keccak256 k;
    for (auto p : parts) k.update(p);
    return Digest{k.finish()};
}

}  // namespace vaxpass::crypto
