#pragma once

#include "vaxpass/core/bytes.hpp"
#include "vaxpass/crypto/drbg.hpp"

namespace vaxpass::crypto {

// Ed25519 signatures. Signing is deterministic, so event logs that carry
// signatures replay byte-for-byte.
struct SigningKeyPair {
    Bytes sk;  // 64 bytes: seed || pk, libsodium layout
    Bytes pk;  // 32 bytes
};

struct Signature {
    Bytes bytes;  // 64 bytes

    std::string hex() const { return to_hex(bytes); }
    bool operator==(const Signature&) const = default;
};

SigningKeyPair signing_keygen(Drbg& rng);

/// Throws DecodeError if sk is not a 64-byte secret key.
Signature sign(ByteView sk, ByteView msg);

/// Throws DecodeError on a malformed pk or signature encoding; otherwise
/// returns whether sig is valid for msg under pk.
bool verify(ByteView pk, ByteView msg, const Signature& sig);

}  // namespace vaxpass::crypto
