#pragma once

#include <cstdint>

#include "vaxpass/core/bytes.hpp"
#include "vaxpass/crypto/drbg.hpp"

// Unidirectional single-hop proxy re-encryption (AFGH-style, on the Type-A
// pairing) used as a KEM; the payload travels under XSalsa20-Poly1305 with the
// encapsulated key.
//
//   keys          sk = a,  pk = g^a
//   encrypt       k <- Z_r,  capsule = pk^k = g^{ak},  K = e(g,g)^k
//   rekey A->B    rk = pk_B^{1/a} = g^{b/a}
//   re-encrypt    capsule' = e(g^{ak}, g^{b/a}) = e(g,g)^{bk}   (lands in GT)
//   decrypt       original: K = e(capsule, g)^{1/a};  re-encrypted: K = capsule'^{1/b}
//
// Re-encrypted capsules live in GT and have no pairing input left, which is
// what makes the scheme single-hop; rk reveals neither a nor b, and rk together
// with b only yields g^{1/a}.
namespace vaxpass::crypto {

struct PreKeyPair {
    Bytes sk;  // 20-byte scalar
    Bytes pk;  // 128-byte G1 point
};

struct ReEncryptionKey {
    Bytes material;  // 128-byte G1 point

    bool operator==(const ReEncryptionKey&) const = default;
};

enum class CiphertextLevel : std::uint8_t { Original = 1, ReEncrypted = 2 };

struct Ciphertext {
    CiphertextLevel level = CiphertextLevel::Original;
    Bytes bytes;  // capsule (128) || nonce (24) || secretbox

    /// level byte || bytes
    Bytes serialize() const;
    /// Throws DecodeError on an unknown level or truncated body.
    static Ciphertext parse(ByteView b);

    bool operator==(const Ciphertext&) const = default;
};

PreKeyPair pre_keygen(Drbg& rng);
Ciphertext pre_encrypt(ByteView pk, ByteView msg, Drbg& rng);
ReEncryptionKey pre_rekey(ByteView sk_a, ByteView pk_b);
/// Throws SingleHopViolation on an already re-encrypted ciphertext.
Ciphertext pre_reencrypt(const ReEncryptionKey& rk, const Ciphertext& ct);
/// Throws DecryptFailure when sk is not the key the ciphertext targets.
Bytes pre_decrypt(ByteView sk, const Ciphertext& ct);

}  // namespace vaxpass::crypto
