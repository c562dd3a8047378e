#include "vaxpass/crypto/pre.hpp"

#include <sodium.h>

#include "vaxpass/core/errors.hpp"
#include "vaxpass/crypto/digest.hpp"
#include "vaxpass/crypto/pairing.hpp"

namespace vaxpass::crypto {

namespace pg = pairing;

namespace {

constexpr std::size_t capsule_bytes = 2 * pg::field_bytes;
constexpr std::size_t header_bytes = capsule_bytes + crypto_secretbox_NONCEBYTES;

Bytes derive_key(const pg::Fq2& k) {
    auto d = hash_concat({to_bytes("vaxpass-pre-kem"), pg::encode_gt(k)});
    return Bytes(d.bytes.begin(), d.bytes.end());
}

void ensure_sodium() {
    static const bool ready = sodium_init() >= 0;
    if (!ready) throw std::runtime_error("libsodium failed to initialise");
}

}  // namespace

Bytes Ciphertext::serialize() const {
    Bytes out;
    out.reserve(bytes.size() + 1);
    out.push_back(static_cast<std::uint8_t>(level));
    append(out, bytes);
    return out;
}

Ciphertext Ciphertext::parse(ByteView b) {
    require(!b.empty(), ErrorKind::DecodeError, "empty ciphertext");
    auto level = b[0];
    require(level == 1 || level == 2, ErrorKind::DecodeError, "unknown ciphertext level");
    require(b.size() >= 1 + header_bytes + crypto_secretbox_MACBYTES, ErrorKind::DecodeError,
            "truncated ciphertext");
    return {static_cast<CiphertextLevel>(level), Bytes(b.begin() + 1, b.end())};
}

PreKeyPair pre_keygen(Drbg& rng) {
    auto a = pg::random_scalar(rng);
    return {pg::encode_scalar(a), pg::encode_g1(pg::mul(pg::generator(), a))};
}

Ciphertext pre_encrypt(ByteView pk, ByteView msg, Drbg& rng) {
    ensure_sodium();
    auto pk_point = pg::decode_g1(pk);
    require(!pk_point.infinity, ErrorKind::DecodeError, "public key is the identity");

    auto k = pg::random_scalar(rng);
    auto key = derive_key(pg::pow(pg::gt_generator(), k));
    auto nonce = rng.bytes(crypto_secretbox_NONCEBYTES);

    Ciphertext ct;
    ct.bytes = pg::encode_g1(pg::mul(pk_point, k));
    append(ct.bytes, nonce);
    auto offset = ct.bytes.size();
    ct.bytes.resize(offset + crypto_secretbox_MACBYTES + msg.size());
    crypto_secretbox_easy(ct.bytes.data() + offset, msg.data(), msg.size(), nonce.data(), key.data());
    return ct;
}

ReEncryptionKey pre_rekey(ByteView sk_a, ByteView pk_b) {
    auto a = pg::decode_scalar(sk_a);
    auto pk_point = pg::decode_g1(pk_b);
    require(!pk_point.infinity, ErrorKind::DecodeError, "public key is the identity");
    return {pg::encode_g1(pg::mul(pk_point, pg::scalar_inverse(a)))};
}

Ciphertext pre_reencrypt(const ReEncryptionKey& rk, const Ciphertext& ct) {
    if (ct.level != CiphertextLevel::Original) {
        fail(ErrorKind::SingleHopViolation, "ciphertext has already been re-encrypted");
    }
    require(ct.bytes.size() >= header_bytes, ErrorKind::DecodeError, "truncated ciphertext");
    auto rk_point = pg::decode_g1(rk.material);
    auto capsule = pg::decode_g1(ByteView(ct.bytes).first(capsule_bytes));

    Ciphertext out;
    out.level = CiphertextLevel::ReEncrypted;
    out.bytes = pg::encode_gt(pg::pair(capsule, rk_point));
    out.bytes.insert(out.bytes.end(), ct.bytes.begin() + capsule_bytes, ct.bytes.end());
    return out;
}

Bytes pre_decrypt(ByteView sk, const Ciphertext& ct) {
    ensure_sodium();
    auto inv = pg::scalar_inverse(pg::decode_scalar(sk));
    require(ct.bytes.size() >= header_bytes + crypto_secretbox_MACBYTES, ErrorKind::DecodeError,
            "truncated ciphertext");
    ByteView capsule = ByteView(ct.bytes).first(capsule_bytes);

    pg::Fq2 shared;
    if (ct.level == CiphertextLevel::Original) {
        shared = pg::pow(pg::pair(pg::decode_g1(capsule), pg::generator()), inv);
    } else {
        shared = pg::pow(pg::decode_gt(capsule), inv);
    }
    auto key = derive_key(shared);

    const auto* nonce = ct.bytes.data() + capsule_bytes;
    const auto* boxed = nonce + crypto_secretbox_NONCEBYTES;
    auto boxed_len = ct.bytes.size() - header_bytes;
    Bytes plain(boxed_len - crypto_secretbox_MACBYTES);
    if (crypto_secretbox_open_easy(plain.data(), boxed, boxed_len, nonce, key.data()) != 0) {
        fail(ErrorKind::DecryptFailure, "ciphertext does not open under this key");
    }
    return plain;
}

}  // namespace vaxpass::crypto
