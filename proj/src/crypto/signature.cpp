#include "vaxpass/crypto/signature.hpp"

#include <sodium.h>

#include "vaxpass/core/errors.hpp"

namespace vaxpass::crypto {

namespace {

void ensure_sodium() {
    static const bool ready = sodium_init() >= 0;
    if (!ready) throw std::runtime_error("libsodium failed to initialise");
}

}  // namespace

SigningKeyPair signing_keygen(Drbg& rng) {
    ensure_sodium();
    auto seed = rng.bytes(crypto_sign_SEEDBYTES);
    SigningKeyPair kp{Bytes(crypto_sign_SECRETKEYBYTES), Bytes(crypto_sign_PUBLICKEYBYTES)};
    crypto_sign_seed_keypair(kp.pk.data(), kp.sk.data(), seed.data());
    return kp;
}

Signature sign(ByteView sk, ByteView msg) {
    ensure_sodium();
    require(sk.size() == crypto_sign_SECRETKEYBYTES, ErrorKind::DecodeError, "signing key must be 64 bytes");
    Signature sig{Bytes(crypto_sign_BYTES)};
    crypto_sign_detached(sig.bytes.data(), nullptr, msg.data(), msg.size(), sk.data());
    return sig;
}

bool verify(ByteView pk, ByteView msg, const Signature& sig) {
    ensure_sodium();
    require(pk.size() == crypto_sign_PUBLICKEYBYTES, ErrorKind::DecodeError, "public key must be 32 bytes");
    require(sig.bytes.size() == crypto_sign_BYTES, ErrorKind::DecodeError, "signature must be 64 bytes");
    return crypto_sign_verify_detached(sig.bytes.data(), msg.data(), msg.size(), pk.data()) == 0;
}

}  // namespace vaxpass::crypto
