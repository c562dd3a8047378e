#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "vaxpass/core/errors.hpp"
#include "vaxpass/crypto/signature.hpp"

using namespace vaxpass;
using namespace vaxpass::crypto;

TEST_CASE("sign then verify round-trips", "[signature]") {
    Drbg rng(0, "sig-seed");
    auto kp = signing_keygen(rng);
    CHECK(kp.sk.size() == 64);
    CHECK(kp.pk.size() == 32);
    auto sig = sign(kp.sk, to_bytes("dispatch 7"));
    CHECK(sig.bytes.size() == 64);
    CHECK(verify(kp.pk, to_bytes("dispatch 7"), sig));
    CHECK_FALSE(verify(kp.pk, to_bytes("dispatch 8"), sig));
    CHECK(sign(kp.sk, to_bytes("dispatch 7")) == sig);
}

TEST_CASE("keygen is reproducible from the seed", "[signature]") {
    Drbg a(0, "s"), b(0, "s"), c(0, "t");
    auto ka = signing_keygen(a);
    CHECK(signing_keygen(b).pk == ka.pk);
    CHECK(signing_keygen(c).pk != ka.pk);
}

TEST_CASE("a signature does not verify under another key", "[signature]") {
    Drbg rng(0, "two-keys");
    auto k1 = signing_keygen(rng);
    auto k2 = signing_keygen(rng);
    auto sig = sign(k1.sk, to_bytes("m"));
    CHECK_FALSE(verify(k2.pk, to_bytes("m"), sig));
}

TEST_CASE("bit flips in message or signature are rejected", "[signature]") {
    Drbg rng(0, "flip");
    auto kp = signing_keygen(rng);
    std::mt19937_64 gen(1);
    for (int i = 0; i < 1000; ++i) {
        Bytes msg = rng.bytes(1 + gen() % 64);
        auto sig = sign(kp.sk, msg);
        if (gen() % 2) {
            msg[gen() % msg.size()] ^= static_cast<std::uint8_t>(1u << (gen() % 8));
        } else {
            sig.bytes[gen() % 64] ^= static_cast<std::uint8_t>(1u << (gen() % 8));
        }
        bool ok = true;
        try {
            ok = verify(kp.pk, msg, sig);
        } catch (const Error&) {
            ok = false;
        }
        REQUIRE_FALSE(ok);
    }
}

TEST_CASE("random byte strings never verify", "[signature]") {
    Drbg rng(0, "forge");
    auto kp = signing_keygen(rng);
    for (int i = 0; i < 10000; ++i) {
        Signature sig{rng.bytes(64)};
        REQUIRE_FALSE(verify(kp.pk, to_bytes("target"), sig));
    }
}

TEST_CASE("malformed lengths raise DecodeError", "[signature]") {
    Drbg rng(0, "len");
    auto kp = signing_keygen(rng);
    auto sig = sign(kp.sk, to_bytes("m"));
    auto kind = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::InvalidArgument;
    };
    CHECK(kind([&] { sign(Bytes(10), to_bytes("m")); }) == ErrorKind::DecodeError);
    CHECK(kind([&] { verify(Bytes(31), to_bytes("m"), sig); }) == ErrorKind::DecodeError);
    CHECK(kind([&] { verify(kp.pk, to_bytes("m"), Signature{Bytes(63)}); }) == ErrorKind::DecodeError);
}
