#include "vaxpass/crypto/drbg.hpp"

#include "vaxpass/core/errors.hpp"
#include "vaxpass/crypto/keccak.hpp"

namespace vaxpass::crypto {

namespace {

std::array<std::uint8_t, 8> be64(std::uint64_t v) {
    std::array<std::uint8_t, 8> out{};
    for (int i = 7; i >= 0; --i) {
        out[i] = static_cast<std::uint8_t>(v);
        v >>= 8;
    }
    return out;
}

}  // namespace

Drbg::Drbg(std::uint64_t seed) : Drbg(seed, "root") {}

Drbg::Drbg(std::uint64_t seed, std::string_view label) {
    auto s = be64(seed);
    Keccak256 k;
    k.update(to_bytes("vaxpass-drbg")).update(s).update(to_bytes(label));
    key_ = Digest{k.finish()};
}

Drbg Drbg::fork(std::string_view label) const {
    Keccak256 k;
    k.update(key_.bytes).update(to_bytes("fork")).update(to_bytes(label));
    return Drbg(Digest{k.finish()});
}

Bytes Drbg::bytes(std::size_t n) {
    Bytes out;
    out.reserve(n + 32);
    while (out.size() < n) {
        auto c = be64(counter_++);
        auto block = Keccak256{}.update(key_.bytes).update(c).finish();
        out.insert(out.end(), block.begin(), block.end());
    }
    out.resize(n);
    return out;
}

std::uint64_t Drbg::next_u64() {
    auto b = bytes(8);
    std::uint64_t v = 0;
    for (auto x : b) v = (v << 8) | x;
    return v;
}

std::uint64_t Drbg::uniform(std::uint64_t bound) {
    require(bound != 0, ErrorKind::InvalidArgument, "uniform bound must be non-zero");
    // rejection sampling removes modulo bias
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    for (;;) {
        auto v = next_u64();
        if (v < limit) return v % bound;
    }
}

}  // namespace vaxpass::crypto
