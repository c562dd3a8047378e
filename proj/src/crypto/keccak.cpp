#include "vaxpass/crypto/keccak.hpp"

#include <bit>
#include <cstring>

namespace vaxpass::crypto {

namespace {

constexpr std::array<std::uint64_t, 24> round_constants = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL,
    0x8000000080008000ULL, 0x000000000000808bULL, 0x0000000080000001ULL,
    0x8000000080008081ULL, 0x8000000000008009ULL, 0x000000000000008aULL,
    0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL,
    0x8000000000008003ULL, 0x8000000000008002ULL, 0x8000000000000080ULL,
    0x000000000000800aULL, 0x800000008000000aULL, 0x8000000080008081ULL,
    0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

constexpr std::array<int, 24> rotations = {
    1, 3, 6, 10, 15, 21, 28, 36, 45, 55, 2, 14, 27, 41, 56, 8, 25, 43, 62, 18, 39, 61, 20, 44,
};

constexpr std::array<int, 24> pi_lanes = {
    10, 7, 11, 17, 18, 3, 5, 16, 8, 21, 24, 4, 15, 23, 19, 13, 12, 2, 20, 14, 22, 9, 6, 1,
};

std::uint64_t load_le64(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

}  // namespace

void keccak_f1600(std::array<std::uint64_t, 25>& s) {
    std::array<std::uint64_t, 5> bc{};
    for (auto rc : round_constants) {
        // theta
        for (int i = 0; i < 5; ++i) bc[i] = s[i] ^ s[i + 5] ^ s[i + 10] ^ s[i + 15] ^ s[i + 20];
        for (int i = 0; i < 5; ++i) {
            std::uint64_t t = bc[(i + 4) % 5] ^ std::rotl(bc[(i + 1) % 5], 1);
            for (int j = 0; j < 25; j += 5) s[j + i] ^= t;
        }
        // rho + pi
        std::uint64_t t = s[1];
        for (int i = 0; i < 24; ++i) {
            int j = pi_lanes[i];
            std::uint64_t tmp = s[j];
            s[j] = std::rotl(t, rotations[i]);
            t = tmp;
        }
        // chi
        for (int j = 0; j < 25; j += 5) {
            for (int i = 0; i < 5; ++i) bc[i] = s[j + i];
            for (int i = 0; i < 5; ++i) s[j + i] ^= (~bc[(i + 1) % 5]) & bc[(i + 2) % 5];
        }
        // iota
        s[0] ^= rc;
    }
}

void Keccak256::absorb_block() {
    for (std::size_t i = 0; i < rate / 8; ++i) state_[i] ^= load_le64(buffer_.data() + 8 * i);
    keccak_f1600(state_);
    buffered_ = 0;
}

Keccak256& Keccak256::update(ByteView data) {
    for (auto byte : data) {
        buffer_[buffered_++] = byte;
        if (buffered_ == rate) absorb_block();
    }
    return *this;
}

std::array<std::uint8_t, Keccak256::digest_size> Keccak256::finish() {
    std::memset(buffer_.data() + buffered_, 0, rate - buffered_);
    buffer_[buffered_] ^= 0x01;
    buffer_[rate - 1] ^= 0x80;
    absorb_block();

    std::array<std::uint8_t, digest_size> out{};
    for (std::size_t i = 0; i < digest_size; ++i) {
        out[i] = static_cast<std::uint8_t>(state_[i / 8] >> (8 * (i % 8)));
    }
    state_ = {};
    return out;
}

}  // namespace vaxpass::crypto
