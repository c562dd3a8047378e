#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "vaxpass/core/bytes.hpp"

namespace vaxpass::crypto {

// Original Keccak-256 (0x01 domain padding, as used by Ethereum), not the
// FIPS-202 SHA3-256 variant.
class Keccak256 {
public:
    static constexpr std::size_t digest_size = 32;
    static constexpr std::size_t rate = 136;

    Keccak256() = default;

    Keccak256& update(ByteView data);
    std::array<std::uint8_t, digest_size> finish();

private:
    void absorb_block();

    std::array<std::uint64_t, 25> state_{};
    std::array<std::uint8_t, rate> buffer_{};
    std::size_t buffered_ = 0;
};

void keccak_f1600(std::array<std::uint64_t, 25>& state);

}  // namespace vaxpass::crypto
