#pragma once

#include <cstdint>
#include <string_view>

#include "vaxpass/core/bytes.hpp"
#include "vaxpass/crypto/digest.hpp"

namespace vaxpass::crypto {

// Deterministic random bit generator: Keccak-256 in counter mode over a seed.
// Every randomised operation in the library draws from one of these so that a
// scenario seed fixes all key material, nonces and ephemeral scalars.
class Drbg {
public:
    explicit Drbg(std::uint64_t seed);
    Drbg(std::uint64_t seed, std::string_view label);

    /// Independent child stream; the parent is not advanced.
    Drbg fork(std::string_view label) const;

    Bytes bytes(std::size_t n);
    std::uint64_t next_u64();
    /// Uniform in [0, bound); bound must be non-zero.
    std::uint64_t uniform(std::uint64_t bound);

private:
    explicit Drbg(const Digest& key) : key_(key) {}

    Digest key_;
    std::uint64_t counter_ = 0;
};

}  // namespace vaxpass::crypto
