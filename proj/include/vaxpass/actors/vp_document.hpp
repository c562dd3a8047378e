#pragma once

#include <cstdint>
#include <string>

#include "vaxpass/core/bytes.hpp"
#include "vaxpass/crypto/digest.hpp"

namespace vaxpass::actors {

/// The plaintext passport. Serialized as JSON with a fixed key order so the
/// digest signed by the government is reproducible.
struct VPDocument {
    std::uint64_t token_id = 0;
    std::string vial_id;
    std::uint64_t vc_id = 0;
    std::uint64_t vaccination_time = 0;
    std::string vaccine_name;
    std::string target_disease;

    std::string serialize() const;
    Bytes bytes() const { return to_bytes(serialize()); }
    crypto::Digest digest() const { return crypto::hash(serialize()); }

    /// Throws DecodeError on malformed input.
    static VPDocument parse(std::string_view json);

    bool operator==(const VPDocument&) const = default;
};

}  // namespace vaxpass::actors
