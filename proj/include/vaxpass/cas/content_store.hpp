#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>

#include "vaxpass/core/bytes.hpp"
#include "vaxpass/crypto/digest.hpp"

namespace vaxpass::cas {

/// Address of an immutable blob: the raw Keccak-256 digest of its bytes.
struct ContentID {
    crypto::Digest digest;

    std::string hex() const { return digest.hex(); }
    static ContentID from_hex(std::string_view hex) { return {crypto::Digest::from_hex(hex)}; }
    auto operator<=>(const ContentID&) const = default;
};

/// Local stand-in for IPFS. Blobs live in memory and, when a directory is
/// given, are also written there as one file per content id.
class ContentStore {
public:
    ContentStore() = default;
    explicit ContentStore(std::filesystem::path dir);

    /// Throws InvalidArgument for an empty blob.
    ContentID put(ByteView blob);
    /// Throws NotFound for an unknown id and DecodeError if a persisted file
    /// no longer hashes to its name.
    Bytes get(const ContentID& cid) const;
    bool contains(const ContentID& cid) const;
    std::size_t size() const;

    const std::optional<std::filesystem::path>& directory() const { return dir_; }

private:
    mutable std::shared_mutex mutex_;
    std::map<ContentID, Bytes> blobs_;
    std::optional<std::filesystem::path> dir_;
};

}  // namespace vaxpass::cas
