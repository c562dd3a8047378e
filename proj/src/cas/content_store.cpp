#include "vaxpass/cas/content_store.hpp"

#include <fstream>
#include <iterator>
#include <mutex>

#include "vaxpass/core/errors.hpp"

namespace vaxpass::cas {

namespace fs = std::filesystem;

ContentStore::ContentStore(fs::path dir) : dir_(std::move(dir)) {
    fs::create_directories(*dir_);
}

ContentID ContentStore::put(ByteView blob) {
    require(!blob.empty(), ErrorKind::InvalidArgument, "cannot store an empty blob");
    ContentID cid{crypto::hash(blob)};
    std::unique_lock lock(mutex_);
    if (blobs_.contains(cid)) return cid;
    blobs_.emplace(cid, Bytes(blob.begin(), blob.end()));
    if (dir_) {
        std::ofstream out(*dir_ / cid.hex(), std::ios::binary);
        out.write(reinterpret_cast<const char*>(blob.data()), static_cast<std::streamsize>(blob.size()));
    }
    return cid;
}

Bytes ContentStore::get(const ContentID& cid) const {
    {
        std::shared_lock lock(mutex_);
        auto it = blobs_.find(cid);
        if (it != blobs_.end()) return it->second;
    }
    if (dir_) {
        auto path = *dir_ / cid.hex();
        if (fs::exists(path)) {
            std::ifstream in(path, std::ios::binary);
            Bytes data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
            require(crypto::hash(data) == cid.digest, ErrorKind::DecodeError,
                    "stored blob " + cid.hex() + " does not match its id");
            return data;
        }
    }
    fail(ErrorKind::NotFound, "no blob with id " + cid.hex());
}

bool ContentStore::contains(const ContentID& cid) const {
    std::shared_lock lock(mutex_);
    return blobs_.contains(cid) || (dir_ && fs::exists(*dir_ / cid.hex()));
}

std::size_t ContentStore::size() const {
    std::shared_lock lock(mutex_);
    return blobs_.size();
}

}  // namespace vaxpass::cas
