#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <set>

#include "vaxpass/cas/content_store.hpp"
#include "vaxpass/core/errors.hpp"
#include "vaxpass/crypto/drbg.hpp"

using namespace vaxpass;
using vaxpass::cas::ContentID;
using vaxpass::cas::ContentStore;

namespace {

template <typename F>
ErrorKind kind_of(F&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an Error");
    return ErrorKind::InvalidArgument;
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("vaxpass-cas-" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        std::filesystem::remove_all(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("put then get round trips", "[cas]") {
    ContentStore s;
    auto blob = to_bytes("{\"token_id\":1}");
    auto cid = s.put(blob);
    CHECK(s.get(cid) == blob);
    CHECK(cid.digest == crypto::hash(blob));
    CHECK(crypto::hash(s.get(cid)) == cid.digest);
}

TEST_CASE("put is idempotent", "[cas]") {
    ContentStore s;
    auto blob = to_bytes("same");
    auto a = s.put(blob);
    auto b = s.put(blob);
    CHECK(a == b);
    CHECK(s.size() == 1);
}

TEST_CASE("distinct blobs get distinct ids", "[cas]") {
    ContentStore s;
    crypto::Drbg rng(11, "cas");
    std::set<std::string> ids;
    for (int i = 0; i < 1000; ++i) {
        auto b1 = rng.bytes(1 + rng.uniform(64));
        auto b2 = b1;
        b2[rng.uniform(b2.size())] ^= static_cast<std::uint8_t>(1 + rng.uniform(255));
        auto c1 = s.put(b1), c2 = s.put(b2);
        CHECK(c1 != c2);
        ids.insert(c1.hex());
        ids.insert(c2.hex());
    }
    CHECK(ids.size() == s.size());
}

TEST_CASE("errors", "[cas]") {
    ContentStore s;
    CHECK(kind_of([&] { s.put({}); }) == ErrorKind::InvalidArgument);
    ContentID unknown{crypto::hash(std::string_view("never stored"))};
    CHECK(kind_of([&] { s.get(unknown); }) == ErrorKind::NotFound);
    CHECK_FALSE(s.contains(unknown));
    CHECK(kind_of([] { ContentID::from_hex("12"); }) == ErrorKind::DecodeError);
}

TEST_CASE("directory-backed store persists and detects tampering", "[cas]") {
    TempDir dir;
    auto blob = to_bytes("persisted document");
    ContentID cid;
    {
        ContentStore s(dir.path);
        cid = s.put(blob);
        CHECK(std::filesystem::exists(dir.path / cid.hex()));
    }
    {
        ContentStore reopened(dir.path);
        CHECK(reopened.contains(cid));
        CHECK(reopened.get(cid) == blob);
    }
    {
        std::ofstream(dir.path / cid.hex(), std::ios::binary | std::ios::trunc) << "tampered";
        ContentStore reopened(dir.path);
        CHECK(kind_of([&] { reopened.get(cid); }) == ErrorKind::DecodeError);
    }
}
