#include "vaxpass/crypto/merkle.hpp"

#include <algorithm>
#include <sstream>

#include "vaxpass/core/errors.hpp"

namespace vaxpass::crypto {

Digest MerkleProof::commitment() const {
    Bytes concat;
    concat.reserve(path.size() * 32);
    for (const auto& step : path) append(concat, step.sibling.bytes);
    return hash(concat);
}

std::string MerkleProof::serialize() const {
    std::ostringstream out;
    out << "leaf " << to_hex(leaf) << '\n';
    for (const auto& step : path) {
        out << (step.side == Side::Left ? 'L' : 'R') << ' ' << step.sibling.hex() << '\n';
    }
    out << "root " << claimed_root.hex() << '\n';
    return out.str();
}

MerkleProof MerkleProof::parse(std::string_view text) {
    MerkleProof proof;
    std::istringstream in{std::string(text)};
    std::string tag, value;
    bool have_leaf = false, have_root = false;
    while (in >> tag >> value) {
        if (have_root) fail(ErrorKind::DecodeError, "data after proof root");
        if (tag == "leaf" && !have_leaf) {
            proof.leaf = from_hex(value);
            have_leaf = true;
        } else if ((tag == "L" || tag == "R") && have_leaf) {
            proof.path.push_back({Digest::from_hex(value), tag == "L" ? Side::Left : Side::Right});
        } else if (tag == "root" && have_leaf) {
            proof.claimed_root = Digest::from_hex(value);
            have_root = true;
        } else {
            fail(ErrorKind::DecodeError, "unexpected proof line '" + tag + "'");
        }
    }
    if (!have_leaf || !have_root) fail(ErrorKind::DecodeError, "truncated proof");
    return proof;
}

MerkleTree MerkleTree::build(std::vector<Bytes> vial_ids) {
    require(!vial_ids.empty(), ErrorKind::InvalidArgument, "vial set is empty");
    std::sort(vial_ids.begin(), vial_ids.end());
    if (std::adjacent_find(vial_ids.begin(), vial_ids.end()) != vial_ids.end()) {
        fail(ErrorKind::DuplicateLeaf, "vial set contains a repeated ID");
    }

    MerkleTree tree;
    tree.leaves_ = std::move(vial_ids);

    std::vector<Digest> level;
    level.reserve(tree.leaves_.size());
    for (const auto& id : tree.leaves_) level.push_back(hash(id));
    tree.levels_.push_back(std::move(level));

    while (tree.levels_.back().size() > 1) {
        const auto& below = tree.levels_.back();
        std::vector<Digest> above;
        above.reserve((below.size() + 1) / 2);
        for (std::size_t i = 0; i < below.size(); i += 2) {
            const Digest& left = below[i];
            const Digest& right = i + 1 < below.size() ? below[i + 1] : below[i];
            above.push_back(hash_concat({left.bytes, right.bytes}));
        }
        tree.levels_.push_back(std::move(above));
    }
    return tree;
}

bool MerkleTree::contains(ByteView vial_id) const {
    Bytes key(vial_id.begin(), vial_id.end());
    return std::binary_search(leaves_.begin(), leaves_.end(), key);
}

MerkleProof MerkleTree::prove(ByteView vial_id) const {
    Bytes key(vial_id.begin(), vial_id.end());
    auto it = std::lower_bound(leaves_.begin(), leaves_.end(), key);
    if (it == leaves_.end() || *it != key) fail(ErrorKind::NotALeaf, "vial " + to_hex(key) + " is not in the tree");

    MerkleProof proof;
    proof.leaf = key;
    proof.claimed_root = root();
    auto index = static_cast<std::size_t>(it - leaves_.begin());
    for (std::size_t lvl = 0; lvl + 1 < levels_.size(); ++lvl) {
        const auto& nodes = levels_[lvl];
        if (index % 2 == 0) {
            std::size_t sib = index + 1 < nodes.size() ? index + 1 : index;
            proof.path.push_back({nodes[sib], Side::Right});
        } else {
            proof.path.push_back({nodes[index - 1], Side::Left});
        }
        index /= 2;
    }
    return proof;
}

Digest merkle_fold(const MerkleProof& proof) {
    Digest acc = hash(proof.leaf);
    for (const auto& step : proof.path) {
        acc = step.side == Side::Left ? hash_concat({step.sibling.bytes, acc.bytes})
                                      : hash_concat({acc.bytes, step.sibling.bytes});
    }
    return acc;
}

bool merkle_verify(const MerkleProof& proof, const Digest& root) {
    return merkle_fold(proof) == root;
}

bool merkle_verify_any_position(const MerkleProof& proof, const Digest& root, std::size_t leaf_count) {
    if (leaf_count == 0) return false;
    std::size_t depth = 0;
    while ((std::size_t{1} << depth) < leaf_count) ++depth;
    if (proof.path.size() != depth) return false;

    MerkleProof probe = proof;
    for (std::size_t index = 0; index < leaf_count; ++index) {
        for (std::size_t lvl = 0; lvl < depth; ++lvl) {
            probe.path[lvl].side = (index >> lvl) & 1 ? Side::Left : Side::Right;
        }
        if (merkle_fold(probe) == root) return true;
    }
    return false;
}

}  // namespace vaxpass::crypto
