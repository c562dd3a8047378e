#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vaxpass/core/bytes.hpp"
#include "vaxpass/crypto/digest.hpp"

namespace vaxpass::crypto {

/// Which side of the running hash the sibling sits on.
enum class Side : std::uint8_t { Left, Right };

struct ProofStep {
    Digest sibling;
    Side side = Side::Right;

    bool operator==(const ProofStep&) const = default;
};

/// Membership proof for one vial ID; siblings are listed bottom-up.
struct MerkleProof {
    Bytes leaf;
    std::vector<ProofStep> path;
    Digest claimed_root;

    /// H(sibling_0 || sibling_1 || ...), the value put on-chain as commit_MT_Proof.
    Digest commitment() const;

    /// One line per field: "leaf <hex>", then "L <hex>" / "R <hex>" per step,
    /// then "root <hex>".
    std::string serialize() const;
    static MerkleProof parse(std::string_view text);

    bool operator==(const MerkleProof&) const = default;
};

// Sorted-leaf Merkle tree over vial IDs. Leaf nodes are H(vial_id), internal
// nodes H(left || right); an unpaired node at any level is hashed with a copy
// of itself.
class MerkleTree {
public:
    /// Throws InvalidArgument on an empty set and DuplicateLeaf on repeated IDs.
    static MerkleTree build(std::vector<Bytes> vial_ids);

    const std::vector<Bytes>& leaves() const { return leaves_; }
    /// levels()[0] are the leaf hashes, levels().back() holds only the root.
    const std::vector<std::vector<Digest>>& levels() const { return levels_; }
    const Digest& root() const { return levels_.back().front(); }
    std::size_t size() const { return leaves_.size(); }

    bool contains(ByteView vial_id) const;
    /// Throws NotALeaf when vial_id is not in the tree.
    MerkleProof prove(ByteView vial_id) const;

private:
    std::vector<Bytes> leaves_;
    std::vector<std::vector<Digest>> levels_;
};

/// Folds proof.leaf up proof.path; true iff the result equals root.
bool merkle_verify(const MerkleProof& proof, const Digest& root);

/// Root reached by folding the proof, independent of claimed_root.
Digest merkle_fold(const MerkleProof& proof);

/// Membership check that ignores the proof's side flags: the siblings are
/// folded with the sides implied by each leaf position of a tree with
/// leaf_count leaves, and the check passes if any position reaches root.
/// The path length must match the depth of such a tree.
bool merkle_verify_any_position(const MerkleProof& proof, const Digest& root, std::size_t leaf_count);

}  // namespace vaxpass::crypto
