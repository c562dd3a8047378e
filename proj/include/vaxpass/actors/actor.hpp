#pragma once

#include <deque>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vaxpass/contracts/common.hpp"
#include "vaxpass/crypto/merkle.hpp"
#include "vaxpass/crypto/pre.hpp"
#include "vaxpass/crypto/signature.hpp"

namespace vaxpass::actors {

using contracts::PartyAddress;
using contracts::Role;

/// Scripted misbehaviour. Silence is configured separately, per operation.
enum class Deviation : std::uint8_t {
    None,
    WrongMrDispatch,   // Govt commits the root of a different vial set
    WrongProof,        // VC sends a proof against a foreign tree
    ReuseVial,         // VC reuses an already administered vial
    WrongfulDissent,   // citizen refuses consent3 on a valid proof
    WrongfulDissent2,  // Govt refuses consent2 on a valid proof
    ForgedMd,          // Govt signs the digest of a different document
    RkReplay,          // citizen hands over another citizen's re-encryption key
    PiiTamper,         // citizen sends PII that does not match its digest
    NegativeAck,       // citizen denies a vaccination that took place
};

std::string to_string(Deviation d);
/// Accepts the snake_case names used in scenario files.
Deviation parse_deviation(std::string_view s);
Role parse_role(std::string_view s);

struct Behavior {
    Deviation deviation = Deviation::None;
    std::set<std::string> silent_at;  // contract operation names this actor never calls

    bool silent(const std::string& op) const { return silent_at.contains(op); }
};

enum class MessageKind : std::uint8_t { Application, MerkleProof, VialHandover, Rekey, VpRequest };
std::string to_string(MessageKind k);

struct OffchainMessage {
    PartyAddress from;
    PartyAddress to;
    MessageKind kind = MessageKind::Application;
    Bytes payload;
};

/// Name, address, DOB and national id of a citizen.
struct Pii {
    std::string name;
    std::string address;
    std::string dob;
    std::string citizen_id;

    /// Fields joined with U+2016, the form that gets hashed.
    std::string canonical() const;
    std::vector<std::string> fields() const { return {name, address, dob, citizen_id}; }
};

struct Actor {
    std::string name;
    Role role = Role::Citizen;
    crypto::SigningKeyPair signing;
    crypto::PreKeyPair encryption;
    PartyAddress address;
    Behavior behavior;
    std::deque<OffchainMessage> inbox;

    std::optional<Pii> pii;  // citizens only

    // VC: the vials in hand and the tree over them.
    std::vector<Bytes> vials;
    std::optional<crypto::MerkleTree> stock_tree;
    std::set<Bytes> administered;
    std::optional<Bytes> last_administered;

    // Citizen: what the VC handed over during injection.
    std::optional<Bytes> received_vial;
    std::optional<crypto::MerkleProof> received_proof;

};

}  // namespace vaxpass::actors
