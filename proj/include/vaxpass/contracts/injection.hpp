#pragma once

#include <map>
#include <optional>
#include <vector>

#include "vaxpass/contracts/common.hpp"
#include "vaxpass/contracts/token_registry.hpp"
#include "vaxpass/contracts/vc_govt.hpp"
#include "vaxpass/crypto/merkle.hpp"

namespace vaxpass::contracts {

enum class VialState : std::uint8_t { Unused, Reserved, Used };
std::string to_string(VialState s);

struct InjectingProtocol {
    std::uint64_t protocol_id = 0;
    bool under_process = false;
    std::uint64_t token_id = 0;
    std::uint64_t vc_id = 0;
    PartyAddress citizen;
    PartyAddress vc;
    std::uint64_t stock_id = 0;  // VC's stock when the proof was committed
    crypto::Digest commit_mt_proof;
    crypto::Digest commit_vid;
    bool consent1 = false;
    bool consent2 = false;
    bool consent3 = false;
    bool acknowledgement = false;

    Ticks t_protocol_begins = 0;
    Ticks t_lock_money_by_vc = 0;
    Ticks t_lock_money_by_c = 0;
    Ticks t_commit_mt_proof = 0;
    Ticks t_consent1 = 0;
    Ticks t_commit_vid = 0;
    Ticks t_consent2 = 0;
    Ticks t_consent3 = 0;
    Ticks t_vaccination = 0;
    Ticks t_acknowledgement = 0;
    Ticks t_money_received_by_c = 0;
    Ticks t_money_received_by_vc = 0;

    std::optional<EscrowId> vc_escrow;
    std::optional<EscrowId> c_escrow;  // lives in the citizen's token vault
    bool frozen = false;               // negative acknowledgement, left for off-system resolution
    std::string outcome;               // how the instance closed

    /// The progression timestamps in protocol order.
    std::vector<Ticks> progression() const;
};

struct VialTransition {
    crypto::Digest commit_vid;
    VialState from = VialState::Unused;
    VialState to = VialState::Unused;
    Ticks time = 0;
    std::uint64_t protocol_id = 0;
};

enum class Verdict : std::uint8_t { CitizenFaulty, VcFaulty };

/// The dose-administration protocol between a citizen and a VC.
class InjectionContract {
public:
    InjectionContract(ledger::Ledger& ledger, const ContractConfig& config, VcGovtContract& vc_govt,
                      TokenRegistry& tokens)
        : ledger_(ledger), config_(config), vc_govt_(vc_govt), tokens_(tokens) {}

    std::uint64_t begin_protocol(const PartyAddress& caller, std::uint64_t vc_id);
    void lock_money_by_vc(const PartyAddress& caller, const PartyAddress& c_addr, Amount locked);
    void lock_money_by_c(const PartyAddress& caller, std::uint64_t vc_id, Amount locked);
    void commit_mt_proof(const PartyAddress& caller, const PartyAddress& c_addr, const crypto::Digest& commitment);
    void provide_consent1(const PartyAddress& caller, std::uint64_t vc_id, bool consent1);
    void commit_vial_id(const PartyAddress& caller, const PartyAddress& c_addr, const crypto::Digest& commit_vid);
    void provide_consent2(const PartyAddress& caller, std::uint64_t vc_id, bool consent2);
    void provide_consent3(const PartyAddress& caller, std::uint64_t vc_id, bool consent3);
    /// The VC reveals its proof after a consent3 dissent. The contract ignores
    /// the proof's side flags and tries every leaf position of the stock.
    Verdict adjudicate_dispute(const PartyAddress& caller, const PartyAddress& c_addr,
                               const crypto::MerkleProof& revealed);
    void register_vax_timestamp(const PartyAddress& caller, const PartyAddress& c_addr);
    void acknowledge_vaccination(const PartyAddress& caller, std::uint64_t vc_id, bool ack);
    /// Timeout exit for whichever step the instance is stalled on; the caller
    /// must be the party that is not being waited on.
    void exit_protocol(const PartyAddress& caller, const PartyAddress& c_addr);

    /// Releases the citizen's vault deposit for token_id. Used by the passport contract.
    void release_vault(std::uint64_t token_id, const PartyAddress& to);

    VialState vial_state(const crypto::Digest& commit_vid) const;
    const std::vector<VialTransition>& vial_transitions() const { return transitions_; }
    std::optional<InjectingProtocol> current(const PartyAddress& c_addr) const;
    std::optional<InjectingProtocol> latest_for_token(std::uint64_t token_id) const;
    const std::vector<InjectingProtocol>& instances() const { return instances_; }
    std::vector<Waiting> waiting() const;

private:
    InjectingProtocol& citizen_instance(const PartyAddress& caller, std::uint64_t vc_id);
    InjectingProtocol& vc_instance(const PartyAddress& caller, const PartyAddress& c_addr);
    std::optional<Waiting> waiting_on(const InjectingProtocol& p) const;
    void set_vial(InjectingProtocol& p, VialState to);
    void settle(InjectingProtocol& p, const PartyAddress& c_escrow_to, const PartyAddress& vc_escrow_to,
                std::string outcome);

    ledger::Ledger& ledger_;
    const ContractConfig& config_;
    VcGovtContract& vc_govt_;
    TokenRegistry& tokens_;

    std::vector<InjectingProtocol> instances_;
    std::map<PartyAddress, std::size_t> current_;
    std::map<std::uint64_t, std::size_t> latest_by_token_;
    std::map<crypto::Digest, VialState> vial_state_;
    std::vector<VialTransition> transitions_;
};

}  // namespace vaxpass::contracts
