#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "vaxpass/contracts/common.hpp"
#include "vaxpass/contracts/passport.hpp"
#include "vaxpass/contracts/token_registry.hpp"

namespace vaxpass::contracts {

struct VerificationProtocol {
    std::uint64_t vf_protocol_id = 0;
    bool under_execution = false;
    std::uint64_t token_id = 0;
    PartyAddress citizen;
    PartyAddress vf_addr;
    crypto::Digest commit_rk;
    bool consent = false;
    bool verification_result = false;
    Ticks t_lock_money_by_vf = 0;
    Ticks t_lock_money_and_commit_rk_by_c = 0;
    Ticks t_provide_consent = 0;
    Ticks t_grant_access_by_c = 0;
    Ticks t_fetch_vp_info = 0;
    Ticks t_verification_result = 0;
    Ticks t_unlock_money = 0;
    std::optional<EscrowId> vf_escrow;
    std::optional<EscrowId> c_escrow;
    std::string outcome;

    std::vector<Ticks> progression() const;
};

struct VerificationEntry {
    PartyAddress vf_addr;
    Ticks time = 0;
    bool result = false;
};

/// Passport verification between a citizen and a verifier (VF).
class VerificationContract {
public:
    VerificationContract(ledger::Ledger& ledger, const ContractConfig& config, const TokenRegistry& tokens,
                         const PassportContract& passport)
        : ledger_(ledger), config_(config), tokens_(tokens), passport_(passport) {}

    std::uint64_t lock_money_by_vf(const PartyAddress& caller, const PartyAddress& c_addr, Amount locked);
    void lock_money_and_commit_rk(const PartyAddress& caller, std::uint64_t vf_protocol_id,
                                  const crypto::Digest& commit_rk, Amount locked);
    void provide_consent(const PartyAddress& caller, std::uint64_t vf_protocol_id, bool decision);
    void grant_access_permission(const PartyAddress& caller, std::uint64_t vf_protocol_id);
    void revoke_access_permission(const PartyAddress& caller, const PartyAddress& vf_addr);
    VPRecord fetch_vp_info(const PartyAddress& caller, std::uint64_t vf_protocol_id);
    void verification_result(const PartyAddress& caller, std::uint64_t vf_protocol_id, bool result);
    void exit_verification(const PartyAddress& caller, std::uint64_t vf_protocol_id);

    /// Read-only VP lookup for the token's owner or a verifier holding a grant.
    VPRecord query_vp_record(const PartyAddress& caller, std::uint64_t token_id) const;
    bool has_access(std::uint64_t token_id, const PartyAddress& vf_addr) const;
    std::vector<VerificationEntry> history(std::uint64_t token_id) const;
    std::optional<VerificationProtocol> instance(std::uint64_t vf_protocol_id) const;
    const std::vector<VerificationProtocol>& instances() const { return instances_; }
    std::vector<Waiting> waiting() const;

private:
    VerificationProtocol& fetch(std::uint64_t vf_protocol_id);
    VerificationProtocol& citizen_instance(const PartyAddress& caller, std::uint64_t vf_protocol_id);
    VerificationProtocol& vf_instance(const PartyAddress& caller, std::uint64_t vf_protocol_id);
    std::optional<Waiting> waiting_on(const VerificationProtocol& p) const;
    void settle(VerificationProtocol& p, const PartyAddress& c_escrow_to, const PartyAddress& vf_escrow_to,
                std::string outcome);

    ledger::Ledger& ledger_;
    const ContractConfig& config_;
    const TokenRegistry& tokens_;
    const PassportContract& passport_;

    std::vector<VerificationProtocol> instances_;
    std::map<std::pair<std::uint64_t, PartyAddress>, std::size_t> latest_;
    std::map<std::pair<std::uint64_t, PartyAddress>, bool> access_;
    std::map<std::uint64_t, std::vector<VerificationEntry>> history_;
};

}  // namespace vaxpass::contracts
