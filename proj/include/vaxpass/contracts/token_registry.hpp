#pragma once

#include <map>
#include <optional>
#include <vector>

#include "vaxpass/cas/content_store.hpp"
#include "vaxpass/contracts/common.hpp"
#include "vaxpass/crypto/digest.hpp"

namespace vaxpass::contracts {

struct TokenAppl {
    std::uint64_t token_appl_id = 0;
    PartyAddress applicant;
    crypto::Digest citizen_info_digest;
    bool under_review = false;
    Ticks t_token_appl = 0;
    Ticks t_result = 0;
    bool result = false;
    bool exited = false;
};

// Only the digest of a citizen's personal data ever reaches this record.
struct CitizenRecord {
    crypto::Digest citizen_info_digest;
    std::uint64_t token_id = 0;
    PartyAddress address;
    bool vaccination_status = false;
    bool vp_status = false;
    std::optional<cas::ContentID> c_id;
};

struct GlobalStats {
    std::uint64_t tokened = 0;
    std::uint64_t vaccinated = 0;
    std::uint64_t vp_issued = 0;
};

/// Citizen token issuance, and the citizen records later contracts update.
class TokenRegistry {
public:
    TokenRegistry(ledger::Ledger& ledger, const ContractConfig& config) : ledger_(ledger), config_(config) {}

    std::uint64_t appl_for_token_id(const PartyAddress& caller, const crypto::Digest& citizen_info_digest);
    std::optional<std::uint64_t> verify_appl(const PartyAddress& caller, std::uint64_t token_appl_id, bool decision);
    /// The applicant closes an application the government left unanswered.
    void exit_token_application(const PartyAddress& caller);

    std::optional<std::uint64_t> token_of(const PartyAddress& addr) const;
    std::optional<CitizenRecord> citizen(std::uint64_t token_id) const;
    std::optional<CitizenRecord> citizen_at(const PartyAddress& addr) const;
    std::optional<TokenAppl> current_application(const PartyAddress& addr) const;
    const std::vector<TokenAppl>& applications() const { return appls_; }
    std::vector<CitizenRecord> citizens() const;
    GlobalStats stats() const;
    std::vector<Waiting> waiting() const;

    // Hooks for the injection and passport contracts.
    void mark_vaccinated(std::uint64_t token_id);
    void attach_vp(std::uint64_t token_id, const cas::ContentID& c_id);

private:
    ledger::Ledger& ledger_;
    const ContractConfig& config_;

    std::vector<TokenAppl> appls_;
    std::map<PartyAddress, std::size_t> current_appl_;
    std::map<crypto::Digest, std::uint64_t> digest_to_token_;
    std::map<std::uint64_t, CitizenRecord> citizens_;
    std::map<PartyAddress, std::uint64_t> addr_to_token_;
    std::uint64_t next_token_id_ = 1;
};

}  // namespace vaxpass::contracts
