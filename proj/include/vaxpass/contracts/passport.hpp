#pragma once

#include <map>
#include <optional>
#include <vector>

#include "vaxpass/cas/content_store.hpp"
#include "vaxpass/contracts/common.hpp"
#include "vaxpass/contracts/injection.hpp"
#include "vaxpass/contracts/token_registry.hpp"
#include "vaxpass/crypto/signature.hpp"

namespace vaxpass::contracts {

struct VPAppl {
    std::uint64_t vp_appl_id = 0;
    PartyAddress citizen;
    std::uint64_t applicant_token_id = 0;
    Ticks t_lock_money_by_c = 0;
    Ticks t_lock_money_by_govt = 0;
    Ticks t_provide_vaccination_proof = 0;
    Ticks t_consent1 = 0;
    Ticks t_consent2 = 0;
    Ticks t_issue_vp = 0;
    Ticks t_money_received_by_c = 0;
    Ticks t_money_received_by_govt = 0;
    bool consent1 = false;
    bool consent2 = false;
    bool under_process = false;
    std::optional<EscrowId> c_escrow;
    std::optional<EscrowId> govt_escrow;
    std::string outcome;

    std::vector<Ticks> progression() const;
};

struct VPRecord {
    crypto::Digest md_vp;
    crypto::Signature sigma;
    cas::ContentID c_id;
};

enum class DissentVerdict : std::uint8_t { CitizenFaulty, GovtFaulty };

/// Passport issuance between a vaccinated citizen and the government.
class PassportContract {
public:
    PassportContract(ledger::Ledger& ledger, const ContractConfig& config, TokenRegistry& tokens,
                     InjectionContract& injection, const VcGovtContract& vc_govt)
        : ledger_(ledger), config_(config), tokens_(tokens), injection_(injection), vc_govt_(vc_govt) {}

    std::uint64_t initiate_vp_appl_and_lock_money(const PartyAddress& caller, Amount locked);
    void lock_money_by_govt(const PartyAddress& caller, const PartyAddress& c_addr, Amount locked);
    void send_vaccination_proof(const PartyAddress& caller, ByteView v_id, const crypto::Digest& commit_mt_proof);
    void send_consent1(const PartyAddress& caller, const PartyAddress& c_addr, bool consent1);
    void send_consent2(const PartyAddress& caller, const PartyAddress& c_addr, bool consent2);
    /// After a consent2 dissent the government submits the membership proof.
    /// A proof that opens the injection commitments and reaches the stock root
    /// shows the dissent was wrongful.
    DissentVerdict adjudicate_dissent(const PartyAddress& caller, const PartyAddress& c_addr,
                                      const crypto::MerkleProof& proof);
    void upload_vp_info_and_get_payment(const PartyAddress& caller, const PartyAddress& c_addr,
                                        const crypto::Digest& md_vp, const crypto::Signature& sigma,
                                        const cas::ContentID& c_id);
    void exit_vp_appl(const PartyAddress& caller, const PartyAddress& c_addr);

    std::optional<VPAppl> current(const PartyAddress& c_addr) const;
    const std::vector<VPAppl>& instances() const { return instances_; }
    /// Unrestricted lookup for other contracts; the public query lives in the
    /// verification contract behind its access-control matrix.
    std::optional<VPRecord> vp_record(std::uint64_t token_id) const;
    std::vector<Waiting> waiting() const;

private:
    VPAppl& citizen_instance(const PartyAddress& caller);
    VPAppl& govt_instance(const PartyAddress& caller, const PartyAddress& c_addr);
    std::uint64_t vaccinated_token(const PartyAddress& c_addr) const;
    std::optional<Waiting> waiting_on(const VPAppl& a) const;
    void settle(VPAppl& a, const PartyAddress& c_escrow_to, const PartyAddress& govt_escrow_to, std::string outcome);

    ledger::Ledger& ledger_;
    const ContractConfig& config_;
    TokenRegistry& tokens_;
    InjectionContract& injection_;
    const VcGovtContract& vc_govt_;

    std::vector<VPAppl> instances_;
    std::map<PartyAddress, std::size_t> current_;
    std::map<std::uint64_t, VPRecord> records_;
};

}  // namespace vaxpass::contracts
