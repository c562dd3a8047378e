#pragma once

#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "vaxpass/contracts/common.hpp"
#include "vaxpass/crypto/digest.hpp"

namespace vaxpass::contracts {

struct RegAppl {
    std::uint64_t seq = 0;          // position in the application history, from 1
    std::uint64_t reg_appl_id = 0;  // issued when the VC consents to the hash
    PartyAddress vc;
    bool under_review = false;
    Ticks t_reg_appl = 0;
    Ticks t_hash_appl = 0;
    Ticks t_decide_on_hash = 0;
    Ticks t_decide_on_appl = 0;
    crypto::Digest hash;
    bool hash_accepted = false;
    bool decision = false;
    bool exited = false;
};

struct VCRecord {
    std::uint64_t vc_id = 0;
    PartyAddress address;
    std::uint64_t current_stock_id = 0;
    std::uint64_t vials_in_stock = 0;
    Amount money_earned = 0;
    std::uint64_t doses_administered = 0;
};

struct ReStockAppl {
    std::uint64_t refill_appl_id = 0;
    PartyAddress vc;
    Ticks t_refill_appl = 0;
    Ticks t_commitment = 0;
    Ticks t_accept_vaccine_set = 0;
    bool under_process = false;
    std::uint64_t vials_count = 0;
    crypto::Digest commitment;
    bool accepted = false;
    bool exited = false;
    std::vector<EscrowId> escrows;  // one per vial while the set is pending
};

struct VaccineStock {
    std::uint64_t stock_id = 0;
    std::uint64_t owner = 0;  // vc_id
    std::uint64_t vials_count = 0;
    crypto::Digest stock_mr;
};

/// VC registration and vaccine-stock refill between a VC and the government.
class VcGovtContract {
public:
    VcGovtContract(ledger::Ledger& ledger, const ContractConfig& config) : ledger_(ledger), config_(config) {}

    // Registration.
    std::uint64_t timestamp_reg_appl(const PartyAddress& caller);
    void reg_appl_hash(const PartyAddress& caller, const PartyAddress& vc_addr, const crypto::Digest& appl_digest);
    std::optional<std::uint64_t> decide_on_acceptance_hash(const PartyAddress& caller, bool decision);
    std::optional<std::uint64_t> decide_on_acceptance_reg_appl(const PartyAddress& caller, std::uint64_t reg_appl_id,
                                                               bool decision);
    /// Closes a registration that stalled on the other party.
    void exit_registration(const PartyAddress& caller, const PartyAddress& vc_addr);

    // Stock refill.
    std::uint64_t refill_stock_appl(const PartyAddress& caller);
    void commit_vaccine_set(const PartyAddress& caller, const PartyAddress& vc_addr, std::uint64_t vials_count,
                            const crypto::Digest& mr, Amount locked);
    std::optional<std::uint64_t> decide_on_acceptance_vaccine_set(const PartyAddress& caller, bool decision);
    void take_away_locked_money(const PartyAddress& caller, const PartyAddress& vc_addr);
    /// Lets a VC close a refill application the government never committed to.
    void exit_refill_application(const PartyAddress& caller);

    /// Pays one dose of service charge from the VC's current stock and
    /// decrements its stock. Used by the injection contract.
    void pay_dose(std::uint64_t vc_id);
    /// Returns every unspent service-charge escrow to the government.
    Amount sweep_service_charges(const PartyAddress& caller);

    // Queries.
    bool is_registered(const PartyAddress& addr) const { return vcs_.contains(addr); }
    std::optional<VCRecord> vc(const PartyAddress& addr) const;
    std::optional<VCRecord> vc_by_id(std::uint64_t vc_id) const;
    std::optional<VaccineStock> stock(std::uint64_t stock_id) const;
    std::optional<RegAppl> current_registration(const PartyAddress& vc) const;
    std::optional<ReStockAppl> current_refill(const PartyAddress& vc) const;
    const std::vector<RegAppl>& registrations() const { return reg_history_; }
    const std::vector<ReStockAppl>& refills() const { return refill_history_; }
    std::vector<VCRecord> vcs() const;
    std::uint64_t unspent_service_escrows(std::uint64_t stock_id) const;
    std::vector<Waiting> waiting() const;

private:
    RegAppl* current_reg(const PartyAddress& vc);
    ReStockAppl* current_refill_mut(const PartyAddress& vc);
    std::optional<Waiting> waiting_on(const RegAppl& a) const;
    std::optional<Waiting> waiting_on(const ReStockAppl& a) const;

    ledger::Ledger& ledger_;
    const ContractConfig& config_;

    std::vector<RegAppl> reg_history_;
    std::map<PartyAddress, std::size_t> current_reg_;
    std::map<std::uint64_t, PartyAddress> reg_appl_belongs_to_;
    std::uint64_t next_reg_appl_id_ = 1;

    std::map<PartyAddress, VCRecord> vcs_;
    std::map<std::uint64_t, PartyAddress> vc_id_to_addr_;
    std::uint64_t next_vc_id_ = 1;

    std::vector<ReStockAppl> refill_history_;
    std::map<PartyAddress, std::size_t> current_refill_;

    std::map<std::uint64_t, VaccineStock> stocks_;
    std::map<std::uint64_t, std::deque<EscrowId>> service_escrows_;
    std::uint64_t next_stock_id_ = 1;
};

}  // namespace vaxpass::contracts
