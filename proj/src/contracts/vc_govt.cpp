#include "vaxpass/contracts/vc_govt.hpp"

namespace vaxpass::contracts {

using namespace detail;


RegAppl* VcGovtContract::current_reg(const PartyAddress& vc) {
    auto it = current_reg_.find(vc);
    return it == current_reg_.end() ? nullptr : &reg_history_[it->second];
}

ReStockAppl* VcGovtContract::current_refill_mut(const PartyAddress& vc) {
    auto it = current_refill_.find(vc);
    return it == current_refill_.end() ? nullptr : &refill_history_[it->second];
}

std::uint64_t VcGovtContract::timestamp_reg_appl(const PartyAddress& caller) {
    const Ticks now = ledger_.now();
    clock_started(now);
    authorize(caller != config_.govt, "the government cannot apply as a VC");
    guard(!is_registered(caller), "VC is already registered");
    if (auto* cur = current_reg(caller)) guard(!cur->under_review, "an application is already under review");

    RegAppl appl;
    appl.seq = reg_history_.size() + 1;
    appl.vc = caller;
    appl.t_reg_appl = now;
    appl.under_review = true;
    reg_history_.push_back(appl);
    current_reg_[caller] = reg_history_.size() - 1;
    ledger_.record(caller.hex(), "timestamp_reg_appl", fields({{"appl", num(appl.seq)}, {"t", num(now)}}));
    return appl.seq;
}

void VcGovtContract::reg_appl_hash(const PartyAddress& caller, const PartyAddress& vc_addr,
                                   const crypto::Digest& appl_digest) {
    const Ticks now = ledger_.now();
    clock_started(now);
    authorize(caller == config_.govt, "only the government submits the application hash");
    guard(!is_registered(vc_addr), "VC is already registered");
    auto* appl = current_reg(vc_addr);
    guard(appl && appl->under_review, "no application under review");
    guard(appl->t_reg_appl != 0, "application was never timestamped");
    guard(appl->t_hash_appl == 0, "hash already submitted");
    within(now, appl->t_reg_appl, config_.step_timeout, "reg_appl_hash");

    appl->t_hash_appl = now;
    appl->hash = appl_digest;
    ledger_.record(caller.hex(), "reg_appl_hash",
                   fields({{"appl", num(appl->seq)}, {"hash", appl_digest.hex()}, {"t", num(now)}}));
}

std::optional<std::uint64_t> VcGovtContract::decide_on_acceptance_hash(const PartyAddress& caller, bool decision) {
    const Ticks now = ledger_.now();
    clock_started(now);
    authorize(caller != config_.govt, "only the applying VC decides on the hash");
    guard(!is_registered(caller), "VC is already registered");
    auto* appl = current_reg(caller);
    guard(appl && appl->under_review, "no application under review");
    guard(appl->t_hash_appl != 0, "hash not yet submitted");
    guard(appl->t_decide_on_hash == 0, "hash already decided");
    within(now, appl->t_hash_appl, config_.step_timeout, "decide_on_acceptance_hash");

    std::optional<std::uint64_t> id;
    if (decision) {
        appl->reg_appl_id = next_reg_appl_id_++;
        appl->hash_accepted = true;
        reg_appl_belongs_to_[appl->reg_appl_id] = caller;
        id = appl->reg_appl_id;
    } else {
        appl->under_review = false;
    }
    appl->t_decide_on_hash = now;
    ledger_.record(caller.hex(), "decide_on_acceptance_hash",
                   fields({{"appl", num(appl->seq)}, {"decision", flag(decision)}, {"t", num(now)}}));
    return id;
}

std::optional<std::uint64_t> VcGovtContract::decide_on_acceptance_reg_appl(const PartyAddress& caller,
                                                                           std::uint64_t reg_appl_id, bool decision) {
    const Ticks now = ledger_.now();
    clock_started(now);
    authorize(caller == config_.govt, "only the government decides on applications");
    auto owner = reg_appl_belongs_to_.find(reg_appl_id);
    guard(owner != reg_appl_belongs_to_.end(), "unknown registration application id");
    const PartyAddress vc_addr = owner->second;
    guard(!is_registered(vc_addr), "VC is already registered");
    auto* appl = current_reg(vc_addr);
    guard(appl && appl->reg_appl_id == reg_appl_id && appl->under_review, "application is not under review");
    guard(appl->t_decide_on_hash != 0, "VC has not accepted the hash");
    within(now, appl->t_decide_on_hash, config_.step_timeout, "decide_on_acceptance_reg_appl");

    std::optional<std::uint64_t> vc_id;
    if (decision) {
        VCRecord rec;
        rec.vc_id = next_vc_id_++;
        rec.address = vc_addr;
        vcs_[vc_addr] = rec;
        vc_id_to_addr_[rec.vc_id] = vc_addr;
        vc_id = rec.vc_id;
    }
    appl->decision = decision;
    appl->t_decide_on_appl = now;
    appl->under_review = false;
    ledger_.record(caller.hex(), "decide_on_acceptance_reg_appl",
                   fields({{"appl", num(appl->seq)}, {"decision", flag(decision)},
                           {"vc_id", num(vc_id.value_or(0))}, {"t", num(now)}}));
    return vc_id;
}

std::optional<Waiting> VcGovtContract::waiting_on(const RegAppl& a) const {
    if (!a.under_review) return std::nullopt;
    Waiting w{"vc_govt.registration", a.seq, "", Role::Govt, config_.govt, 0, config_.step_timeout, false};
    if (a.t_hash_appl == 0) {
        w.state = "await_reg_appl_hash";
        w.since = a.t_reg_appl;
    } else if (a.t_decide_on_hash == 0) {
        w.state = "await_decide_on_acceptance_hash";
        w.role = Role::VC;
        w.party = a.vc;
        w.since = a.t_hash_appl;
    } else {
        w.state = "await_decide_on_acceptance_reg_appl";
        w.since = a.t_decide_on_hash;
    }
    return w;
}

void VcGovtContract::exit_registration(const PartyAddress& caller, const PartyAddress& vc_addr) {
    const Ticks now = ledger_.now();
    clock_started(now);
    auto* appl = current_reg(vc_addr);
    guard(appl && appl->under_review, "no application under review");
    auto w = waiting_on(*appl);
    const PartyAddress other = w->party == config_.govt ? vc_addr : config_.govt;
    authorize(caller == other, "only the waiting party may exit");
    past(now, w->since, w->window, "exit_registration");

    appl->under_review = false;
    appl->exited = true;
    ledger_.record(caller.hex(), "exit_registration",
                   fields({{"appl", num(appl->seq)}, {"state", w->state}, {"t", num(now)}}));
}

std::uint64_t VcGovtContract::refill_stock_appl(const PartyAddress& caller) {
    const Ticks now = ledger_.now();
    clock_started(now);
    authorize(is_registered(caller), "caller is not a registered VC");
    guard(vcs_.at(caller).vials_in_stock == 0, "VC still has vials in stock");
    if (auto* cur = current_refill_mut(caller)) guard(!cur->under_process, "a refill is already in process");

    ReStockAppl appl;
    appl.refill_appl_id = refill_history_.size() + 1;
    appl.vc = caller;
    appl.t_refill_appl = now;
    appl.under_process = true;
    refill_history_.push_back(appl);
    current_refill_[caller] = refill_history_.size() - 1;
    ledger_.record(caller.hex(), "refill_stock_appl", fields({{"refill", num(appl.refill_appl_id)}, {"t", num(now)}}));
    return appl.refill_appl_id;
}

void VcGovtContract::commit_vaccine_set(const PartyAddress& caller, const PartyAddress& vc_addr,
                                        std::uint64_t vials_count, const crypto::Digest& mr, Amount locked) {
    const Ticks now = ledger_.now();
    clock_started(now);
    authorize(caller == config_.govt, "only the government commits vaccine sets");
    guard(is_registered(vc_addr), "target is not a registered VC");
    guard(vials_count > 0, "vials count must be positive");
    auto* appl = current_refill_mut(vc_addr);
    guard(appl && appl->under_process, "no refill in process");
    guard(appl->t_refill_appl != 0, "refill was never timestamped");
    guard(appl->t_commitment == 0, "vaccine set already committed");
    within(now, appl->t_refill_appl, config_.step_timeout, "commit_vaccine_set");
    const Amount expected = config_.service_charge_per_vial * static_cast<Amount>(vials_count);
    guard(locked == expected, "locked service charge " + std::to_string(locked) + " != " + std::to_string(expected));
    require(ledger_.balance(caller) >= expected, ErrorKind::InsufficientFunds, "cannot cover the service charge");

    const std::string tag = "service/refill/" + num(appl->refill_appl_id);
    std::vector<EscrowId> escrows;
    for (std::uint64_t i = 0; i < vials_count; ++i) {
        escrows.push_back(ledger_.lock_funds(caller, config_.service_charge_per_vial, tag));
    }
    appl->escrows = std::move(escrows);
    appl->vials_count = vials_count;
    appl->commitment = mr;
    appl->t_commitment = now;
    ledger_.record(caller.hex(), "commit_vaccine_set",
                   fields({{"refill", num(appl->refill_appl_id)}, {"vials", num(vials_count)}, {"mr", mr.hex()},
                           {"locked", std::to_string(locked)}, {"t", num(now)}}));
}

std::optional<std::uint64_t> VcGovtContract::decide_on_acceptance_vaccine_set(const PartyAddress& caller,
                                                                              bool decision) {
    const Ticks now = ledger_.now();
    clock_started(now);
    authorize(is_registered(caller), "caller is not a registered VC");
    auto* appl = current_refill_mut(caller);
    guard(appl && appl->under_process, "no refill in process");
    guard(appl->t_commitment != 0, "vaccine set not yet committed");
    within(now, appl->t_commitment, config_.step_timeout, "decide_on_acceptance_vaccine_set");

    std::optional<std::uint64_t> stock_id;
    auto& vc = vcs_.at(caller);
    if (decision) {
        VaccineStock stock{next_stock_id_++, vc.vc_id, appl->vials_count, appl->commitment};
        stocks_[stock.stock_id] = stock;
        service_escrows_[stock.stock_id] = std::deque<EscrowId>(appl->escrows.begin(), appl->escrows.end());
        vc.current_stock_id = stock.stock_id;
        vc.vials_in_stock = appl->vials_count;
        stock_id = stock.stock_id;
    } else {
        for (auto id : appl->escrows) ledger_.release_funds(id, config_.govt);
    }
    appl->escrows.clear();
    appl->accepted = decision;
    appl->t_accept_vaccine_set = now;
    appl->under_process = false;
    ledger_.record(caller.hex(), "decide_on_acceptance_vaccine_set",
                   fields({{"refill", num(appl->refill_appl_id)}, {"decision", flag(decision)},
                           {"stock", num(stock_id.value_or(0))}, {"t", num(now)}}));
    return stock_id;
}

void VcGovtContract::take_away_locked_money(const PartyAddress& caller, const PartyAddress& vc_addr) {
    const Ticks now = ledger_.now();
    clock_started(now);
    authorize(caller == config_.govt, "only the government reclaims service charges");
    guard(is_registered(vc_addr), "target is not a registered VC");
    auto* appl = current_refill_mut(vc_addr);
    guard(appl && appl->under_process, "no refill in process");
    guard(appl->t_commitment != 0, "vaccine set not yet committed");
    guard(appl->t_accept_vaccine_set == 0, "vaccine set already decided");
    past(now, appl->t_commitment, config_.step_timeout, "take_away_locked_money");

    for (auto id : appl->escrows) ledger_.release_funds(id, config_.govt);
    appl->escrows.clear();
    appl->under_process = false;
    appl->exited = true;
    ledger_.record(caller.hex(), "take_away_locked_money",
                   fields({{"refill", num(appl->refill_appl_id)}, {"t", num(now)}}));
}

void VcGovtContract::exit_refill_application(const PartyAddress& caller) {
    const Ticks now = ledger_.now();
    clock_started(now);
    authorize(is_registered(caller), "caller is not a registered VC");
    auto* appl = current_refill_mut(caller);
    guard(appl && appl->under_process, "no refill in process");
    guard(appl->t_commitment == 0, "vaccine set already committed");
    past(now, appl->t_refill_appl, config_.step_timeout, "exit_refill_application");

    appl->under_process = false;
    appl->exited = true;
    ledger_.record(caller.hex(), "exit_refill_application",
                   fields({{"refill", num(appl->refill_appl_id)}, {"t", num(now)}}));
}

void VcGovtContract::pay_dose(std::uint64_t vc_id) {
    auto addr = vc_id_to_addr_.find(vc_id);
    guard(addr != vc_id_to_addr_.end(), "unknown vc id");
    auto& vc = vcs_.at(addr->second);
    guard(vc.vials_in_stock > 0, "VC has no vials in stock");
    auto& escrows = service_escrows_[vc.current_stock_id];
    guard(!escrows.empty(), "no service charge left for this stock");
    ledger_.release_funds(escrows.front(), vc.address);
    escrows.pop_front();
    vc.vials_in_stock -= 1;
    vc.money_earned += config_.service_charge_per_vial;
    vc.doses_administered += 1;
}

Amount VcGovtContract::sweep_service_charges(const PartyAddress& caller) {
    authorize(caller == config_.govt, "only the government sweeps service charges");
    Amount total = 0;
    for (auto& [stock_id, escrows] : service_escrows_) {
        for (auto id : escrows) {
            total += ledger_.escrow(id)->amount;
            ledger_.release_funds(id, config_.govt);
        }
        escrows.clear();
    }
    ledger_.record(caller.hex(), "sweep_service_charges", fields({{"amount", std::to_string(total)}}));
    return total;
}

std::optional<VCRecord> VcGovtContract::vc(const PartyAddress& addr) const {
    auto it = vcs_.find(addr);
    if (it == vcs_.end()) return std::nullopt;
    return it->second;
}

std::optional<VCRecord> VcGovtContract::vc_by_id(std::uint64_t vc_id) const {
    auto it = vc_id_to_addr_.find(vc_id);
    if (it == vc_id_to_addr_.end()) return std::nullopt;
    return vcs_.at(it->second);
}

std::optional<VaccineStock> VcGovtContract::stock(std::uint64_t stock_id) const {
    auto it = stocks_.find(stock_id);
    if (it == stocks_.end()) return std::nullopt;
    return it->second;
}

std::optional<RegAppl> VcGovtContract::current_registration(const PartyAddress& vc) const {
    auto it = current_reg_.find(vc);
    if (it == current_reg_.end()) return std::nullopt;
    return reg_history_[it->second];
}

std::optional<ReStockAppl> VcGovtContract::current_refill(const PartyAddress& vc) const {
    auto it = current_refill_.find(vc);
    if (it == current_refill_.end()) return std::nullopt;
    return refill_history_[it->second];
}

std::vector<VCRecord> VcGovtContract::vcs() const {
    std::vector<VCRecord> out;
    for (const auto& [_, addr] : vc_id_to_addr_) out.push_back(vcs_.at(addr));
    return out;
}

std::uint64_t VcGovtContract::unspent_service_escrows(std::uint64_t stock_id) const {
    auto it = service_escrows_.find(stock_id);
    return it == service_escrows_.end() ? 0 : it->second.size();
}

std::optional<Waiting> VcGovtContract::waiting_on(const ReStockAppl& a) const {
    if (!a.under_process) return std::nullopt;
    if (a.t_commitment == 0) {
        return Waiting{"vc_govt.refill", a.refill_appl_id, "await_commit_vaccine_set", Role::Govt, config_.govt,
                       a.t_refill_appl, config_.step_timeout, false};
    }
    return Waiting{"vc_govt.refill", a.refill_appl_id, "await_decide_on_acceptance_vaccine_set", Role::VC, a.vc,
                   a.t_commitment, config_.step_timeout, false};
}

std::vector<Waiting> VcGovtContract::waiting() const {
    std::vector<Waiting> out;
    for (const auto& a : reg_history_) {
        if (auto w = waiting_on(a)) out.push_back(*w);
    }
    for (const auto& a : refill_history_) {
        if (auto w = waiting_on(a)) out.push_back(*w);
    }
    return out;
}

}  // namespace vaxpass::contracts
