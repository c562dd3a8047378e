#include "vaxpass/contracts/verification.hpp"

namespace vaxpass::contracts {

using namespace detail;

std::vector<Ticks> VerificationProtocol::progression() const {
    return {t_lock_money_by_vf, t_lock_money_and_commit_rk_by_c, t_provide_consent,
            t_grant_access_by_c, t_fetch_vp_info, t_verification_result};
}

VerificationProtocol& VerificationContract::fetch(std::uint64_t vf_protocol_id) {
    guard(vf_protocol_id >= 1 && vf_protocol_id <= instances_.size(), "unknown verification protocol id");
    auto& p = instances_[vf_protocol_id - 1];
    guard(p.under_execution, "verification protocol is not executing");
    return p;
}

VerificationProtocol& VerificationContract::citizen_instance(const PartyAddress& caller,
                                                             std::uint64_t vf_protocol_id) {
    auto token = tokens_.token_of(caller);
    authorize(token.has_value(), "caller holds no token");
    auto& p = fetch(vf_protocol_id);
    guard(p.token_id == *token, "protocol concerns another citizen");
    return p;
}

VerificationProtocol& VerificationContract::vf_instance(const PartyAddress& caller, std::uint64_t vf_protocol_id) {
    guard(vf_protocol_id >= 1 && vf_protocol_id <= instances_.size(), "unknown verification protocol id");
    authorize(instances_[vf_protocol_id - 1].vf_addr == caller, "caller is not this protocol's verifier");
    return fetch(vf_protocol_id);
}

void VerificationContract::settle(VerificationProtocol& p, const PartyAddress& c_escrow_to,
                                  const PartyAddress& vf_escrow_to, std::string outcome) {
    if (p.vf_escrow && ledger_.escrow_open(*p.vf_escrow)) ledger_.release_funds(*p.vf_escrow, vf_escrow_to);
    if (p.c_escrow && ledger_.escrow_open(*p.c_escrow)) ledger_.release_funds(*p.c_escrow, c_escrow_to);
    p.t_unlock_money = ledger_.now();
    p.under_execution = false;
    p.outcome = std::move(outcome);
}

std::uint64_t VerificationContract::lock_money_by_vf(const PartyAddress& caller, const PartyAddress& c_addr,
                                                     Amount locked) {
    const Ticks now = ledger_.now();
    clock_started(now);
    auto rec = tokens_.citizen_at(c_addr);
    guard(rec.has_value(), "citizen holds no token");
    guard(rec->vaccination_status && rec->vp_status, "citizen holds no VP");
    guard(caller != c_addr, "a citizen cannot verify itself");
    guard(locked == config_.verification_deposit, "wrong deposit amount");
    const auto key = std::make_pair(rec->token_id, caller);
    if (auto it = latest_.find(key); it != latest_.end()) {
        guard(!instances_[it->second].under_execution, "a verification with this citizen is executing");
    }

    VerificationProtocol p;
    p.vf_protocol_id = instances_.size() + 1;
    p.under_execution = true;
    p.token_id = rec->token_id;
    p.citizen = c_addr;
    p.vf_addr = caller;
    p.vf_escrow = ledger_.lock_funds(caller, locked, "verification/" + num(p.vf_protocol_id) + "/vf");
    p.t_lock_money_by_vf = now;
    instances_.push_back(p);
    latest_[key] = instances_.size() - 1;
    ledger_.record(caller.hex(), "lock_money_by_vf",
                   fields({{"protocol", num(p.vf_protocol_id)}, {"token", num(p.token_id)}, {"t", num(now)}}));
    return p.vf_protocol_id;
}

void VerificationContract::lock_money_and_commit_rk(const PartyAddress& caller, std::uint64_t vf_protocol_id,
                                                    const crypto::Digest& commit_rk, Amount locked) {
    const Ticks now = ledger_.now();
    clock_started(now);
    guard(locked == config_.verification_deposit, "wrong deposit amount");
    auto& p = citizen_instance(caller, vf_protocol_id);
    guard(p.t_lock_money_by_vf != 0, "verifier has not locked");
    guard(p.t_lock_money_and_commit_rk_by_c == 0, "key already committed");
    within(now, p.t_lock_money_by_vf, config_.step_timeout, "lock_money_and_commit_rk");

    p.c_escrow = ledger_.lock_funds(caller, locked, "verification/" + num(p.vf_protocol_id) + "/c");
    p.commit_rk = commit_rk;
    p.t_lock_money_and_commit_rk_by_c = now;
    ledger_.record(caller.hex(), "lock_money_and_commit_rk",
                   fields({{"protocol", num(vf_protocol_id)}, {"commit", commit_rk.hex()}, {"t", num(now)}}));
}

void VerificationContract::provide_consent(const PartyAddress& caller, std::uint64_t vf_protocol_id, bool decision) {
    const Ticks now = ledger_.now();
    clock_started(now);
    auto& p = vf_instance(caller, vf_protocol_id);
    guard(p.t_lock_money_and_commit_rk_by_c != 0, "key not committed");
    guard(p.t_provide_consent == 0, "consent already given");
    within(now, p.t_lock_money_and_commit_rk_by_c, config_.step_timeout, "provide_consent");

    p.consent = decision;
    p.t_provide_consent = now;
    if (!decision) settle(p, p.citizen, p.vf_addr, "dissent_refund");
    ledger_.record(caller.hex(), "provide_consent",
                   fields({{"protocol", num(vf_protocol_id)}, {"consent", flag(decision)}, {"t", num(now)}}));
}

void VerificationContract::grant_access_permission(const PartyAddress& caller, std::uint64_t vf_protocol_id) {
    const Ticks now = ledger_.now();
    clock_started(now);
    auto& p = citizen_instance(caller, vf_protocol_id);
    guard(p.t_provide_consent != 0, "verifier has not consented");
    guard(p.t_grant_access_by_c == 0, "access already granted");
    within(now, p.t_provide_consent, config_.step_timeout, "grant_access_permission");
    guard(p.consent, "verifier dissented");

    p.t_grant_access_by_c = now;
    access_[{p.token_id, p.vf_addr}] = true;
    ledger_.record(caller.hex(), "grant_access_permission",
                   fields({{"protocol", num(vf_protocol_id)}, {"vf", p.vf_addr.hex()}, {"t", num(now)}}));
}

void VerificationContract::revoke_access_permission(const PartyAddress& caller, const PartyAddress& vf_addr) {
    const Ticks now = ledger_.now();
    clock_started(now);
    auto token = tokens_.token_of(caller);
    authorize(token.has_value(), "caller holds no token");
    auto it = access_.find({*token, vf_addr});
    guard(it != access_.end() && it->second, "no grant to revoke");
    it->second = false;
    ledger_.record(caller.hex(), "revoke_access_permission",
                   fields({{"token", num(*token)}, {"vf", vf_addr.hex()}, {"t", num(now)}}));
}

VPRecord VerificationContract::fetch_vp_info(const PartyAddress& caller, std::uint64_t vf_protocol_id) {
    const Ticks now = ledger_.now();
    clock_started(now);
    auto& p = vf_instance(caller, vf_protocol_id);
    authorize(has_access(p.token_id, caller), "citizen has not granted access");
    guard(p.t_grant_access_by_c != 0, "access not granted in this protocol");
    guard(p.t_fetch_vp_info == 0, "VP info already fetched");
    within(now, p.t_grant_access_by_c, config_.step_timeout, "fetch_vp_info");
    auto rec = passport_.vp_record(p.token_id);
    guard(rec.has_value(), "no VP on record");

    p.t_fetch_vp_info = now;
    ledger_.record(caller.hex(), "fetch_vp_info", fields({{"protocol", num(vf_protocol_id)}, {"t", num(now)}}));
    return *rec;
}

void VerificationContract::verification_result(const PartyAddress& caller, std::uint64_t vf_protocol_id,
                                               bool result) {
    const Ticks now = ledger_.now();
    clock_started(now);
    auto& p = vf_instance(caller, vf_protocol_id);
    guard(p.t_fetch_vp_info != 0, "VP info not fetched");
    guard(p.t_verification_result == 0, "result already recorded");
    within(now, p.t_fetch_vp_info, config_.step_timeout, "verification_result");

    p.verification_result = result;
    p.t_verification_result = now;
    settle(p, p.citizen, p.vf_addr, result ? "verified" : "rejected");
    history_[p.token_id].push_back({p.vf_addr, now, result});
    ledger_.record(caller.hex(), "verification_result",
                   fields({{"protocol", num(vf_protocol_id)}, {"result", flag(result)}, {"t", num(now)}}));
}

std::optional<Waiting> VerificationContract::waiting_on(const VerificationProtocol& p) const {
    if (!p.under_execution) return std::nullopt;
    Waiting w{"verification", p.vf_protocol_id, "", Role::Verifier, p.vf_addr, 0, config_.step_timeout, true};
    auto on_citizen = [&](std::string state, Ticks since, bool stake) {
        w.state = std::move(state);
        w.role = Role::Citizen;
        w.party = p.citizen;
        w.since = since;
        w.stake_at_risk = stake;
    };
    if (p.t_lock_money_and_commit_rk_by_c == 0) {
        on_citizen("await_lock_money_and_commit_rk", p.t_lock_money_by_vf, false);
    } else if (p.t_provide_consent == 0) {
        w.state = "await_provide_consent";
        w.since = p.t_lock_money_and_commit_rk_by_c;
    } else if (p.t_grant_access_by_c == 0) {
        on_citizen("await_grant_access_permission", p.t_provide_consent, true);
    } else if (p.t_fetch_vp_info == 0) {
        w.state = "await_fetch_vp_info";
        w.since = p.t_grant_access_by_c;
    } else {
        w.state = "await_verification_result";
        w.since = p.t_fetch_vp_info;
    }
    return w;
}

void VerificationContract::exit_verification(const PartyAddress& caller, std::uint64_t vf_protocol_id) {
    const Ticks now = ledger_.now();
    clock_started(now);
    auto& p = fetch(vf_protocol_id);
    auto w = *waiting_on(p);
    const PartyAddress claimant = w.role == Role::Citizen ? p.vf_addr : p.citizen;
    authorize(caller == claimant, "only the waiting party may exit");
    past(now, w.since, w.window, "exit_verification");

    settle(p, caller, caller, "exit_" + w.state);
    ledger_.record(caller.hex(), "exit_verification",
                   fields({{"protocol", num(vf_protocol_id)}, {"state", w.state}, {"t", num(now)}}));
}

VPRecord VerificationContract::query_vp_record(const PartyAddress& caller, std::uint64_t token_id) const {
    auto own = tokens_.token_of(caller);
    authorize((own && *own == token_id) || has_access(token_id, caller), "no access to this VP record");
    auto rec = passport_.vp_record(token_id);
    if (!rec) fail(ErrorKind::NotFound, "no VP on record for token " + num(token_id));
    return *rec;
}

bool VerificationContract::has_access(std::uint64_t token_id, const PartyAddress& vf_addr) const {
    auto it = access_.find({token_id, vf_addr});
    return it != access_.end() && it->second;
}

std::vector<VerificationEntry> VerificationContract::history(std::uint64_t token_id) const {
    auto it = history_.find(token_id);
    return it == history_.end() ? std::vector<VerificationEntry>{} : it->second;
}

std::optional<VerificationProtocol> VerificationContract::instance(std::uint64_t vf_protocol_id) const {
    if (vf_protocol_id < 1 || vf_protocol_id > instances_.size()) return std::nullopt;
    return instances_[vf_protocol_id - 1];
}

std::vector<Waiting> VerificationContract::waiting() const {
    std::vector<Waiting> out;
    for (const auto& p : instances_) {
        if (auto w = waiting_on(p)) out.push_back(*w);
    }
    return out;
}

}  // namespace vaxpass::contracts
