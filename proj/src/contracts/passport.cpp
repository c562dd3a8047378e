#include "vaxpass/contracts/passport.hpp"

namespace vaxpass::contracts {

using namespace detail;

std::vector<Ticks> VPAppl::progression() const {
    return {t_lock_money_by_c, t_lock_money_by_govt, t_provide_vaccination_proof, t_consent1, t_consent2, t_issue_vp};
}

std::uint64_t PassportContract::vaccinated_token(const PartyAddress& c_addr) const {
    auto rec = tokens_.citizen_at(c_addr);
    guard(rec.has_value(), "citizen holds no token");
    guard(rec->vaccination_status, "citizen is not vaccinated");
    guard(!rec->vp_status, "citizen already holds a VP");
    return rec->token_id;
}

VPAppl& PassportContract::citizen_instance(const PartyAddress& caller) {
    authorize(tokens_.token_of(caller).has_value(), "caller holds no token");
    auto token = vaccinated_token(caller);
    auto it = current_.find(caller);
    guard(it != current_.end(), "no VP application for this citizen");
    auto& a = instances_[it->second];
    guard(a.under_process, "VP application is not in process");
    guard(a.applicant_token_id == token, "application belongs to another token");
    return a;
}

VPAppl& PassportContract::govt_instance(const PartyAddress& caller, const PartyAddress& c_addr) {
    authorize(caller == config_.govt, "caller is not the government");
    auto token = vaccinated_token(c_addr);
    auto it = current_.find(c_addr);
    guard(it != current_.end(), "no VP application for this citizen");
    auto& a = instances_[it->second];
    guard(a.under_process, "VP application is not in process");
    guard(a.applicant_token_id == token, "application belongs to another token");
    return a;
}

void PassportContract::settle(VPAppl& a, const PartyAddress& c_escrow_to, const PartyAddress& govt_escrow_to,
                              std::string outcome) {
    const Ticks now = ledger_.now();
    if (a.c_escrow && ledger_.escrow_open(*a.c_escrow)) {
        ledger_.release_funds(*a.c_escrow, c_escrow_to);
        a.t_money_received_by_c = now;
    }
    if (a.govt_escrow && ledger_.escrow_open(*a.govt_escrow)) {
        ledger_.release_funds(*a.govt_escrow, govt_escrow_to);
        a.t_money_received_by_govt = now;
    }
    a.under_process = false;
    a.outcome = std::move(outcome);
}

std::uint64_t PassportContract::initiate_vp_appl_and_lock_money(const PartyAddress& caller, Amount locked) {
    const Ticks now = ledger_.now();
    clock_started(now);
    authorize(tokens_.token_of(caller).has_value(), "caller holds no token");
    auto token = vaccinated_token(caller);
    guard(locked == config_.vp_deposit, "wrong deposit amount");
    if (auto it = current_.find(caller); it != current_.end()) {
        guard(!instances_[it->second].under_process, "a VP application is already in process");
    }

    VPAppl a;
    a.vp_appl_id = instances_.size() + 1;
    a.citizen = caller;
    a.applicant_token_id = token;
    a.under_process = true;
    a.c_escrow = ledger_.lock_funds(caller, locked, "vp/" + num(a.vp_appl_id) + "/c");
    a.t_lock_money_by_c = now;
    instances_.push_back(a);
    current_[caller] = instances_.size() - 1;
    ledger_.record(caller.hex(), "initiate_vp_appl_and_lock_money",
                   fields({{"appl", num(a.vp_appl_id)}, {"token", num(token)}, {"t", num(now)}}));
    return a.vp_appl_id;
}

void PassportContract::lock_money_by_govt(const PartyAddress& caller, const PartyAddress& c_addr, Amount locked) {
    const Ticks now = ledger_.now();
    clock_started(now);
    auto& a = govt_instance(caller, c_addr);
    guard(locked == config_.vp_deposit, "wrong deposit amount");
    guard(a.t_lock_money_by_c != 0, "citizen has not locked");
    guard(a.t_lock_money_by_govt == 0, "government already locked");
    within(now, a.t_lock_money_by_c, config_.step_timeout, "lock_money_by_govt");

    a.govt_escrow = ledger_.lock_funds(caller, locked, "vp/" + num(a.vp_appl_id) + "/govt");
    a.t_lock_money_by_govt = now;
    ledger_.record(caller.hex(), "lock_money_by_govt", fields({{"appl", num(a.vp_appl_id)}, {"t", num(now)}}));
}

void PassportContract::send_vaccination_proof(const PartyAddress& caller, ByteView v_id,
                                              const crypto::Digest& commit_mt_proof) {
    const Ticks now = ledger_.now();
    clock_started(now);
    auto& a = citizen_instance(caller);
    guard(a.t_lock_money_by_govt != 0, "government has not locked");
    guard(a.t_provide_vaccination_proof == 0, "proof already provided");
    within(now, a.t_lock_money_by_govt, config_.step_timeout, "send_vaccination_proof");
    auto inj = injection_.latest_for_token(a.applicant_token_id);
    guard(inj.has_value(), "no injection protocol on record");
    guard(inj->commit_mt_proof == commit_mt_proof, "proof commitment does not match the injection record");
    const auto vid_hash = crypto::hash(v_id);
    guard(inj->commit_vid == vid_hash, "vial id does not match the injection record");
    guard(injection_.vial_state(vid_hash) == VialState::Used, "vial is not marked used");

    a.t_provide_vaccination_proof = now;
    ledger_.record(caller.hex(), "send_vaccination_proof",
                   fields({{"appl", num(a.vp_appl_id)}, {"vid", to_hex(v_id)}, {"commit", commit_mt_proof.hex()},
                           {"t", num(now)}}));
}

void PassportContract::send_consent1(const PartyAddress& caller, const PartyAddress& c_addr, bool consent1) {
    const Ticks now = ledger_.now();
    clock_started(now);
    auto& a = govt_instance(caller, c_addr);
    guard(a.t_provide_vaccination_proof != 0, "no vaccination proof provided");
    guard(a.t_consent1 == 0, "consent1 already given");
    within(now, a.t_provide_vaccination_proof, config_.step_timeout, "send_consent1");

    a.consent1 = consent1;
    a.t_consent1 = now;
    if (!consent1) settle(a, a.citizen, config_.govt, "dissent1_refund");
    ledger_.record(caller.hex(), "send_consent1",
                   fields({{"appl", num(a.vp_appl_id)}, {"consent", flag(consent1)}, {"t", num(now)}}));
}

void PassportContract::send_consent2(const PartyAddress& caller, const PartyAddress& c_addr, bool consent2) {
    const Ticks now = ledger_.now();
    clock_started(now);
    auto& a = govt_instance(caller, c_addr);
    guard(a.t_consent1 != 0 && a.consent1, "consent1 not given");
    guard(a.t_consent2 == 0, "consent2 already given");
    within(now, a.t_consent1, config_.step_timeout, "send_consent2");

    a.consent2 = consent2;
    a.t_consent2 = now;
    ledger_.record(caller.hex(), "send_consent2",
                   fields({{"appl", num(a.vp_appl_id)}, {"consent", flag(consent2)}, {"t", num(now)}}));
}

DissentVerdict PassportContract::adjudicate_dissent(const PartyAddress& caller, const PartyAddress& c_addr,
                                                    const crypto::MerkleProof& proof) {
    const Ticks now = ledger_.now();
    clock_started(now);
    auto& a = govt_instance(caller, c_addr);
    guard(a.t_consent2 != 0 && !a.consent2, "no consent2 dissent is open");
    within(now, a.t_consent2, config_.dispute_window, "adjudicate_dissent");

    auto inj = injection_.latest_for_token(a.applicant_token_id);
    auto stock = inj ? vc_govt_.stock(inj->stock_id) : std::nullopt;
    const bool opens = inj && proof.commitment() == inj->commit_mt_proof && crypto::hash(proof.leaf) == inj->commit_vid;
    const bool member = opens && stock && crypto::merkle_verify_any_position(proof, stock->stock_mr, stock->vials_count);
    // Only a proof that opens the citizen's commitments yet misses the stock
    // root vindicates the government.
    const bool citizen_faulty = opens && !member;
    if (citizen_faulty) {
        settle(a, config_.govt, config_.govt, "dissent2_citizen_faulty");
    } else {
        settle(a, a.citizen, a.citizen, "dissent2_govt_faulty");
    }
    ledger_.record(caller.hex(), "adjudicate_dissent",
                   fields({{"appl", num(a.vp_appl_id)}, {"opens", flag(opens)}, {"member", flag(member)},
                           {"t", num(now)}}));
    return citizen_faulty ? DissentVerdict::CitizenFaulty : DissentVerdict::GovtFaulty;
}

void PassportContract::upload_vp_info_and_get_payment(const PartyAddress& caller, const PartyAddress& c_addr,
                                                      const crypto::Digest& md_vp, const crypto::Signature& sigma,
                                                      const cas::ContentID& c_id) {
    const Ticks now = ledger_.now();
    clock_started(now);
    auto& a = govt_instance(caller, c_addr);
    guard(a.t_consent2 != 0, "consent2 not given");
    guard(a.t_issue_vp == 0, "VP already issued");
    within(now, a.t_consent2, config_.step_timeout, "upload_vp_info_and_get_payment");
    guard(a.consent2, "government dissented at consent2");
    bool sig_ok = false;
    try {
        sig_ok = crypto::verify(config_.govt_signing_pk, md_vp.view(), sigma);
    } catch (const Error&) {
        sig_ok = false;
    }
    guard(sig_ok, "signature does not verify over the VP digest");

    a.t_issue_vp = now;
    settle(a, a.citizen, config_.govt, "vp_issued");
    injection_.release_vault(a.applicant_token_id, a.citizen);
    records_[a.applicant_token_id] = VPRecord{md_vp, sigma, c_id};
    tokens_.attach_vp(a.applicant_token_id, c_id);
    ledger_.record(caller.hex(), "upload_vp_info_and_get_payment",
                   fields({{"appl", num(a.vp_appl_id)}, {"md", md_vp.hex()}, {"sigma", sigma.hex()},
                           {"cid", c_id.hex()}, {"t", num(now)}}));
}

std::optional<Waiting> PassportContract::waiting_on(const VPAppl& a) const {
    if (!a.under_process) return std::nullopt;
    Waiting w{"passport", a.vp_appl_id, "", Role::Govt, config_.govt, 0, config_.step_timeout, true};
    if (a.t_lock_money_by_govt == 0) {
        w.state = "await_lock_money_by_govt";
        w.since = a.t_lock_money_by_c;
        w.stake_at_risk = false;
    } else if (a.t_provide_vaccination_proof == 0) {
        w.state = "await_vaccination_proof";
        w.role = Role::Citizen;
        w.party = a.citizen;
        w.since = a.t_lock_money_by_govt;
    } else if (a.t_consent1 == 0) {
        w.state = "await_consent1";
        w.since = a.t_provide_vaccination_proof;
    } else if (a.t_consent2 == 0) {
        w.state = "await_consent2";
        w.since = a.t_consent1;
    } else if (!a.consent2) {
        w.state = "await_dissent_proof";
        w.since = a.t_consent2;
        w.window = config_.dispute_window;
    } else {
        w.state = "await_upload_vp";
        w.since = a.t_consent2;
    }
    return w;
}

void PassportContract::exit_vp_appl(const PartyAddress& caller, const PartyAddress& c_addr) {
    const Ticks now = ledger_.now();
    clock_started(now);
    auto it = current_.find(c_addr);
    guard(it != current_.end(), "no VP application for this citizen");
    auto& a = instances_[it->second];
    guard(a.under_process, "VP application is not in process");
    auto w = *waiting_on(a);
    const PartyAddress claimant = w.role == Role::Govt ? a.citizen : config_.govt;
    authorize(caller == claimant, "only the waiting party may exit");
    past(now, w.since, w.window, "exit_vp_appl");

    settle(a, caller, caller, "exit_" + w.state);
    ledger_.record(caller.hex(), "exit_vp_appl",
                   fields({{"appl", num(a.vp_appl_id)}, {"state", w.state}, {"t", num(now)}}));
}

std::optional<VPAppl> PassportContract::current(const PartyAddress& c_addr) const {
    auto it = current_.find(c_addr);
    if (it == current_.end()) return std::nullopt;
    return instances_[it->second];
}

std::optional<VPRecord> PassportContract::vp_record(std::uint64_t token_id) const {
    auto it = records_.find(token_id);
    if (it == records_.end()) return std::nullopt;
    return it->second;
}

std::vector<Waiting> PassportContract::waiting() const {
    std::vector<Waiting> out;
    for (const auto& a : instances_) {
        if (auto w = waiting_on(a)) out.push_back(*w);
    }
    return out;
}

}  // namespace vaxpass::contracts
