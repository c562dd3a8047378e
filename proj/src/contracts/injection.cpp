#include "vaxpass/contracts/injection.hpp"

namespace vaxpass::contracts {

using namespace detail;

std::string to_string(VialState s) {
    switch (s) {
        case VialState::Unused: return "unused";
        case VialState::Reserved: return "reserved";
        case VialState::Used: return "used";
    }
    return "unknown";
}

std::vector<Ticks> InjectingProtocol::progression() const {
    return {t_protocol_begins, t_lock_money_by_vc, t_lock_money_by_c, t_commit_mt_proof, t_consent1,
            t_commit_vid,      t_consent2,         t_consent3,        t_vaccination,     t_acknowledgement};
}

namespace {

std::string tag(const InjectingProtocol& p) { return num(p.protocol_id); }

}  // namespace

InjectingProtocol& InjectionContract::citizen_instance(const PartyAddress& caller, std::uint64_t vc_id) {
    auto token = tokens_.token_of(caller);
    authorize(token.has_value(), "caller holds no token");
    guard(!tokens_.citizen(*token)->vaccination_status, "citizen is already vaccinated");
    guard(vc_govt_.vc_by_id(vc_id).has_value(), "unknown vc id");
    auto it = current_.find(caller);
    guard(it != current_.end(), "no injection protocol for this citizen");
    auto& p = instances_[it->second];
    guard(p.under_process, "injection protocol is not in process");
    guard(p.vc_id == vc_id, "protocol belongs to another VC");
    guard(p.token_id == *token, "protocol belongs to another token");
    return p;
}

InjectingProtocol& InjectionContract::vc_instance(const PartyAddress& caller, const PartyAddress& c_addr) {
    auto vc = vc_govt_.vc(caller);
    authorize(vc.has_value(), "caller is not a registered VC");
    auto token = tokens_.token_of(c_addr);
    guard(token.has_value(), "citizen holds no token");
    guard(!tokens_.citizen(*token)->vaccination_status, "citizen is already vaccinated");
    auto it = current_.find(c_addr);
    guard(it != current_.end(), "no injection protocol for this citizen");
    auto& p = instances_[it->second];
    guard(p.under_process, "injection protocol is not in process");
    guard(p.vc_id == vc->vc_id, "protocol belongs to another VC");
    guard(p.token_id == *token, "protocol belongs to another token");
    return p;
}

void InjectionContract::set_vial(InjectingProtocol& p, VialState to) {
    auto from = vial_state(p.commit_vid);
    if (from == to) return;
    vial_state_[p.commit_vid] = to;
    transitions_.push_back({p.commit_vid, from, to, ledger_.now(), p.protocol_id});
}

void InjectionContract::settle(InjectingProtocol& p, const PartyAddress& c_escrow_to,
                               const PartyAddress& vc_escrow_to, std::string outcome) {
    const Ticks now = ledger_.now();
    if (p.vc_escrow && ledger_.escrow_open(*p.vc_escrow)) {
        ledger_.release_funds(*p.vc_escrow, vc_escrow_to);
        p.t_money_received_by_vc = now;
    }
    if (p.c_escrow && ledger_.escrow_open(*p.c_escrow)) {
        ledger_.release_funds(*p.c_escrow, c_escrow_to);
        p.t_money_received_by_c = now;
    }
    p.under_process = false;
    p.outcome = std::move(outcome);
}

std::uint64_t InjectionContract::begin_protocol(const PartyAddress& caller, std::uint64_t vc_id) {
    const Ticks now = ledger_.now();
    clock_started(now);
    auto token = tokens_.token_of(caller);
    authorize(token.has_value(), "caller holds no token");
    auto vc = vc_govt_.vc_by_id(vc_id);
    guard(vc.has_value(), "unknown vc id");
    guard(!tokens_.citizen(*token)->vaccination_status, "citizen is already vaccinated");
    if (auto it = current_.find(caller); it != current_.end()) {
        guard(!instances_[it->second].under_process, "an injection protocol is already in process");
    }

    InjectingProtocol p;
    p.protocol_id = instances_.size() + 1;
    p.under_process = true;
    p.token_id = *token;
    p.vc_id = vc_id;
    p.citizen = caller;
    p.vc = vc->address;
    p.t_protocol_begins = now;
    instances_.push_back(p);
    current_[caller] = instances_.size() - 1;
    latest_by_token_[*token] = instances_.size() - 1;
    ledger_.record(caller.hex(), "begin_protocol",
                   fields({{"protocol", tag(p)}, {"token", num(*token)}, {"vc", num(vc_id)}, {"t", num(now)}}));
    return p.protocol_id;
}

void InjectionContract::lock_money_by_vc(const PartyAddress& caller, const PartyAddress& c_addr, Amount locked) {
    const Ticks now = ledger_.now();
    clock_started(now);
    auto& p = vc_instance(caller, c_addr);
    guard(p.t_protocol_begins != 0, "protocol has not begun");
    guard(p.t_lock_money_by_vc == 0, "VC deposit already locked");
    within(now, p.t_protocol_begins, config_.step_timeout, "lock_money_by_vc");
    guard(locked == config_.injection_deposit, "wrong deposit amount");

    p.vc_escrow = ledger_.lock_funds(caller, locked, "injection/" + tag(p) + "/vc");
    p.t_lock_money_by_vc = now;
    ledger_.record(caller.hex(), "lock_money_by_vc", fields({{"protocol", tag(p)}, {"t", num(now)}}));
}

void InjectionContract::lock_money_by_c(const PartyAddress& caller, std::uint64_t vc_id, Amount locked) {
    const Ticks now = ledger_.now();
    clock_started(now);
    auto& p = citizen_instance(caller, vc_id);
    guard(p.t_lock_money_by_vc != 0, "VC has not locked its deposit");
    guard(p.t_lock_money_by_c == 0, "citizen deposit already locked");
    within(now, p.t_lock_money_by_vc, config_.step_timeout, "lock_money_by_c");
    guard(locked == config_.injection_deposit, "wrong deposit amount");

    p.c_escrow = ledger_.lock_funds(caller, locked, "vault/token/" + num(p.token_id) + "/injection/" + tag(p));
    p.t_lock_money_by_c = now;
    ledger_.record(caller.hex(), "lock_money_by_c", fields({{"protocol", tag(p)}, {"t", num(now)}}));
}

void InjectionContract::commit_mt_proof(const PartyAddress& caller, const PartyAddress& c_addr,
                                        const crypto::Digest& commitment) {
    const Ticks now = ledger_.now();
    clock_started(now);
    auto& p = vc_instance(caller, c_addr);
    guard(p.t_lock_money_by_c != 0, "citizen has not locked its deposit");
    guard(p.t_commit_mt_proof == 0, "proof already committed");
    within(now, p.t_lock_money_by_c, config_.step_timeout, "commit_mt_proof");

    p.commit_mt_proof = commitment;
    p.stock_id = vc_govt_.vc(caller)->current_stock_id;
    p.t_commit_mt_proof = now;
    ledger_.record(caller.hex(), "commit_mt_proof",
                   fields({{"protocol", tag(p)}, {"commit", commitment.hex()}, {"stock", num(p.stock_id)},
                           {"t", num(now)}}));
}

void InjectionContract::provide_consent1(const PartyAddress& caller, std::uint64_t vc_id, bool consent1) {
    const Ticks now = ledger_.now();
    clock_started(now);
    auto& p = citizen_instance(caller, vc_id);
    guard(p.t_commit_mt_proof != 0, "proof not committed");
    guard(p.t_consent1 == 0, "consent1 already given");
    within(now, p.t_commit_mt_proof, config_.step_timeout, "provide_consent1");

    p.consent1 = consent1;
    p.t_consent1 = now;
    if (!consent1) settle(p, p.citizen, p.vc, "dissent1_refund");
    ledger_.record(caller.hex(), "provide_consent1",
                   fields({{"protocol", tag(p)}, {"consent", flag(consent1)}, {"t", num(now)}}));
}

void InjectionContract::commit_vial_id(const PartyAddress& caller, const PartyAddress& c_addr,
                                       const crypto::Digest& commit_vid) {
    const Ticks now = ledger_.now();
    clock_started(now);
    auto& p = vc_instance(caller, c_addr);
    guard(p.t_consent1 != 0 && p.consent1, "consent1 not given");
    guard(p.t_commit_vid == 0, "vial already committed");
    within(now, p.t_consent1, config_.step_timeout, "commit_vial_id");
    guard(vial_state(commit_vid) == VialState::Unused,
          "vial is " + to_string(vial_state(commit_vid)) + ", not unused");

    p.commit_vid = commit_vid;
    p.t_commit_vid = now;
    set_vial(p, VialState::Reserved);
    ledger_.record(caller.hex(), "commit_vial_id",
                   fields({{"protocol", tag(p)}, {"commit", commit_vid.hex()}, {"t", num(now)}}));
}

void InjectionContract::provide_consent2(const PartyAddress& caller, std::uint64_t vc_id, bool consent2) {
    const Ticks now = ledger_.now();
    clock_started(now);
    auto& p = citizen_instance(caller, vc_id);
    guard(p.t_commit_vid != 0, "vial not committed");
    guard(p.t_consent2 == 0, "consent2 already given");
    within(now, p.t_commit_vid, config_.step_timeout, "provide_consent2");

    p.consent2 = consent2;
    p.t_consent2 = now;
    if (!consent2) {
        set_vial(p, VialState::Unused);
        settle(p, p.citizen, p.vc, "dissent2_refund");
    }
    ledger_.record(caller.hex(), "provide_consent2",
                   fields({{"protocol", tag(p)}, {"consent", flag(consent2)}, {"t", num(now)}}));
}

void InjectionContract::provide_consent3(const PartyAddress& caller, std::uint64_t vc_id, bool consent3) {
    const Ticks now = ledger_.now();
    clock_started(now);
    auto& p = citizen_instance(caller, vc_id);
    guard(p.t_consent2 != 0 && p.consent2, "consent2 not given");
    guard(p.t_consent3 == 0, "consent3 already given");
    within(now, p.t_consent2, config_.step_timeout, "provide_consent3");

    p.consent3 = consent3;
    p.t_consent3 = now;
    ledger_.record(caller.hex(), "provide_consent3",
                   fields({{"protocol", tag(p)}, {"consent", flag(consent3)}, {"t", num(now)}}));
}

Verdict InjectionContract::adjudicate_dispute(const PartyAddress& caller, const PartyAddress& c_addr,
                                              const crypto::MerkleProof& revealed) {
    const Ticks now = ledger_.now();
    clock_started(now);
    auto& p = vc_instance(caller, c_addr);
    guard(p.t_consent3 != 0 && !p.consent3, "no consent3 dispute is open");
    within(now, p.t_consent3, config_.dispute_window, "adjudicate_dispute");

    auto stock = vc_govt_.stock(p.stock_id);
    bool valid = stock && revealed.commitment() == p.commit_mt_proof && crypto::hash(revealed.leaf) == p.commit_vid &&
                 crypto::merkle_verify_any_position(revealed, stock->stock_mr, stock->vials_count);

    set_vial(p, VialState::Unused);
    Verdict verdict = valid ? Verdict::CitizenFaulty : Verdict::VcFaulty;
    if (valid) {
        settle(p, p.vc, p.vc, "dispute_citizen_faulty");
    } else {
        settle(p, p.citizen, p.citizen, "dispute_vc_faulty");
    }
    ledger_.record(caller.hex(), "adjudicate_dispute",
                   fields({{"protocol", tag(p)}, {"proof_valid", flag(valid)}, {"t", num(now)}}));
    return verdict;
}

void InjectionContract::register_vax_timestamp(const PartyAddress& caller, const PartyAddress& c_addr) {
    const Ticks now = ledger_.now();
    clock_started(now);
    auto& p = vc_instance(caller, c_addr);
    guard(p.t_consent3 != 0, "consent3 not given");
    guard(p.consent3, "citizen dissented at consent3");
    guard(p.t_vaccination == 0, "vaccination already registered");
    within(now, p.t_consent3, config_.step_timeout, "register_vax_timestamp");

    p.t_vaccination = now;
    ledger_.record(caller.hex(), "register_vax_timestamp", fields({{"protocol", tag(p)}, {"t", num(now)}}));
}

void InjectionContract::acknowledge_vaccination(const PartyAddress& caller, std::uint64_t vc_id, bool ack) {
    const Ticks now = ledger_.now();
    clock_started(now);
    auto& p = citizen_instance(caller, vc_id);
    guard(p.t_vaccination != 0, "vaccination not registered");
    guard(p.t_acknowledgement == 0, "already acknowledged");
    within(now, p.t_vaccination, config_.step_timeout, "acknowledge_vaccination");

    if (ack) {
        vc_govt_.pay_dose(p.vc_id);
        if (p.vc_escrow) ledger_.release_funds(*p.vc_escrow, p.vc);
        p.t_money_received_by_vc = now;
        tokens_.mark_vaccinated(p.token_id);
        set_vial(p, VialState::Used);
        p.under_process = false;
        p.outcome = "vaccinated";
    } else {
        p.frozen = true;
        p.outcome = "negative_ack";
    }
    p.acknowledgement = ack;
    p.t_acknowledgement = now;
    ledger_.record(caller.hex(), "acknowledge_vaccination",
                   fields({{"protocol", tag(p)}, {"ack", flag(ack)}, {"t", num(now)}}));
}

std::optional<Waiting> InjectionContract::waiting_on(const InjectingProtocol& p) const {
    if (!p.under_process || p.frozen) return std::nullopt;
    Waiting w{"injection", p.protocol_id, "", Role::VC, p.vc, 0, config_.step_timeout, false};
    auto on_citizen = [&](std::string state, Ticks since, bool stake) {
        w.state = std::move(state);
        w.role = Role::Citizen;
        w.party = p.citizen;
        w.since = since;
        w.stake_at_risk = stake;
    };
    auto on_vc = [&](std::string state, Ticks since, bool stake) {
        w.state = std::move(state);
        w.since = since;
        w.stake_at_risk = stake;
    };
    if (p.t_lock_money_by_vc == 0) {
        on_vc("await_lock_money_by_vc", p.t_protocol_begins, false);
    } else if (p.t_lock_money_by_c == 0) {
        on_citizen("await_lock_money_by_c", p.t_lock_money_by_vc, false);
    } else if (p.t_commit_mt_proof == 0) {
        on_vc("await_commit_mt_proof", p.t_lock_money_by_c, true);
    } else if (p.t_consent1 == 0) {
        on_citizen("await_consent1", p.t_commit_mt_proof, true);
    } else if (p.t_commit_vid == 0) {
        on_vc("await_commit_vial_id", p.t_consent1, true);
    } else if (p.t_consent2 == 0) {
        on_citizen("await_consent2", p.t_commit_vid, true);
    } else if (p.t_consent3 == 0) {
        on_citizen("await_consent3", p.t_consent2, true);
    } else if (!p.consent3) {
        on_vc("await_dispute_reveal", p.t_consent3, true);
        w.window = config_.dispute_window;
    } else if (p.t_vaccination == 0) {
        on_vc("await_register_vax_timestamp", p.t_consent3, true);
    } else {
        on_citizen("await_acknowledgement", p.t_vaccination, true);
    }
    return w;
}

void InjectionContract::exit_protocol(const PartyAddress& caller, const PartyAddress& c_addr) {
    const Ticks now = ledger_.now();
    clock_started(now);
    auto it = current_.find(c_addr);
    guard(it != current_.end(), "no injection protocol for this citizen");
    auto& p = instances_[it->second];
    guard(p.under_process, "injection protocol is not in process");
    guard(!p.frozen, "instance is frozen pending off-system resolution");
    auto w = *waiting_on(p);
    const PartyAddress& claimant = w.role == Role::Citizen ? p.vc : p.citizen;
    authorize(caller == claimant, "only the waiting party may exit");
    past(now, w.since, w.window, "exit_protocol");

    if (w.state == "await_acknowledgement") {
        vc_govt_.pay_dose(p.vc_id);
        tokens_.mark_vaccinated(p.token_id);
        set_vial(p, VialState::Used);
        settle(p, p.vc, p.vc, "exit_silent_citizen_after_vaccination");
    } else {
        if (p.t_commit_vid != 0) set_vial(p, VialState::Unused);
        const PartyAddress& winner = caller;
        settle(p, winner, winner, "exit_" + w.state);
    }
    ledger_.record(caller.hex(), "exit_protocol",
                   fields({{"protocol", tag(p)}, {"state", w.state}, {"t", num(now)}}));
}

void InjectionContract::release_vault(std::uint64_t token_id, const PartyAddress& to) {
    auto it = latest_by_token_.find(token_id);
    if (it == latest_by_token_.end()) return;
    auto& p = instances_[it->second];
    if (p.c_escrow && ledger_.escrow_open(*p.c_escrow)) {
        ledger_.release_funds(*p.c_escrow, to);
        p.t_money_received_by_c = ledger_.now();
    }
}

VialState InjectionContract::vial_state(const crypto::Digest& commit_vid) const {
    auto it = vial_state_.find(commit_vid);
    return it == vial_state_.end() ? VialState::Unused : it->second;
}

std::optional<InjectingProtocol> InjectionContract::current(const PartyAddress& c_addr) const {
    auto it = current_.find(c_addr);
    if (it == current_.end()) return std::nullopt;
    return instances_[it->second];
}

std::optional<InjectingProtocol> InjectionContract::latest_for_token(std::uint64_t token_id) const {
    auto it = latest_by_token_.find(token_id);
    if (it == latest_by_token_.end()) return std::nullopt;
    return instances_[it->second];
}

std::vector<Waiting> InjectionContract::waiting() const {
    std::vector<Waiting> out;
    for (const auto& p : instances_) {
        if (auto w = waiting_on(p)) out.push_back(*w);
    }
    return out;
}

}  // namespace vaxpass::contracts
