#include "vaxpass/contracts/token_registry.hpp"

namespace vaxpass::contracts {

using namespace detail;

std::uint64_t TokenRegistry::appl_for_token_id(const PartyAddress& caller, const crypto::Digest& citizen_info_digest) {
    const Ticks now = ledger_.now();
    clock_started(now);
    authorize(caller != config_.govt, "the government cannot apply for a token");
    guard(!digest_to_token_.contains(citizen_info_digest), "a token was already issued for this digest");
    guard(!addr_to_token_.contains(caller), "caller already holds a token");
    if (auto it = current_appl_.find(caller); it != current_appl_.end()) {
        guard(!appls_[it->second].under_review, "an application is already under review");
    }
    for (const auto& a : appls_) {
        guard(!(a.under_review && a.citizen_info_digest == citizen_info_digest),
              "another application for this digest is under review");
    }

    TokenAppl appl;
    appl.token_appl_id = appls_.size() + 1;
    appl.applicant = caller;
    appl.citizen_info_digest = citizen_info_digest;
    appl.under_review = true;
    appl.t_token_appl = now;
    appls_.push_back(appl);
    current_appl_[caller] = appls_.size() - 1;
    ledger_.record(caller.hex(), "appl_for_token_id",
                   fields({{"appl", num(appl.token_appl_id)}, {"digest", citizen_info_digest.hex()}, {"t", num(now)}}));
    return appl.token_appl_id;
}

std::optional<std::uint64_t> TokenRegistry::verify_appl(const PartyAddress& caller, std::uint64_t token_appl_id,
                                                        bool decision) {
    const Ticks now = ledger_.now();
    clock_started(now);
    authorize(caller == config_.govt, "only the government verifies token applications");
    guard(token_appl_id >= 1 && token_appl_id <= appls_.size(), "unknown token application id");
    auto& appl = appls_[token_appl_id - 1];
    guard(appl.under_review, "application is not under review");
    guard(appl.t_token_appl != 0, "application was never timestamped");
    guard(appl.t_result == 0, "application already decided");
    within(now, appl.t_token_appl, config_.step_timeout, "verify_appl");
    guard(!digest_to_token_.contains(appl.citizen_info_digest), "a token was already issued for this digest");

    std::optional<std::uint64_t> token;
    if (decision) {
        CitizenRecord rec;
        rec.citizen_info_digest = appl.citizen_info_digest;
        rec.token_id = next_token_id_++;
        rec.address = appl.applicant;
        citizens_[rec.token_id] = rec;
        digest_to_token_[rec.citizen_info_digest] = rec.token_id;
        addr_to_token_[rec.address] = rec.token_id;
        token = rec.token_id;
    }
    appl.result = decision;
    appl.t_result = now;
    appl.under_review = false;
    ledger_.record(caller.hex(), "verify_appl",
                   fields({{"appl", num(token_appl_id)}, {"decision", flag(decision)},
                           {"token", num(token.value_or(0))}, {"t", num(now)}}));
    return token;
}

void TokenRegistry::exit_token_application(const PartyAddress& caller) {
    const Ticks now = ledger_.now();
    clock_started(now);
    auto it = current_appl_.find(caller);
    authorize(it != current_appl_.end(), "caller has no token application");
    auto& appl = appls_[it->second];
    guard(appl.under_review, "application is not under review");
    past(now, appl.t_token_appl, config_.step_timeout, "exit_token_application");
    appl.under_review = false;
    appl.exited = true;
    ledger_.record(caller.hex(), "exit_token_application",
                   fields({{"appl", num(appl.token_appl_id)}, {"t", num(now)}}));
}

std::optional<std::uint64_t> TokenRegistry::token_of(const PartyAddress& addr) const {
    auto it = addr_to_token_.find(addr);
    if (it == addr_to_token_.end()) return std::nullopt;
    return it->second;
}

std::optional<CitizenRecord> TokenRegistry::citizen(std::uint64_t token_id) const {
    auto it = citizens_.find(token_id);
    if (it == citizens_.end()) return std::nullopt;
    return it->second;
}

std::optional<CitizenRecord> TokenRegistry::citizen_at(const PartyAddress& addr) const {
    auto t = token_of(addr);
    return t ? citizen(*t) : std::nullopt;
}

std::optional<TokenAppl> TokenRegistry::current_application(const PartyAddress& addr) const {
    auto it = current_appl_.find(addr);
    if (it == current_appl_.end()) return std::nullopt;
    return appls_[it->second];
}

std::vector<CitizenRecord> TokenRegistry::citizens() const {
    std::vector<CitizenRecord> out;
    for (const auto& [_, c] : citizens_) out.push_back(c);
    return out;
}

GlobalStats TokenRegistry::stats() const {
    GlobalStats s;
    for (const auto& [_, c] : citizens_) {
        s.tokened += 1;
        s.vaccinated += c.vaccination_status ? 1 : 0;
        s.vp_issued += c.vp_status ? 1 : 0;
    }
    return s;
}

std::vector<Waiting> TokenRegistry::waiting() const {
    std::vector<Waiting> out;
    for (const auto& a : appls_) {
        if (!a.under_review) continue;
        out.push_back(Waiting{"token", a.token_appl_id, "await_verify_appl", Role::Govt, config_.govt, a.t_token_appl,
                              config_.step_timeout, false});
    }
    return out;
}

void TokenRegistry::mark_vaccinated(std::uint64_t token_id) {
    auto it = citizens_.find(token_id);
    guard(it != citizens_.end(), "unknown token");
    it->second.vaccination_status = true;
}

void TokenRegistry::attach_vp(std::uint64_t token_id, const cas::ContentID& c_id) {
    auto it = citizens_.find(token_id);
    guard(it != citizens_.end(), "unknown token");
    guard(it->second.vaccination_status, "citizen is not vaccinated");
    it->second.vp_status = true;
    it->second.c_id = c_id;
}

}  // namespace vaxpass::contracts
