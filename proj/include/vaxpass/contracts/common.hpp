#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>

#include "vaxpass/core/errors.hpp"
#include "vaxpass/ledger/ledger.hpp"

namespace vaxpass::contracts {

using ledger::Amount;
using ledger::EscrowId;
using ledger::PartyAddress;
using ledger::Ticks;

struct ContractConfig {
    PartyAddress govt;
    Bytes govt_signing_pk;
    Ticks step_timeout = 100;
    Ticks dispute_window = 50;
    Amount service_charge_per_vial = 10;
    Amount injection_deposit = 100;
    Amount vp_deposit = 100;
    Amount verification_deposit = 100;
};

enum class Role : std::uint8_t { Govt, VC, Citizen, Verifier };
std::string to_string(Role r);

/// An open instance stalled on one party. Once now - since > window, the
/// other side may call the matching exit operation.
struct Waiting {
    std::string contract;
    std::uint64_t instance = 0;
    std::string state;
    Role role = Role::Govt;
    PartyAddress party;
    Ticks since = 0;
    Ticks window = 0;
    bool stake_at_risk = false;

    bool expired(Ticks now) const { return now - since > window; }
};

namespace detail {

inline void authorize(bool cond, const std::string& what) { require(cond, ErrorKind::Unauthorized, what); }
inline void guard(bool cond, const std::string& what) { require(cond, ErrorKind::GuardFailed, what); }

inline void within(Ticks now, Ticks since, Ticks window, const std::string& step) {
    if (now - since > window) {
        fail(ErrorKind::WindowExpired, step + ": " + std::to_string(now - since) + " ticks elapsed, window is " +
                                           std::to_string(window));
    }
}

inline void past(Ticks now, Ticks since, Ticks window, const std::string& step) {
    guard(now - since > window, step + ": window has not expired yet");
}

inline void clock_started(Ticks now) { guard(now > 0, "the chain clock has not started"); }

/// "k1=v1 k2=v2 ..." event payload.
inline std::string fields(std::initializer_list<std::pair<std::string_view, std::string>> kv) {
    std::string out;
    for (const auto& [k, v] : kv) {
        if (!out.empty()) out += ' ';
        out.append(k).append("=").append(v);
    }
    return out;
}

inline std::string num(std::uint64_t v) { return std::to_string(v); }
inline std::string flag(bool b) { return b ? "true" : "false"; }

}  // namespace detail

}  // namespace vaxpass::contracts
