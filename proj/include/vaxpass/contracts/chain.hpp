#pragma once

#include <vector>

#include "vaxpass/contracts/common.hpp"
#include "vaxpass/contracts/injection.hpp"
#include "vaxpass/contracts/passport.hpp"
#include "vaxpass/contracts/token_registry.hpp"
#include "vaxpass/contracts/vc_govt.hpp"
#include "vaxpass/contracts/verification.hpp"
#include "vaxpass/ledger/ledger.hpp"

namespace vaxpass::contracts {

/// The ledger plus the five deployed contracts, wired to each other.
struct Chain {
    explicit Chain(ContractConfig cfg)
        : config(std::move(cfg)),
          vc_govt(ledger, config),
          tokens(ledger, config),
          injection(ledger, config, vc_govt, tokens),
          passport(ledger, config, tokens, injection, vc_govt),
          verification(ledger, config, tokens, passport) {}

    Chain(const Chain&) = delete;
    Chain& operator=(const Chain&) = delete;

    /// Opens the next block: every transaction lands one tick after the last.
    Ticks tick() { return ledger.advance_time(1); }

    /// Every open instance in every contract, with who it is waiting on.
    std::vector<Waiting> waiting() const {
        std::vector<Waiting> out;
        for (auto&& part : {vc_govt.waiting(), tokens.waiting(), injection.waiting(), passport.waiting(),
                            verification.waiting()}) {
            out.insert(out.end(), part.begin(), part.end());
        }
        return out;
    }

    ledger::Ledger ledger;
    ContractConfig config;
    VcGovtContract vc_govt;
    TokenRegistry tokens;
    InjectionContract injection;
    PassportContract passport;
    VerificationContract verification;
};

}  // namespace vaxpass::contracts
