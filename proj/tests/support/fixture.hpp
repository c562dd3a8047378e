#pragma once

// Drives a Chain directly through the contract API so tests can stop an
// instance at any step.

#include <memory>
#include <string>
#include <vector>

#include "vaxpass/contracts/chain.hpp"
#include "vaxpass/crypto/drbg.hpp"
#include "vaxpass/crypto/merkle.hpp"
#include "vaxpass/crypto/signature.hpp"

namespace fixture {

using namespace vaxpass;
using namespace vaxpass::contracts;
using crypto::Digest;

inline constexpr Amount kGenesis = 1'000'000;

enum class Inj {
    Begin,
    LockVC,
    LockC,
    CommitProof,
    Consent1,
    CommitVid,
    Consent2,
    Consent3,
    VaxTimestamp,
    Ack
};

enum class Vp { Initiate, LockGovt, Proof, Consent1, Consent2, Upload };

enum class Vf { LockVF, CommitRk, Consent, Grant, Fetch, Result };

struct World {
    crypto::Drbg rng{7, "fixture"};
    crypto::SigningKeyPair govt_keys;
    ContractConfig cfg;
    std::unique_ptr<Chain> chain;
    PartyAddress govt, vc, vc2, c1, c2, vf, vf2;
    std::vector<Bytes> vials;
    crypto::MerkleTree tree = crypto::MerkleTree::build({to_bytes("placeholder")});

    World() {
        govt_keys = crypto::signing_keygen(rng);
        govt = ledger::PartyAddress::from_public_key(govt_keys.pk);
        cfg.govt = govt;
        cfg.govt_signing_pk = govt_keys.pk;
        chain = std::make_unique<Chain>(cfg);
        for (auto* p : {&vc, &vc2, &c1, &c2, &vf, &vf2}) {
            *p = ledger::PartyAddress::from_public_key(crypto::signing_keygen(rng).pk);
        }
        for (const auto& p : {govt, vc, vc2, c1, c2, vf, vf2}) chain->ledger.mint(p, kGenesis);
        for (int i = 1; i <= 8; ++i) vials.push_back(to_bytes("vial-" + std::to_string(i)));
        tree = crypto::MerkleTree::build(vials);
        chain->tick();
    }

    Chain& c() { return *chain; }
    void tick(Ticks n = 1) { chain->ledger.advance_time(static_cast<std::int64_t>(n)); }
    Ticks now() const { return chain->ledger.now(); }

    std::uint64_t register_vc(const PartyAddress& who) {
        c().vc_govt.timestamp_reg_appl(who);
        tick();
        c().vc_govt.reg_appl_hash(govt, who, crypto::hash(who.hex()));
        tick();
        auto id = c().vc_govt.decide_on_acceptance_hash(who, true);
        tick();
        auto vc_id = c().vc_govt.decide_on_acceptance_reg_appl(govt, *id, true);
        tick();
        return *vc_id;
    }

    std::uint64_t stock(const PartyAddress& who, const crypto::MerkleTree& t) {
        c().vc_govt.refill_stock_appl(who);
        tick();
        c().vc_govt.commit_vaccine_set(govt, who, t.size(), t.root(),
                                       cfg.service_charge_per_vial * static_cast<Amount>(t.size()));
        tick();
        auto id = c().vc_govt.decide_on_acceptance_vaccine_set(who, true);
        tick();
        return *id;
    }

    std::uint64_t token(const PartyAddress& who, const std::string& pii) {
        auto appl = c().tokens.appl_for_token_id(who, crypto::hash(pii));
        tick();
        auto t = c().tokens.verify_appl(govt, appl, true);
        tick();
        return *t;
    }

    /// Registers vc with the 8-vial stock and tokens c1 and c2.
    void setup() {
        register_vc(vc);
        stock(vc, tree);
        token(c1, "Ada‖1 Main St‖1990-01-01‖C-001");
        token(c2, "Bo‖2 High St‖1985-05-05‖C-002");
    }

    std::uint64_t vc_id(const PartyAddress& who) { return c().vc_govt.vc(who)->vc_id; }

    /// Runs the injection protocol for citizen up to and including `last`.
    void inject(const PartyAddress& citizen, const PartyAddress& center, std::size_t vial_index, Inj last,
                const crypto::MerkleTree* dispatched = nullptr) {
        auto id = vc_id(center);
        auto proof = (dispatched ? *dispatched : tree).prove(vials[vial_index]);
        auto step = [&](Inj s, auto&& fn) {
            if (static_cast<int>(s) > static_cast<int>(last)) return false;
            fn();
            tick();
            return true;
        };
        step(Inj::Begin, [&] { c().injection.begin_protocol(citizen, id); }) &&
            step(Inj::LockVC, [&] { c().injection.lock_money_by_vc(center, citizen, cfg.injection_deposit); }) &&
            step(Inj::LockC, [&] { c().injection.lock_money_by_c(citizen, id, cfg.injection_deposit); }) &&
            step(Inj::CommitProof, [&] { c().injection.commit_mt_proof(center, citizen, proof.commitment()); }) &&
            step(Inj::Consent1, [&] { c().injection.provide_consent1(citizen, id, true); }) &&
            step(Inj::CommitVid, [&] { c().injection.commit_vial_id(center, citizen, crypto::hash(vials[vial_index])); }) &&
            step(Inj::Consent2, [&] { c().injection.provide_consent2(citizen, id, true); }) &&
            step(Inj::Consent3, [&] { c().injection.provide_consent3(citizen, id, true); }) &&
            step(Inj::VaxTimestamp, [&] { c().injection.register_vax_timestamp(center, citizen); }) &&
            step(Inj::Ack, [&] { c().injection.acknowledge_vaccination(citizen, id, true); });
    }

    Digest md_for(std::uint64_t token) { return crypto::hash("vp-document-" + std::to_string(token)); }

    void passport(const PartyAddress& citizen, std::size_t vial_index, Vp last,
                  const crypto::MerkleTree* dispatched = nullptr) {
        auto proof = (dispatched ? *dispatched : tree).prove(vials[vial_index]);
        auto token = *c().tokens.token_of(citizen);
        auto step = [&](Vp s, auto&& fn) {
            if (static_cast<int>(s) > static_cast<int>(last)) return false;
            fn();
            tick();
            return true;
        };
        step(Vp::Initiate, [&] { c().passport.initiate_vp_appl_and_lock_money(citizen, cfg.vp_deposit); }) &&
            step(Vp::LockGovt, [&] { c().passport.lock_money_by_govt(govt, citizen, cfg.vp_deposit); }) &&
            step(Vp::Proof, [&] { c().passport.send_vaccination_proof(citizen, vials[vial_index], proof.commitment()); }) &&
            step(Vp::Consent1, [&] { c().passport.send_consent1(govt, citizen, true); }) &&
            step(Vp::Consent2, [&] { c().passport.send_consent2(govt, citizen, true); }) &&
            step(Vp::Upload, [&] {
                auto md = md_for(token);
                c().passport.upload_vp_info_and_get_payment(govt, citizen, md, crypto::sign(govt_keys.sk, md.view()),
                                                            cas::ContentID{crypto::hash("blob-" + md.hex())});
            });
    }

    /// Returns the verification protocol id.
    std::uint64_t verify(const PartyAddress& verifier, const PartyAddress& citizen, Vf last, bool result = true) {
        std::uint64_t id = 0;
        auto step = [&](Vf s, auto&& fn) {
            if (static_cast<int>(s) > static_cast<int>(last)) return false;
            fn();
            tick();
            return true;
        };
        step(Vf::LockVF, [&] { id = c().verification.lock_money_by_vf(verifier, citizen, cfg.verification_deposit); }) &&
            step(Vf::CommitRk, [&] {
                c().verification.lock_money_and_commit_rk(citizen, id, crypto::hash("rk"), cfg.verification_deposit);
            }) &&
            step(Vf::Consent, [&] { c().verification.provide_consent(verifier, id, true); }) &&
            step(Vf::Grant, [&] { c().verification.grant_access_permission(citizen, id); }) &&
            step(Vf::Fetch, [&] { c().verification.fetch_vp_info(verifier, id); }) &&
            step(Vf::Result, [&] { c().verification.verification_result(verifier, id, result); });
        return id;
    }

    /// Fully vaccinated citizen holding a VP.
    void vp_holder(const PartyAddress& citizen, std::size_t vial_index) {
        inject(citizen, vc, vial_index, Inj::Ack);
        passport(citizen, vial_index, Vp::Upload);
    }

    Amount bal(const PartyAddress& p) const { return chain->ledger.balance(p); }
};

template <typename F>
ErrorKind kind_of(F&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return static_cast<ErrorKind>(255);
}

}  // namespace fixture
