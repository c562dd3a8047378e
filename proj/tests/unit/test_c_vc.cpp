#include <catch2/catch_amalgamated.hpp>

#include "support/fixture.hpp"

using namespace fixture;

TEST_CASE("injection happy path", "[injection]") {
    World w;
    w.setup();
    auto vc_before = w.bal(w.vc), c_before = w.bal(w.c1);
    auto cv = crypto::hash(w.vials[3]);
    CHECK(w.c().injection.vial_state(cv) == VialState::Unused);
    w.inject(w.c1, w.vc, 3, Inj::Ack);

    auto rec = *w.c().vc_govt.vc(w.vc);
    CHECK(rec.vials_in_stock == 7);
    CHECK(rec.money_earned == w.cfg.service_charge_per_vial);
    CHECK(w.c().injection.vial_state(cv) == VialState::Used);
    CHECK(w.c().tokens.citizen_at(w.c1)->vaccination_status);
    CHECK(w.bal(w.vc) == vc_before + w.cfg.service_charge_per_vial);
    // The citizen's deposit stays in the vault until the passport is issued.
    CHECK(w.bal(w.c1) == c_before - w.cfg.injection_deposit);
    CHECK(w.c().ledger.open_escrows("vault/").size() == 1);

    auto p = *w.c().injection.latest_for_token(1);
    auto ts = p.progression();
    for (std::size_t i = 1; i < ts.size(); ++i) CHECK(ts[i - 1] <= ts[i]);
    CHECK(ts.back() > 0);

    auto trans = w.c().injection.vial_transitions();
    REQUIRE(trans.size() == 2);
    CHECK(trans[0].to == VialState::Reserved);
    CHECK(trans[1].to == VialState::Used);
    CHECK(w.c().ledger.conserved());
}

TEST_CASE("commitment of the v4 proof", "[injection]") {
    World w;
    w.setup();
    w.inject(w.c1, w.vc, 3, Inj::CommitProof);
    auto h = [&](int i) { return crypto::hash(w.vials[static_cast<std::size_t>(i - 1)]); };
    auto h12 = crypto::hash_concat({h(1).view(), h(2).view()});
    auto h56 = crypto::hash_concat({h(5).view(), h(6).view()});
    auto h78 = crypto::hash_concat({h(7).view(), h(8).view()});
    auto h5678 = crypto::hash_concat({h56.view(), h78.view()});
    auto expected = crypto::hash_concat({h(3).view(), h12.view(), h5678.view()});
    CHECK(w.c().injection.current(w.c1)->commit_mt_proof == expected);
}

TEST_CASE("injection begin guards", "[injection]") {
    World w;
    w.setup();
    auto& k = w.c().injection;
    CHECK(kind_of([&] { k.begin_protocol(w.c1, 99); }) == ErrorKind::GuardFailed);
    CHECK(kind_of([&] { k.begin_protocol(w.vf, w.vc_id(w.vc)); }) == ErrorKind::Unauthorized);
    w.inject(w.c1, w.vc, 0, Inj::Ack);
    CHECK(kind_of([&] { k.begin_protocol(w.c1, w.vc_id(w.vc)); }) == ErrorKind::GuardFailed);
}

TEST_CASE("deposit order and amounts", "[injection]") {
    World w;
    w.setup();
    auto& k = w.c().injection;
    auto id = w.vc_id(w.vc);
    w.inject(w.c1, w.vc, 0, Inj::Begin);
    CHECK(kind_of([&] { k.lock_money_by_c(w.c1, id, w.cfg.injection_deposit); }) == ErrorKind::GuardFailed);
    CHECK(kind_of([&] { k.lock_money_by_vc(w.vc, w.c1, 5); }) == ErrorKind::GuardFailed);
    CHECK(kind_of([&] { k.lock_money_by_vc(w.c1, w.c1, w.cfg.injection_deposit); }) == ErrorKind::Unauthorized);
    k.lock_money_by_vc(w.vc, w.c1, w.cfg.injection_deposit);
    w.tick();
    CHECK(kind_of([&] { k.lock_money_by_c(w.c1, id, 5); }) == ErrorKind::GuardFailed);
    k.lock_money_by_c(w.c1, id, w.cfg.injection_deposit);
    CHECK(w.c().ledger.open_escrows("injection/").size() == 1);
    CHECK(w.c().ledger.open_escrows("vault/").size() == 1);
}

TEST_CASE("proof commitment and consent1", "[injection]") {
    World w;
    w.setup();
    auto& k = w.c().injection;
    auto id = w.vc_id(w.vc);
    w.inject(w.c1, w.vc, 0, Inj::CommitProof);
    CHECK(kind_of([&] { k.commit_mt_proof(w.vc, w.c1, crypto::hash("again")); }) == ErrorKind::GuardFailed);

    SECTION("dissent refunds both") {
        auto c = w.bal(w.c1), v = w.bal(w.vc);
        k.provide_consent1(w.c1, id, false);
        CHECK(w.bal(w.c1) == c + w.cfg.injection_deposit);
        CHECK(w.bal(w.vc) == v + w.cfg.injection_deposit);
        CHECK_FALSE(k.current(w.c1)->under_process);
        CHECK(k.waiting().empty());
    }
    SECTION("late") {
        w.tick(w.cfg.step_timeout + 1);
        CHECK(kind_of([&] { k.provide_consent1(w.c1, id, true); }) == ErrorKind::WindowExpired);
    }
    SECTION("vial commit needs consent1") {
        CHECK(kind_of([&] { k.commit_vial_id(w.vc, w.c1, crypto::hash(w.vials[0])); }) == ErrorKind::GuardFailed);
    }
}

TEST_CASE("a vial cannot be reserved twice", "[injection]") {
    World w;
    w.setup();
    auto& k = w.c().injection;
    w.inject(w.c1, w.vc, 5, Inj::CommitVid);
    CHECK(k.vial_state(crypto::hash(w.vials[5])) == VialState::Reserved);
    w.inject(w.c2, w.vc, 5, Inj::Consent1);
    CHECK(kind_of([&] { k.commit_vial_id(w.vc, w.c2, crypto::hash(w.vials[5])); }) == ErrorKind::GuardFailed);
}

TEST_CASE("a used vial never re-enters", "[injection]") {
    World w;
    w.setup();
    w.inject(w.c1, w.vc, 5, Inj::Ack);
    w.inject(w.c2, w.vc, 5, Inj::Consent1);
    CHECK(kind_of([&] { w.c().injection.commit_vial_id(w.vc, w.c2, crypto::hash(w.vials[5])); }) ==
          ErrorKind::GuardFailed);
}

TEST_CASE("consent2 dissent frees the vial", "[injection]") {
    World w;
    w.setup();
    auto& k = w.c().injection;
    w.inject(w.c1, w.vc, 5, Inj::CommitVid);
    k.provide_consent2(w.c1, w.vc_id(w.vc), false);
    CHECK(k.vial_state(crypto::hash(w.vials[5])) == VialState::Unused);
    CHECK(kind_of([&] { k.provide_consent2(w.c1, w.vc_id(w.vc), true); }) == ErrorKind::GuardFailed);
    CHECK(w.c().ledger.open_escrows("injection/").empty());
    CHECK(w.c().ledger.open_escrows("vault/").empty());
}

TEST_CASE("consent3 ordering", "[injection]") {
    World w;
    w.setup();
    auto& k = w.c().injection;
    w.inject(w.c1, w.vc, 1, Inj::CommitVid);
    CHECK(kind_of([&] { k.provide_consent3(w.c1, w.vc_id(w.vc), true); }) == ErrorKind::GuardFailed);
    CHECK(kind_of([&] { k.register_vax_timestamp(w.vc, w.c1); }) == ErrorKind::GuardFailed);
}

TEST_CASE("dispute adjudication", "[injection]") {
    World w;
    w.setup();
    auto& k = w.c().injection;
    auto id = w.vc_id(w.vc);

    SECTION("valid reveal penalizes the citizen") {
        w.inject(w.c1, w.vc, 2, Inj::Consent2);
        k.provide_consent3(w.c1, id, false);
        w.tick();
        auto c = w.bal(w.c1), v = w.bal(w.vc);
        CHECK(k.adjudicate_dispute(w.vc, w.c1, w.tree.prove(w.vials[2])) == Verdict::CitizenFaulty);
        CHECK(w.bal(w.vc) == v + 2 * w.cfg.injection_deposit);
        CHECK(w.bal(w.c1) == c);
        CHECK(k.vial_state(crypto::hash(w.vials[2])) == VialState::Unused);
    }
    SECTION("proof against the wrong root penalizes the VC") {
        auto foreign = crypto::MerkleTree::build({w.vials[2], to_bytes("x"), to_bytes("y")});
        w.inject(w.c1, w.vc, 2, Inj::Consent2, &foreign);
        k.provide_consent3(w.c1, id, false);
        w.tick();
        auto c = w.bal(w.c1), v = w.bal(w.vc);
        CHECK(k.adjudicate_dispute(w.vc, w.c1, foreign.prove(w.vials[2])) == Verdict::VcFaulty);
        CHECK(w.bal(w.c1) == c + 2 * w.cfg.injection_deposit);
        CHECK(w.bal(w.vc) == v);
    }
    SECTION("no reveal before the deadline lets the citizen exit") {
        w.inject(w.c1, w.vc, 2, Inj::Consent2);
        k.provide_consent3(w.c1, id, false);
        CHECK(kind_of([&] { k.exit_protocol(w.c1, w.c1); }) == ErrorKind::GuardFailed);
        w.tick(w.cfg.dispute_window + 1);
        CHECK(kind_of([&] { k.adjudicate_dispute(w.vc, w.c1, w.tree.prove(w.vials[2])); }) ==
              ErrorKind::WindowExpired);
        auto c = w.bal(w.c1);
        k.exit_protocol(w.c1, w.c1);
        CHECK(w.bal(w.c1) == c + 2 * w.cfg.injection_deposit);
    }
    CHECK(w.c().ledger.open_escrows("injection/").empty());
    CHECK(w.c().ledger.open_escrows("vault/").empty());
    CHECK(w.c().ledger.conserved());
}

TEST_CASE("vaccination timestamp and acknowledgement", "[injection]") {
    World w;
    w.setup();
    auto& k = w.c().injection;
    auto id = w.vc_id(w.vc);
    w.inject(w.c1, w.vc, 0, Inj::VaxTimestamp);
    CHECK(kind_of([&] { k.register_vax_timestamp(w.vc, w.c1); }) == ErrorKind::GuardFailed);

    SECTION("negative acknowledgement freezes the instance") {
        k.acknowledge_vaccination(w.c1, id, false);
        auto p = *k.latest_for_token(1);
        CHECK(p.frozen);
        CHECK_FALSE(w.c().tokens.citizen_at(w.c1)->vaccination_status);
    }
    SECTION("silent citizen: the VC claims the outcome") {
        w.tick(w.cfg.step_timeout + 1);
        CHECK(kind_of([&] { k.acknowledge_vaccination(w.c1, id, true); }) == ErrorKind::WindowExpired);
        auto v = w.bal(w.vc);
        k.exit_protocol(w.vc, w.c1);
        CHECK(w.bal(w.vc) == v + 2 * w.cfg.injection_deposit + w.cfg.service_charge_per_vial);
        CHECK(k.vial_state(crypto::hash(w.vials[0])) == VialState::Used);
        CHECK(w.c().tokens.citizen_at(w.c1)->vaccination_status);
        CHECK(w.c().vc_govt.vc(w.vc)->vials_in_stock == 7);
    }
    CHECK(w.c().ledger.conserved());
}

TEST_CASE("silent VC forfeits its deposit", "[injection]") {
    World w;
    w.setup();
    auto& k = w.c().injection;
    w.inject(w.c1, w.vc, 0, Inj::Consent1);
    w.tick(w.cfg.step_timeout + 1);
    CHECK(kind_of([&] { k.exit_protocol(w.vc, w.c1); }) == ErrorKind::Unauthorized);
    auto c = w.bal(w.c1);
    k.exit_protocol(w.c1, w.c1);
    CHECK(w.bal(w.c1) == c + 2 * w.cfg.injection_deposit);
    auto ws = k.waiting();
    CHECK(ws.empty());
}

TEST_CASE("waiting states carry the expected party", "[injection]") {
    World w;
    w.setup();
    w.inject(w.c1, w.vc, 0, Inj::Begin);
    auto ws = w.c().injection.waiting();
    REQUIRE(ws.size() == 1);
    CHECK(ws[0].state == "await_lock_money_by_vc");
    CHECK(ws[0].party == w.vc);
    CHECK_FALSE(ws[0].stake_at_risk);
    w.inject(w.c2, w.vc, 1, Inj::Consent3);
    bool found = false;
    for (const auto& x : w.c().injection.waiting()) {
        if (x.state == "await_register_vax_timestamp") {
            found = true;
            CHECK(x.party == w.vc);
            CHECK(x.stake_at_risk);
        }
    }
    CHECK(found);
}
