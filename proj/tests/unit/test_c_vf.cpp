#include <catch2/catch_amalgamated.hpp>

#include "support/fixture.hpp"

using namespace fixture;

namespace {

struct VpWorld : World {
    VpWorld() {
        setup();
        vp_holder(c1, 0);
    }
};

}  // namespace

TEST_CASE("verification happy path", "[verification]") {
    VpWorld w;
    auto vf = w.bal(w.vf), c = w.bal(w.c1);
    auto id = w.verify(w.vf, w.c1, Vf::Result);
    auto inst = *w.c().verification.instance(id);
    auto ts = inst.progression();
    for (std::size_t i = 1; i < ts.size(); ++i) CHECK(ts[i - 1] <= ts[i]);
    auto hist = w.c().verification.history(1);
    REQUIRE(hist.size() == 1);
    CHECK(hist[0].vf_addr == w.vf);
    CHECK(hist[0].result);
    CHECK(w.bal(w.vf) == vf);
    CHECK(w.bal(w.c1) == c);
    CHECK(w.c().ledger.open_escrows("verification/").empty());
}

TEST_CASE("verification opening guards", "[verification]") {
    World w;
    w.setup();
    w.inject(w.c1, w.vc, 0, Inj::Ack);
    auto& k = w.c().verification;
    CHECK(kind_of([&] { k.lock_money_by_vf(w.vf, w.c1, w.cfg.verification_deposit); }) == ErrorKind::GuardFailed);
    w.passport(w.c1, 0, Vp::Upload);
    CHECK(kind_of([&] { k.lock_money_by_vf(w.vf, w.c1, 1); }) == ErrorKind::GuardFailed);
    CHECK(kind_of([&] { k.lock_money_by_vf(w.c1, w.c1, w.cfg.verification_deposit); }) == ErrorKind::GuardFailed);
    k.lock_money_by_vf(w.vf, w.c1, w.cfg.verification_deposit);
    CHECK(kind_of([&] { k.lock_money_by_vf(w.vf, w.c1, w.cfg.verification_deposit); }) == ErrorKind::GuardFailed);
}

TEST_CASE("citizen lock", "[verification]") {
    VpWorld w;
    auto& k = w.c().verification;
    auto id = w.verify(w.vf, w.c1, Vf::LockVF);
    CHECK(kind_of([&] { k.lock_money_and_commit_rk(w.c2, id, crypto::hash("rk"), w.cfg.verification_deposit); }) ==
          ErrorKind::GuardFailed);
    SECTION("late") {
        w.tick(w.cfg.step_timeout + 1);
        CHECK(kind_of([&] {
                  k.lock_money_and_commit_rk(w.c1, id, crypto::hash("rk"), w.cfg.verification_deposit);
              }) == ErrorKind::WindowExpired);
    }
}

TEST_CASE("consent", "[verification]") {
    VpWorld w;
    auto& k = w.c().verification;
    auto id = w.verify(w.vf, w.c1, Vf::CommitRk);
    CHECK(kind_of([&] { k.provide_consent(w.c1, id, true); }) == ErrorKind::Unauthorized);
    SECTION("mismatch refunds both") {
        auto vf = w.bal(w.vf), c = w.bal(w.c1);
        k.provide_consent(w.vf, id, false);
        CHECK(w.bal(w.vf) == vf + w.cfg.verification_deposit);
        CHECK(w.bal(w.c1) == c + w.cfg.verification_deposit);
        CHECK(w.c().ledger.open_escrows("verification/").empty());
    }
    SECTION("grant before consent") {
        CHECK(kind_of([&] { k.grant_access_permission(w.c1, id); }) == ErrorKind::GuardFailed);
    }
}

TEST_CASE("grant, fetch and revoke", "[verification]") {
    VpWorld w;
    auto& k = w.c().verification;
    auto id = w.verify(w.vf, w.c1, Vf::Grant);
    CHECK(kind_of([&] { k.grant_access_permission(w.c1, id); }) == ErrorKind::GuardFailed);
    CHECK(k.has_access(1, w.vf));
    CHECK(kind_of([&] { k.fetch_vp_info(w.vf2, id); }) == ErrorKind::Unauthorized);

    SECTION("granted fetch returns the record") {
        auto rec = k.fetch_vp_info(w.vf, id);
        CHECK(rec.md_vp == w.md_for(1));
        CHECK(k.query_vp_record(w.vf, 1).md_vp == rec.md_vp);
        CHECK(k.query_vp_record(w.c1, 1).md_vp == rec.md_vp);
        CHECK(kind_of([&] { k.query_vp_record(w.vf2, 1); }) == ErrorKind::Unauthorized);
    }
    SECTION("revoked fetch fails") {
        k.revoke_access_permission(w.c1, w.vf);
        CHECK_FALSE(k.has_access(1, w.vf));
        CHECK(kind_of([&] { k.fetch_vp_info(w.vf, id); }) == ErrorKind::Unauthorized);
        CHECK(kind_of([&] { k.revoke_access_permission(w.c1, w.vf); }) == ErrorKind::GuardFailed);
    }
    CHECK(kind_of([&] { k.revoke_access_permission(w.c1, w.vf2); }) == ErrorKind::GuardFailed);
}

TEST_CASE("result recording", "[verification]") {
    VpWorld w;
    auto& k = w.c().verification;
    auto id = w.verify(w.vf, w.c1, Vf::Result, false);
    CHECK_FALSE(k.history(1).at(0).result);
    CHECK(kind_of([&] { k.verification_result(w.vf, id, true); }) == ErrorKind::GuardFailed);
    CHECK(k.history(1).size() == 1);
}

TEST_CASE("verification exits", "[verification]") {
    VpWorld w;
    auto& k = w.c().verification;
    SECTION("silent citizen after the VF locked") {
        auto id = w.verify(w.vf, w.c1, Vf::CommitRk);
        k.provide_consent(w.vf, id, true);
        w.tick(w.cfg.step_timeout + 1);
        CHECK(kind_of([&] { k.exit_verification(w.c1, id); }) == ErrorKind::Unauthorized);
        auto vf = w.bal(w.vf);
        k.exit_verification(w.vf, id);
        CHECK(w.bal(w.vf) == vf + 2 * w.cfg.verification_deposit);
    }
    SECTION("silent verifier after the grant") {
        auto id = w.verify(w.vf, w.c1, Vf::Grant);
        w.tick(w.cfg.step_timeout + 1);
        auto c = w.bal(w.c1);
        k.exit_verification(w.c1, id);
        CHECK(w.bal(w.c1) == c + 2 * w.cfg.verification_deposit);
    }
    CHECK(w.c().ledger.open_escrows("verification/").empty());
    CHECK(w.c().ledger.conserved());
}

TEST_CASE("query without a record", "[verification]") {
    World w;
    w.setup();
    CHECK(kind_of([&] { w.c().verification.query_vp_record(w.c1, 1); }) == ErrorKind::NotFound);
}
