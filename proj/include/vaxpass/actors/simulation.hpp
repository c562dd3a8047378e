#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vaxpass/actors/actor.hpp"
#include "vaxpass/actors/vp_document.hpp"
#include "vaxpass/cas/content_store.hpp"
#include "vaxpass/contracts/chain.hpp"
#include "vaxpass/crypto/drbg.hpp"

namespace vaxpass::actors {

struct SimConfig {
    std::uint64_t seed = 1;
    contracts::Ticks step_timeout = 100;
    contracts::Ticks dispute_window = 50;
    contracts::Amount deposit = 100;
    contracts::Amount service_charge_per_vial = 10;
    contracts::Amount genesis = 1'000'000;
    std::string vaccine_name = "Comirnaty";
    std::string target_disease = "COVID-19";
};

/// One contract call (or refusal to call) as seen by the driver.
struct StepRecord {
    std::size_t index = 0;
    contracts::Ticks time = 0;
    std::string actor;
    std::string op;
    std::string status;  // "ok", "silent", or an error kind
    std::string detail;
};

/// Actors plus the chain and content store they share. Each flow walks one
/// protocol end to end; every contract call lands in its own tick and is
/// reported through on_step.
class Simulation {
public:
    explicit Simulation(SimConfig cfg);
    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    /// The first Govt added becomes the chain's government.
    Actor& add_actor(std::string name, Role role, Behavior behavior = {}, std::optional<Pii> pii = std::nullopt);
    Actor& actor(std::string_view name);
    Actor* find(const PartyAddress& addr);
    const std::vector<std::unique_ptr<Actor>>& actors() const { return actors_; }
    Actor& govt();

    contracts::Chain& chain() { return *chain_; }
    const contracts::Chain& chain() const { return *chain_; }
    cas::ContentStore& store() { return store_; }
    const SimConfig& config() const { return cfg_; }

    // Protocol flows. Each returns true when the protocol reached its normal
    // end; false when an actor stayed silent, refused, or a call failed.
    bool register_vc(Actor& vc);
    bool dispatch_stock(Actor& vc, std::size_t vials);
    bool obtain_token(Actor& citizen);
    bool administer_dose(Actor& vc, Actor& citizen);
    bool obtain_vp(Actor& citizen);
    /// Returns the recorded verification result, or nullopt if none was recorded.
    std::optional<bool> verify_vp(Actor& verifier, Actor& citizen);

    /// Every expired waiting state is closed by its counterparty. Returns the
    /// number of exits performed.
    std::size_t claim_exits();
    /// Returns unspent service charges to the government.
    contracts::Amount sweep();
    void advance(contracts::Ticks ticks);

    std::function<void(const StepRecord&)> on_step;
    const std::vector<StepRecord>& transcript() const { return transcript_; }
    /// Decrypts a stored passport with the citizen's own key.
    VPDocument read_own_vp(const Actor& citizen);

private:
    template <typename F>
    bool call(Actor& who, const std::string& op, F&& fn);
    void note(Actor& who, const std::string& op, std::string status, std::string detail);

    void send(Actor& from, Actor& to, MessageKind kind, Bytes payload);
    std::optional<OffchainMessage> receive(Actor& to, MessageKind kind);

    SimConfig cfg_;
    crypto::Drbg rng_;
    std::vector<std::unique_ptr<Actor>> actors_;
    std::unique_ptr<contracts::Chain> chain_;
    cas::ContentStore store_;
    std::vector<StepRecord> transcript_;
    std::size_t stock_counter_ = 0;
};

}  // namespace vaxpass::actors
