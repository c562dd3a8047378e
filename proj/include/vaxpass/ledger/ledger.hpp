#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "vaxpass/core/bytes.hpp"
#include "vaxpass/crypto/digest.hpp"

namespace vaxpass::ledger {

using Amount = std::int64_t;
using Ticks = std::uint64_t;

/// 32-byte account identifier: the Keccak-256 digest of a party's signing key.
struct PartyAddress {
    std::array<std::uint8_t, 32> bytes{};

    static PartyAddress from_public_key(ByteView pk);
    static PartyAddress from_hex(std::string_view hex);

    std::string hex() const { return to_hex(bytes); }
    /// First 8 hex digits, for human-facing output.
    std::string short_hex() const { return hex().substr(0, 8); }

    auto operator<=>(const PartyAddress&) const = default;
};

struct EscrowId {
    std::uint64_t value = 0;
    auto operator<=>(const EscrowId&) const = default;
};

struct Escrow {
    PartyAddress holder;
    Amount amount = 0;
    std::string purpose;
};

struct Event {
    Ticks time = 0;
    std::string actor;
    std::string op;
    std::string payload;
    crypto::Digest digest;  // hash(payload)
};

// Simulated chain state. Mutations are applied one at a time in call order;
// const accessors may run concurrently with each other between mutations.
class Ledger {
public:
    Ledger() = default;
    Ledger(const Ledger&) = delete;
    Ledger& operator=(const Ledger&) = delete;

    /// Genesis endowment. Only allowed while the clock is still at 0.
    void mint(const PartyAddress& party, Amount amount);

    Ticks now() const;
    /// Throws InvalidArgument unless delta > 0.
    Ticks advance_time(std::int64_t delta);

    EscrowId lock_funds(const PartyAddress& party, Amount amount, std::string purpose);
    void release_funds(EscrowId escrow, const PartyAddress& to);
    void transfer(const PartyAddress& from, const PartyAddress& to, Amount amount);

    /// Appends a contract-level event at the current time.
    void record(std::string actor, std::string op, std::string payload);

    Amount balance(const PartyAddress& party) const;
    std::optional<Escrow> escrow(EscrowId id) const;
    bool escrow_open(EscrowId id) const { return escrow(id).has_value(); }
    /// Unreleased escrows whose purpose tag starts with prefix.
    std::vector<std::pair<EscrowId, Escrow>> open_escrows(std::string_view prefix = {}) const;

    Amount total_balances() const;
    Amount total_escrowed() const;
    Amount genesis_total() const;
    /// Balances plus escrows equal the genesis supply, read under one lock.
    bool conserved() const;

    std::map<PartyAddress, Amount> balances() const;
    std::vector<Event> events() const;
    std::size_t event_count() const;
    /// One line per event: "<time> <actor> <op> <payload digest hex>".
    std::string export_events() const;

private:
    void log(std::string actor, std::string op, std::string payload);

    mutable std::shared_mutex mutex_;
    Ticks now_ = 0;
    Amount genesis_ = 0;
    std::map<PartyAddress, Amount> balances_;
    std::map<EscrowId, Escrow> escrows_;
    std::uint64_t next_escrow_ = 1;
    std::vector<Event> events_;
};

}  // namespace vaxpass::ledger

template <>
struct std::hash<vaxpass::ledger::PartyAddress> {
    std::size_t operator()(const vaxpass::ledger::PartyAddress& a) const noexcept {
        std::size_t h = 0;
        for (int i = 0; i < 8; ++i) h = (h << 8) | a.bytes[i];
        return h;
    }
};
