#include "vaxpass/ledger/ledger.hpp"

#include <mutex>
#include <sstream>

#include "vaxpass/core/errors.hpp"

namespace vaxpass::ledger {

PartyAddress PartyAddress::from_public_key(ByteView pk) {
    return {crypto::hash(pk).bytes};
}

PartyAddress PartyAddress::from_hex(std::string_view hex) {
    return {crypto::Digest::from_hex(hex).bytes};
}

void Ledger::mint(const PartyAddress& party, Amount amount) {
    std::unique_lock lock(mutex_);
    require(now_ == 0, ErrorKind::InvalidArgument, "mint is only allowed at genesis");
    require(amount >= 0, ErrorKind::InvalidArgument, "mint amount must be non-negative");
    balances_[party] += amount;
    genesis_ += amount;
    log(party.hex(), "mint", "amount=" + std::to_string(amount));
}

Ticks Ledger::now() const {
    std::shared_lock lock(mutex_);
    return now_;
}

Ticks Ledger::advance_time(std::int64_t delta) {
    std::unique_lock lock(mutex_);
    require(delta > 0, ErrorKind::InvalidArgument, "time can only move forward");
    now_ += static_cast<Ticks>(delta);
    return now_;
}

EscrowId Ledger::lock_funds(const PartyAddress& party, Amount amount, std::string purpose) {
    std::unique_lock lock(mutex_);
    require(amount > 0, ErrorKind::InvalidArgument, "escrow amount must be positive");
    auto& bal = balances_[party];
    require(bal >= amount, ErrorKind::InsufficientFunds,
            "balance " + std::to_string(bal) + " cannot cover " + std::to_string(amount));
    bal -= amount;
    EscrowId id{next_escrow_++};
    log(party.hex(), "lock",
        "escrow=" + std::to_string(id.value) + " amount=" + std::to_string(amount) + " purpose=" + purpose);
    escrows_.emplace(id, Escrow{party, amount, std::move(purpose)});
    return id;
}

void Ledger::release_funds(EscrowId escrow, const PartyAddress& to) {
    std::unique_lock lock(mutex_);
    auto it = escrows_.find(escrow);
    if (it == escrows_.end()) fail(ErrorKind::EscrowNotFound, "escrow " + std::to_string(escrow.value));
    balances_[to] += it->second.amount;
    log(to.hex(), "release",
        "escrow=" + std::to_string(escrow.value) + " amount=" + std::to_string(it->second.amount) +
            " holder=" + it->second.holder.hex());
    escrows_.erase(it);
}

void Ledger::transfer(const PartyAddress& from, const PartyAddress& to, Amount amount) {
    std::unique_lock lock(mutex_);
    require(amount >= 0, ErrorKind::InvalidArgument, "transfer amount must be non-negative");
    require(balances_[from] >= amount, ErrorKind::InsufficientFunds, "transfer exceeds balance");
    balances_[from] -= amount;
    balances_[to] += amount;
    log(from.hex(), "transfer", "to=" + to.hex() + " amount=" + std::to_string(amount));
}

void Ledger::record(std::string actor, std::string op, std::string payload) {
    std::unique_lock lock(mutex_);
    log(std::move(actor), std::move(op), std::move(payload));
}

void Ledger::log(std::string actor, std::string op, std::string payload) {
    auto digest = crypto::hash(std::string_view(payload));
    events_.push_back(Event{now_, std::move(actor), std::move(op), std::move(payload), digest});
}

Amount Ledger::balance(const PartyAddress& party) const {
    std::shared_lock lock(mutex_);
    auto it = balances_.find(party);
    return it == balances_.end() ? 0 : it->second;
}

std::optional<Escrow> Ledger::escrow(EscrowId id) const {
    std::shared_lock lock(mutex_);
    auto it = escrows_.find(id);
    if (it == escrows_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::pair<EscrowId, Escrow>> Ledger::open_escrows(std::string_view prefix) const {
    std::shared_lock lock(mutex_);
    std::vector<std::pair<EscrowId, Escrow>> out;
    for (const auto& [id, e] : escrows_) {
        if (e.purpose.starts_with(prefix)) out.emplace_back(id, e);
    }
    return out;
}

Amount Ledger::total_balances() const {
    std::shared_lock lock(mutex_);
    Amount sum = 0;
    for (const auto& [_, v] : balances_) sum += v;
    return sum;
}

Amount Ledger::total_escrowed() const {
    std::shared_lock lock(mutex_);
    Amount sum = 0;
    for (const auto& [_, e] : escrows_) sum += e.amount;
    return sum;
}

bool Ledger::conserved() const {
    std::shared_lock lock(mutex_);
    Amount sum = 0;
    for (const auto& [_, b] : balances_) sum += b;
    for (const auto& [_, e] : escrows_) sum += e.amount;
    return sum == genesis_;
}

Amount Ledger::genesis_total() const {
    std::shared_lock lock(mutex_);
    return genesis_;
}

std::map<PartyAddress, Amount> Ledger::balances() const {
    std::shared_lock lock(mutex_);
    return balances_;
}

std::vector<Event> Ledger::events() const {
    std::shared_lock lock(mutex_);
    return events_;
}

std::size_t Ledger::event_count() const {
    std::shared_lock lock(mutex_);
    return events_.size();
}

std::string Ledger::export_events() const {
    std::shared_lock lock(mutex_);
    std::ostringstream out;
    for (const auto& e : events_) out << e.time << ' ' << e.actor << ' ' << e.op << ' ' << e.digest.hex() << '\n';
    return out.str();
}

}  // namespace vaxpass::ledger
