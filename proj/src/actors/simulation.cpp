#include "vaxpass/actors/simulation.hpp"

#include <algorithm>
#include <sstream>

#include "vaxpass/core/errors.hpp"

namespace vaxpass::actors {

using contracts::Amount;
using contracts::Ticks;
using crypto::Digest;
using crypto::MerkleProof;
using crypto::MerkleTree;

namespace {

Bytes join_lines(const std::vector<Bytes>& items) {
    Bytes out;
    for (const auto& v : items) {
        if (!out.empty()) out.push_back('\n');
        append(out, v);
    }
    return out;
}

std::vector<Bytes> split_lines(ByteView b) {
    std::vector<Bytes> out(1);
    for (auto c : b) {
        if (c == '\n') {
            out.emplace_back();
        } else {
            out.back().push_back(c);
        }
    }
    return out;
}

std::string as_string(ByteView b) { return {b.begin(), b.end()}; }

}  // namespace

Simulation::Simulation(SimConfig cfg) : cfg_(std::move(cfg)), rng_(cfg_.seed, "simulation") {}

Actor& Simulation::add_actor(std::string name, Role role, Behavior behavior, std::optional<Pii> pii) {
    require(!name.empty(), ErrorKind::InvalidArgument, "actor name is empty");
    for (const auto& a : actors_) {
        require(a->name != name, ErrorKind::InvalidArgument, "duplicate actor '" + name + "'");
    }
    require(role == Role::Govt || chain_, ErrorKind::InvalidArgument, "the government must be declared first");
    require(role != Role::Citizen || pii, ErrorKind::InvalidArgument, "citizen '" + name + "' has no PII");

    auto a = std::make_unique<Actor>();
    auto keys = rng_.fork("actor/" + name);
    a->name = std::move(name);
    a->role = role;
    a->signing = crypto::signing_keygen(keys);
    a->encryption = crypto::pre_keygen(keys);
    a->address = PartyAddress::from_public_key(a->signing.pk);
    a->behavior = std::move(behavior);
    a->pii = std::move(pii);

    if (!chain_) {
        require(role == Role::Govt, ErrorKind::InvalidArgument, "the government must be declared first");
        contracts::ContractConfig cc;
        cc.govt = a->address;
        cc.govt_signing_pk = a->signing.pk;
        cc.step_timeout = cfg_.step_timeout;
        cc.dispute_window = cfg_.dispute_window;
        cc.service_charge_per_vial = cfg_.service_charge_per_vial;
        cc.injection_deposit = cc.vp_deposit = cc.verification_deposit = cfg_.deposit;
        chain_ = std::make_unique<contracts::Chain>(cc);
    } else {
        require(role != Role::Govt, ErrorKind::InvalidArgument, "only one government is supported");
    }
    chain_->ledger.mint(a->address, cfg_.genesis);
    actors_.push_back(std::move(a));
    return *actors_.back();
}

Actor& Simulation::actor(std::string_view name) {
    for (auto& a : actors_) {
        if (a->name == name) return *a;
    }
    fail(ErrorKind::NotFound, "no actor named '" + std::string(name) + "'");
}

Actor* Simulation::find(const PartyAddress& addr) {
    for (auto& a : actors_) {
        if (a->address == addr) return a.get();
    }
    return nullptr;
}

Actor& Simulation::govt() {
    require(!actors_.empty(), ErrorKind::NotFound, "no government declared");
    return *actors_.front();
}

void Simulation::advance(Ticks ticks) {
    if (ticks > 0) chain_->ledger.advance_time(static_cast<std::int64_t>(ticks));
}

void Simulation::note(Actor& who, const std::string& op, std::string status, std::string detail) {
    StepRecord r{transcript_.size(), chain_->ledger.now(), who.name, op, std::move(status), std::move(detail)};
    transcript_.push_back(r);
    if (on_step) on_step(r);
}

template <typename F>
bool Simulation::call(Actor& who, const std::string& op, F&& fn) {
    if (who.behavior.silent(op)) {
        note(who, op, "silent", "");
        return false;
    }
    chain_->tick();
    std::string detail;
    try {
        detail = fn();
    } catch (const Error& e) {
        note(who, op, std::string(to_string(e.kind())), e.what());
        return false;
    }
    note(who, op, "ok", std::move(detail));
    return true;
}

void Simulation::send(Actor& from, Actor& to, MessageKind kind, Bytes payload) {
    to.inbox.push_back(OffchainMessage{from.address, to.address, kind, std::move(payload)});
}

std::optional<OffchainMessage> Simulation::receive(Actor& to, MessageKind kind) {
    auto it = std::find_if(to.inbox.begin(), to.inbox.end(), [&](const auto& m) { return m.kind == kind; });
    if (it == to.inbox.end()) return std::nullopt;
    auto m = std::move(*it);
    to.inbox.erase(it);
    return m;
}

bool Simulation::register_vc(Actor& vc) {
    auto& g = govt();
    auto& k = chain_->vc_govt;
    std::string application = "vc-registration|" + vc.name + "|" + vc.address.hex();

    if (!call(vc, "timestamp_reg_appl", [&] { return "reg_appl=" + std::to_string(k.timestamp_reg_appl(vc.address)); }))
        return false;
    send(vc, g, MessageKind::Application, to_bytes(application));

    auto msg = receive(g, MessageKind::Application);
    if (!msg) return false;
    if (!call(g, "reg_appl_hash", [&] {
            k.reg_appl_hash(g.address, vc.address, crypto::hash(msg->payload));
            return std::string();
        }))
        return false;

    bool match = k.current_registration(vc.address)->hash == crypto::hash(application);
    std::optional<std::uint64_t> reg_id;
    if (!call(vc, "decide_on_acceptance_hash", [&] {
            reg_id = k.decide_on_acceptance_hash(vc.address, match);
            return "consent=" + std::string(match ? "true" : "false");
        }))
        return false;
    if (!reg_id) return false;

    std::optional<std::uint64_t> vc_id;
    if (!call(g, "decide_on_acceptance_reg_appl", [&] {
            vc_id = k.decide_on_acceptance_reg_appl(g.address, *reg_id, true);
            return vc_id ? "vc_id=" + std::to_string(*vc_id) : std::string("rejected");
        }))
        return false;
    return vc_id.has_value();
}

bool Simulation::dispatch_stock(Actor& vc, std::size_t count) {
    auto& g = govt();
    auto& k = chain_->vc_govt;
    require(count > 0, ErrorKind::InvalidArgument, "a stock needs at least one vial");

    if (!call(vc, "refill_stock_appl", [&] { return "refill=" + std::to_string(k.refill_stock_appl(vc.address)); }))
        return false;

    ++stock_counter_;
    std::vector<Bytes> vials;
    for (std::size_t i = 0; i < count; ++i) {
        vials.push_back(to_bytes("VX" + std::to_string(stock_counter_) + "-" + to_hex(rng_.bytes(6))));
    }
    auto tree = MerkleTree::build(vials);
    Digest committed = tree.root();
    if (g.behavior.deviation == Deviation::WrongMrDispatch) {
        auto other = vials;
        other.back() = to_bytes("VX" + std::to_string(stock_counter_) + "-substitute");
        committed = MerkleTree::build(other).root();
    }
    auto charge = cfg_.service_charge_per_vial * static_cast<Amount>(count);
    if (!call(g, "commit_vaccine_set", [&] {
            k.commit_vaccine_set(g.address, vc.address, count, committed, charge);
            return "mr=" + committed.hex().substr(0, 16);
        }))
        return false;
    send(g, vc, MessageKind::VialHandover, join_lines(vials));

    auto msg = receive(vc, MessageKind::VialHandover);
    if (!msg) return false;
    auto received = split_lines(msg->payload);
    auto local = MerkleTree::build(received);
    bool match = local.root() == k.current_refill(vc.address)->commitment;
    std::optional<std::uint64_t> stock_id;
    if (!call(vc, "decide_on_acceptance_vaccine_set", [&] {
            stock_id = k.decide_on_acceptance_vaccine_set(vc.address, match);
            return stock_id ? "stock=" + std::to_string(*stock_id) : std::string("rejected: root mismatch");
        }))
        return false;
    if (!stock_id) return false;

    vc.vials = local.leaves();
    vc.stock_tree = std::move(local);
    return true;
}

bool Simulation::obtain_token(Actor& c) {
    auto& g = govt();
    auto& k = chain_->tokens;
    require(c.pii.has_value(), ErrorKind::InvalidArgument, c.name + " has no PII");

    std::uint64_t appl = 0;
    if (!call(c, "appl_for_token_id", [&] {
            appl = k.appl_for_token_id(c.address, crypto::hash(c.pii->canonical()));
            return "appl=" + std::to_string(appl);
        }))
        return false;

    Pii sent = *c.pii;
    if (c.behavior.deviation == Deviation::PiiTamper) sent.dob = "1900-01-01";
    send(c, g, MessageKind::Application, to_bytes(sent.canonical()));

    auto msg = receive(g, MessageKind::Application);
    if (!msg) return false;
    bool match = crypto::hash(msg->payload) == k.current_application(c.address)->citizen_info_digest;
    std::optional<std::uint64_t> token;
    if (!call(g, "verify_appl", [&] {
            token = k.verify_appl(g.address, appl, match);
            return token ? "token=" + std::to_string(*token) : std::string("rejected: digest mismatch");
        }))
        return false;
    return token.has_value();
}

bool Simulation::administer_dose(Actor& vc, Actor& c) {
    auto& k = chain_->injection;
    auto rec = chain_->vc_govt.vc(vc.address);
    std::uint64_t vc_id = rec ? rec->vc_id : 0;

    if (!call(c, "begin_protocol", [&] { return "protocol=" + std::to_string(k.begin_protocol(c.address, vc_id)); }))
        return false;
    if (!call(vc, "lock_money_by_vc", [&] {
            k.lock_money_by_vc(vc.address, c.address, cfg_.deposit);
            return std::string();
        }))
        return false;
    if (!call(c, "lock_money_by_c", [&] {
            k.lock_money_by_c(c.address, vc_id, cfg_.deposit);
            return std::string();
        }))
        return false;

    std::optional<Bytes> vial;
    if (vc.behavior.deviation == Deviation::ReuseVial && vc.last_administered) {
        vial = vc.last_administered;
    } else {
        for (const auto& v : vc.vials) {
            if (!vc.administered.contains(v) && k.vial_state(crypto::hash(v)) == contracts::VialState::Unused) {
                vial = v;
                break;
            }
        }
    }
    if (!vial || !vc.stock_tree) {
        note(vc, "select_vial", "NoVial", "no unused vial in stock");
        return false;
    }

    MerkleProof proof;
    if (vc.behavior.deviation == Deviation::WrongProof) {
        auto foreign = MerkleTree::build({*vial, to_bytes("FOREIGN-1"), to_bytes("FOREIGN-2")});
        proof = foreign.prove(*vial);
    } else {
        proof = vc.stock_tree->prove(*vial);
    }
    send(vc, c, MessageKind::MerkleProof, to_bytes(proof.serialize()));
    if (!call(vc, "commit_mt_proof", [&] {
            k.commit_mt_proof(vc.address, c.address, proof.commitment());
            return "commit=" + proof.commitment().hex().substr(0, 16);
        }))
        return false;

    auto pm = receive(c, MessageKind::MerkleProof);
    if (!pm) return false;
    auto cp = MerkleProof::parse(as_string(pm->payload));
    bool consent1 = cp.commitment() == k.current(c.address)->commit_mt_proof;
    if (!call(c, "provide_consent1", [&] {
            k.provide_consent1(c.address, vc_id, consent1);
            return "consent1=" + std::string(consent1 ? "true" : "false");
        }) ||
        !consent1)
        return false;

    if (!call(vc, "commit_vial_id", [&] {
            k.commit_vial_id(vc.address, c.address, crypto::hash(*vial));
            return std::string();
        }))
        return false;
    send(vc, c, MessageKind::VialHandover, *vial);

    auto vm = receive(c, MessageKind::VialHandover);
    if (!vm) return false;
    bool consent2 = crypto::hash(vm->payload) == k.current(c.address)->commit_vid && cp.leaf == vm->payload;
    if (!call(c, "provide_consent2", [&] {
            k.provide_consent2(c.address, vc_id, consent2);
            return "consent2=" + std::string(consent2 ? "true" : "false");
        }) ||
        !consent2)
        return false;

    auto stock = chain_->vc_govt.stock(k.current(c.address)->stock_id);
    bool consent3 = stock && crypto::merkle_verify(cp, stock->stock_mr);
    if (c.behavior.deviation == Deviation::WrongfulDissent) consent3 = false;
    if (!call(c, "provide_consent3", [&] {
            k.provide_consent3(c.address, vc_id, consent3);
            return "consent3=" + std::string(consent3 ? "true" : "false");
        }))
        return false;
    if (!consent3) {
        call(vc, "adjudicate_dispute", [&] {
            auto v = k.adjudicate_dispute(vc.address, c.address, proof);
            return std::string(v == contracts::Verdict::CitizenFaulty ? "citizen_faulty" : "vc_faulty");
        });
        return false;
    }

    if (!call(vc, "register_vax_timestamp", [&] {
            k.register_vax_timestamp(vc.address, c.address);
            return std::string();
        }))
        return false;
    vc.administered.insert(*vial);
    vc.last_administered = *vial;
    c.received_vial = *vial;
    c.received_proof = cp;

    bool ack = c.behavior.deviation != Deviation::NegativeAck;
    if (!call(c, "acknowledge_vaccination", [&] {
            k.acknowledge_vaccination(c.address, vc_id, ack);
            return "ack=" + std::string(ack ? "true" : "false");
        }))
        return false;
    return ack;
}

bool Simulation::obtain_vp(Actor& c) {
    auto& g = govt();
    auto& k = chain_->passport;

    if (!call(c, "initiate_vp_appl_and_lock_money", [&] {
            return "vp_appl=" + std::to_string(k.initiate_vp_appl_and_lock_money(c.address, cfg_.deposit));
        }))
        return false;
    if (!call(g, "lock_money_by_govt", [&] {
            k.lock_money_by_govt(g.address, c.address, cfg_.deposit);
            return std::string();
        }))
        return false;

    if (!c.received_proof || !c.received_vial) {
        note(c, "send_vaccination_proof", "NoProof", "no vaccination proof in hand");
        return false;
    }
    const auto& proof = *c.received_proof;
    if (!call(c, "send_vaccination_proof", [&] {
            k.send_vaccination_proof(c.address, *c.received_vial, proof.commitment());
            return std::string();
        }))
        return false;
    send(c, g, MessageKind::MerkleProof, to_bytes(proof.serialize()));

    auto pm = receive(g, MessageKind::MerkleProof);
    if (!pm) return false;
    auto gp = MerkleProof::parse(as_string(pm->payload));
    auto token = *chain_->tokens.token_of(c.address);
    auto inj = chain_->injection.latest_for_token(token);
    bool consent1 = inj && crypto::hash(gp.leaf) == inj->commit_vid && gp.commitment() == inj->commit_mt_proof;
    if (!call(g, "send_consent1", [&] {
            k.send_consent1(g.address, c.address, consent1);
            return "consent1=" + std::string(consent1 ? "true" : "false");
        }) ||
        !consent1)
        return false;

    auto stock = chain_->vc_govt.stock(inj->stock_id);
    bool consent2 = stock && crypto::merkle_verify(gp, stock->stock_mr);
    if (g.behavior.deviation == Deviation::WrongfulDissent2) consent2 = false;
    if (!call(g, "send_consent2", [&] {
            k.send_consent2(g.address, c.address, consent2);
            return "consent2=" + std::string(consent2 ? "true" : "false");
        }))
        return false;
    if (!consent2) {
        call(g, "adjudicate_dissent", [&] {
            auto v = k.adjudicate_dissent(g.address, c.address, gp);
            return std::string(v == contracts::DissentVerdict::CitizenFaulty ? "citizen_faulty" : "govt_faulty");
        });
        return false;
    }

    VPDocument doc{token,        as_string(gp.leaf),        inj->vc_id, inj->t_vaccination,
                   cfg_.vaccine_name, cfg_.target_disease};
    auto md = doc.digest();
    if (g.behavior.deviation == Deviation::ForgedMd) {
        auto forged = doc;
        forged.vaccine_name = "unlisted";
        md = forged.digest();
    }
    auto sigma = crypto::sign(g.signing.sk, md.view());
    auto ct = crypto::pre_encrypt(c.encryption.pk, doc.bytes(), rng_);
    auto cid = store_.put(ct.serialize());
    return call(g, "upload_vp_info_and_get_payment", [&] {
        k.upload_vp_info_and_get_payment(g.address, c.address, md, sigma, cid);
        return "cid=" + cid.hex().substr(0, 16);
    });
}

std::optional<bool> Simulation::verify_vp(Actor& vf, Actor& c) {
    auto& k = chain_->verification;
    std::uint64_t id = 0;
    if (!call(vf, "lock_money_by_vf", [&] {
            id = k.lock_money_by_vf(vf.address, c.address, cfg_.deposit);
            return "vf_protocol=" + std::to_string(id);
        }))
        return std::nullopt;

    Bytes sk = c.encryption.sk;
    if (c.behavior.deviation == Deviation::RkReplay) {
        for (const auto& other : actors_) {
            if (other->role == Role::Citizen && other.get() != &c) {
                sk = other->encryption.sk;
                break;
            }
        }
    }
    auto rk = crypto::pre_rekey(sk, vf.encryption.pk);
    if (!call(c, "lock_money_and_commit_rk", [&] {
            k.lock_money_and_commit_rk(c.address, id, crypto::hash(rk.material), cfg_.deposit);
            return std::string();
        }))
        return std::nullopt;
    send(c, vf, MessageKind::Rekey, rk.material);

    auto rm = receive(vf, MessageKind::Rekey);
    if (!rm) return std::nullopt;
    bool consent = crypto::hash(rm->payload) == k.instance(id)->commit_rk;
    if (!call(vf, "provide_consent", [&] {
            k.provide_consent(vf.address, id, consent);
            return "consent=" + std::string(consent ? "true" : "false");
        }) ||
        !consent)
        return std::nullopt;

    if (!call(c, "grant_access_permission", [&] {
            k.grant_access_permission(c.address, id);
            return std::string();
        }))
        return std::nullopt;

    contracts::VPRecord rec;
    if (!call(vf, "fetch_vp_info", [&] {
            rec = k.fetch_vp_info(vf.address, id);
            return std::string();
        }))
        return std::nullopt;

    bool result = false;
    std::string why;
    try {
        auto ct = crypto::Ciphertext::parse(store_.get(rec.c_id));
        auto re = crypto::pre_reencrypt(crypto::ReEncryptionKey{rm->payload}, ct);
        auto plaintext = crypto::pre_decrypt(vf.encryption.sk, re);
        if (crypto::hash(plaintext) != rec.md_vp) {
            why = "digest_mismatch";
        } else if (!crypto::verify(chain_->config.govt_signing_pk, rec.md_vp.view(), rec.sigma)) {
            why = "bad_signature";
        } else {
            result = true;
            why = "valid";
        }
    } catch (const Error& e) {
        why = std::string(to_string(e.kind()));
    }
    if (!call(vf, "verification_result", [&] {
            k.verification_result(vf.address, id, result);
            return "result=" + std::string(result ? "true" : "false") + " check=" + why;
        }))
        return std::nullopt;
    return result;
}

std::size_t Simulation::claim_exits() {
    auto& ch = *chain_;
    auto now = ch.ledger.now();
    std::size_t done = 0;
    for (const auto& w : ch.waiting()) {
        if (!w.expired(now)) continue;
        Actor* caller = nullptr;
        std::string op;
        std::function<void()> exit;

        if (w.contract == "vc_govt.registration") {
            const auto& regs = ch.vc_govt.registrations();
            auto it = std::find_if(regs.begin(), regs.end(), [&](const auto& a) { return a.seq == w.instance; });
            if (it == regs.end()) continue;
            auto vc_addr = it->vc;
            caller = w.party == vc_addr ? &govt() : find(vc_addr);
            op = "exit_registration";
            exit = [&, vc_addr] { ch.vc_govt.exit_registration(caller->address, vc_addr); };
        } else if (w.contract == "vc_govt.refill") {
            const auto& refills = ch.vc_govt.refills();
            auto it = std::find_if(refills.begin(), refills.end(),
                                   [&](const auto& a) { return a.refill_appl_id == w.instance; });
            if (it == refills.end()) continue;
            auto vc_addr = it->vc;
            if (w.party == vc_addr) {
                caller = &govt();
                op = "take_away_locked_money";
                exit = [&, vc_addr] { ch.vc_govt.take_away_locked_money(caller->address, vc_addr); };
            } else {
                caller = find(vc_addr);
                op = "exit_refill_application";
                exit = [&] { ch.vc_govt.exit_refill_application(caller->address); };
            }
        } else if (w.contract == "token") {
            const auto& appls = ch.tokens.applications();
            auto it = std::find_if(appls.begin(), appls.end(),
                                   [&](const auto& a) { return a.token_appl_id == w.instance; });
            if (it == appls.end()) continue;
            caller = find(it->applicant);
            op = "exit_token_application";
            exit = [&] { ch.tokens.exit_token_application(caller->address); };
        } else if (w.contract == "injection") {
            const auto& xs = ch.injection.instances();
            auto it = std::find_if(xs.begin(), xs.end(), [&](const auto& p) { return p.protocol_id == w.instance; });
            if (it == xs.end()) continue;
            auto citizen = it->citizen;
            caller = find(w.party == it->vc ? citizen : it->vc);
            op = "exit_protocol";
            exit = [&, citizen] { ch.injection.exit_protocol(caller->address, citizen); };
        } else if (w.contract == "passport") {
            const auto& xs = ch.passport.instances();
            auto it = std::find_if(xs.begin(), xs.end(), [&](const auto& a) { return a.vp_appl_id == w.instance; });
            if (it == xs.end()) continue;
            auto citizen = it->citizen;
            caller = w.party == citizen ? &govt() : find(citizen);
            op = "exit_vp_appl";
            exit = [&, citizen] { ch.passport.exit_vp_appl(caller->address, citizen); };
        } else if (w.contract == "verification") {
            auto p = ch.verification.instance(w.instance);
            if (!p) continue;
            caller = find(w.party == p->citizen ? p->vf_addr : p->citizen);
            op = "exit_verification";
            auto id = w.instance;
            exit = [&, id] { ch.verification.exit_verification(caller->address, id); };
        }
        if (!caller || !exit) continue;
        if (call(*caller, op, [&] {
                exit();
                return w.contract + "#" + std::to_string(w.instance) + " " + w.state + " silent=" +
                       (find(w.party) ? find(w.party)->name : w.party.short_hex());
            }))
            ++done;
    }
    return done;
}

Amount Simulation::sweep() {
    Amount swept = 0;
    call(govt(), "sweep_service_charges", [&] {
        swept = chain_->vc_govt.sweep_service_charges(govt().address);
        return "swept=" + std::to_string(swept);
    });
    return swept;
}

VPDocument Simulation::read_own_vp(const Actor& citizen) {
    auto token = chain_->tokens.token_of(citizen.address);
    require(token.has_value(), ErrorKind::NotFound, citizen.name + " has no token");
    auto rec = chain_->passport.vp_record(*token);
    require(rec.has_value(), ErrorKind::NotFound, citizen.name + " has no passport");
    auto ct = crypto::Ciphertext::parse(store_.get(rec->c_id));
    return VPDocument::parse(as_string(crypto::pre_decrypt(citizen.encryption.sk, ct)));
}

}  // namespace vaxpass::actors
