#include "vaxpass/scenario/runner.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <sstream>

#include "json.hpp"
#include "vaxpass/core/errors.hpp"

namespace vaxpass::scenario {

using contracts::Amount;
using contracts::Ticks;
using contracts::VialState;
using nlohmann::ordered_json;

namespace {

bool open_escrow(const contracts::Chain& ch, const std::optional<contracts::EscrowId>& e) {
    return e && ch.ledger.escrow_open(*e);
}

bool non_decreasing(const std::vector<Ticks>& ts) {
    Ticks last = 0;
    for (auto t : ts) {
        if (t == 0) continue;
        if (t < last) return false;
        last = t;
    }
    return true;
}

Amount wealth(const contracts::Chain& ch, const contracts::PartyAddress& who) {
    Amount w = ch.ledger.balance(who);
    for (const auto& [_, e] : ch.ledger.open_escrows()) {
        if (e.holder == who) w += e.amount;
    }
    return w;
}

Stats collect_stats(actors::Simulation& sim) {
    Stats s;
    auto g = sim.chain().tokens.stats();
    s.tokened = g.tokened;
    s.vaccinated = g.vaccinated;
    s.vp_issued = g.vp_issued;
    for (const auto& v : sim.chain().vc_govt.vcs()) {
        auto* a = sim.find(v.address);
        s.vcs.push_back({a ? a->name : v.address.short_hex(), v.vc_id, v.vials_in_stock, v.money_earned,
                         v.doses_administered});
    }
    return s;
}

ordered_json stats_json(const Stats& s) {
    ordered_json j;
    j["tokened"] = s.tokened;
    j["vaccinated"] = s.vaccinated;
    j["vp_issued"] = s.vp_issued;
    j["vcs"] = ordered_json::array();
    for (const auto& v : s.vcs) {
        j["vcs"].push_back({{"name", v.name},
                            {"vc_id", v.vc_id},
                            {"vials_in_stock", v.vials_in_stock},
                            {"money_earned", v.money_earned},
                            {"doses", v.doses}});
    }
    return j;
}

void run_step(actors::Simulation& sim, const Step& st) {
    sim.advance(st.advance);
    if (st.op == "advance") {
        sim.advance(st.ticks);
    } else if (st.op == "claim_exits") {
        sim.claim_exits();
    } else if (st.op == "sweep") {
        sim.sweep();
    } else if (st.op == "register_vc") {
        sim.register_vc(sim.actor(st.actor));
    } else if (st.op == "dispatch_stock") {
        sim.dispatch_stock(sim.actor(st.target), st.vials);
    } else if (st.op == "obtain_token") {
        sim.obtain_token(sim.actor(st.actor));
    } else if (st.op == "administer_dose") {
        sim.administer_dose(sim.actor(st.actor), sim.actor(st.target));
    } else if (st.op == "obtain_vp") {
        sim.obtain_vp(sim.actor(st.actor));
    } else if (st.op == "verify_vp") {
        sim.verify_vp(sim.actor(st.actor), sim.actor(st.target));
    }
}

}  // namespace

std::vector<std::string> check_escrows_closed(const contracts::Chain& ch) {
    std::vector<std::string> out;
    for (const auto& p : ch.injection.instances()) {
        if (p.under_process || p.frozen) continue;
        auto id = std::to_string(p.protocol_id);
        if (open_escrow(ch, p.vc_escrow)) out.push_back("injection #" + id + " closed with the VC escrow open");
        // An acknowledged dose keeps the citizen's deposit in the token vault
        // until the passport is issued.
        bool vault_pending = p.outcome == "vaccinated" && !ch.passport.vp_record(p.token_id);
        if (!vault_pending && open_escrow(ch, p.c_escrow)) {
            out.push_back("injection #" + id + " closed with the citizen escrow open");
        }
    }
    for (const auto& a : ch.passport.instances()) {
        if (a.under_process) continue;
        if (open_escrow(ch, a.c_escrow) || open_escrow(ch, a.govt_escrow)) {
            out.push_back("passport #" + std::to_string(a.vp_appl_id) + " closed with an escrow open");
        }
    }
    for (const auto& p : ch.verification.instances()) {
        if (p.under_execution) continue;
        if (open_escrow(ch, p.vf_escrow) || open_escrow(ch, p.c_escrow)) {
            out.push_back("verification #" + std::to_string(p.vf_protocol_id) + " closed with an escrow open");
        }
    }
    for (const auto& r : ch.vc_govt.refills()) {
        if (r.under_process || r.accepted) continue;
        for (auto e : r.escrows) {
            if (ch.ledger.escrow_open(e)) {
                out.push_back("refill #" + std::to_string(r.refill_appl_id) + " closed with a service escrow open");
                break;
            }
        }
    }
    return out;
}

std::vector<std::string> check_vial_lifecycle(const contracts::Chain& ch) {
    std::vector<std::string> out;
    std::map<crypto::Digest, VialState> state;
    std::map<std::uint64_t, std::uint64_t> used_per_stock;
    const auto& instances = ch.injection.instances();
    for (const auto& t : ch.injection.vial_transitions()) {
        auto cur = state.contains(t.commit_vid) ? state[t.commit_vid] : VialState::Unused;
        bool ok = t.from == cur && ((t.from == VialState::Unused && t.to == VialState::Reserved) ||
                                    (t.from == VialState::Reserved && t.to == VialState::Used) ||
                                    (t.from == VialState::Reserved && t.to == VialState::Unused));
        if (!ok) {
            out.push_back("vial " + t.commit_vid.hex().substr(0, 12) + " moved " + contracts::to_string(t.from) + "->" +
                          contracts::to_string(t.to) + " while " + contracts::to_string(cur));
        }
        state[t.commit_vid] = t.to;
        if (t.to == VialState::Used) {
            for (const auto& p : instances) {
                if (p.protocol_id == t.protocol_id) ++used_per_stock[p.stock_id];
            }
        }
    }
    for (const auto& v : ch.vc_govt.vcs()) {
        if (v.current_stock_id == 0) continue;
        auto st = ch.vc_govt.stock(v.current_stock_id);
        if (st && v.vials_in_stock + used_per_stock[st->stock_id] != st->vials_count) {
            out.push_back("vc #" + std::to_string(v.vc_id) + " stock count " + std::to_string(v.vials_in_stock) +
                          " disagrees with " + std::to_string(used_per_stock[st->stock_id]) + " used of " +
                          std::to_string(st->vials_count));
        }
    }
    return out;
}

std::vector<std::string> check_timestamps(const contracts::Chain& ch) {
    std::vector<std::string> out;
    auto check = [&](const std::string& what, std::uint64_t id, const std::vector<Ticks>& ts) {
        if (!non_decreasing(ts)) out.push_back(what + " #" + std::to_string(id) + " timestamps out of order");
    };
    for (const auto& a : ch.vc_govt.registrations()) {
        check("registration", a.seq, {a.t_reg_appl, a.t_hash_appl, a.t_decide_on_hash, a.t_decide_on_appl});
    }
    for (const auto& r : ch.vc_govt.refills()) {
        check("refill", r.refill_appl_id, {r.t_refill_appl, r.t_commitment, r.t_accept_vaccine_set});
    }
    for (const auto& a : ch.tokens.applications()) check("token", a.token_appl_id, {a.t_token_appl, a.t_result});
    for (const auto& p : ch.injection.instances()) check("injection", p.protocol_id, p.progression());
    for (const auto& a : ch.passport.instances()) check("passport", a.vp_appl_id, a.progression());
    for (const auto& p : ch.verification.instances()) check("verification", p.vf_protocol_id, p.progression());
    auto events = ch.ledger.events();
    for (std::size_t i = 1; i < events.size(); ++i) {
        if (events[i].time < events[i - 1].time) {
            out.push_back("event " + std::to_string(i) + " is earlier than its predecessor");
            break;
        }
    }
    return out;
}

RunResult run_scenario(const Scenario& s, const RunOptions& opts) {
    auto started = std::chrono::steady_clock::now();
    RunResult res;
    res.name = s.name;

    auto cfg = s.config;
    if (opts.seed) cfg.seed = *opts.seed;
    actors::Simulation sim(cfg);
    for (const auto& p : s.parties) sim.add_actor(p.name, p.role, p.behavior, p.pii);

    std::size_t script_index = 0;
    bool aborted = false;
    auto violate = [&](const std::string& what) {
        res.violations.push_back("script step " + std::to_string(script_index) + ", call " +
                                 std::to_string(sim.transcript().size()) + ": " + what);
        if (opts.strict) aborted = true;
    };
    sim.on_step = [&](const actors::StepRecord&) {
        const auto& ch = sim.chain();
        if (!ch.ledger.conserved()) {
            res.conserved_every_step = false;
            violate("value not conserved");
        }
        for (const auto& [who, bal] : ch.ledger.balances()) {
            if (bal < 0) violate("negative balance for " + who.short_hex());
        }
        auto escrows = check_escrows_closed(ch);
        if (!escrows.empty()) res.escrows_closed_every_step = false;
        for (const auto& v : escrows) violate(v);
        for (const auto& v : check_vial_lifecycle(ch)) violate(v);
        for (const auto& v : check_timestamps(ch)) violate(v);
    };

    for (; script_index < s.script.size() && !aborted; ++script_index) {
        const auto& st = s.script[script_index];
        try {
            run_step(sim, st);
        } catch (const Error& e) {
            res.unmet.push_back("script step " + std::to_string(script_index) + " (" + st.op + ") raised " + e.what());
        }
    }

    auto& ch = sim.chain();
    res.transcript = sim.transcript();
    res.stats = collect_stats(sim);
    res.open_instances = ch.waiting().size();

    Amount paid_out = 0;
    for (const auto& v : ch.vc_govt.vcs()) paid_out += v.money_earned;
    for (const auto& a : sim.actors()) {
        PartyOutcome o{a->name, wealth(ch, a->address), 0};
        o.net = o.wealth - cfg.genesis;
        if (a->role == actors::Role::Govt) o.net += paid_out;
        if (auto v = ch.vc_govt.vc(a->address)) o.net -= v->money_earned;
        res.parties.push_back(o);
    }
    for (const auto& a : sim.actors()) {
        if (a->role != actors::Role::Citizen) continue;
        auto token = ch.tokens.token_of(a->address);
        if (!token) continue;
        for (const auto& h : ch.verification.history(*token)) res.verifications[a->name].push_back(h.result);
    }

    // Expectations.
    const auto& e = s.expect;
    for (const auto& want : e.errors) {
        bool seen = false;
        for (const auto& r : res.transcript) seen = seen || (r.op == want.op && r.status == want.kind);
        if (!seen) res.unmet.push_back("expected " + want.kind + " at " + want.op);
    }
    for (const auto& r : res.transcript) {
        if (r.status == "ok" || r.status == "silent") continue;
        bool declared = false;
        for (const auto& want : e.errors) declared = declared || (r.op == want.op && r.status == want.kind);
        if (!declared) res.unmet.push_back("unexpected " + r.status + " at " + r.op + " (call " + std::to_string(r.index) + ")");
    }
    for (const auto& p : res.parties) {
        bool faulty = std::find(e.faulty.begin(), e.faulty.end(), p.name) != e.faulty.end();
        if (faulty && p.net >= 0) res.unmet.push_back(p.name + " was scripted faulty but lost nothing");
        if (!faulty && p.net < 0) res.unmet.push_back(p.name + " is honest but lost " + std::to_string(-p.net));
    }
    if (e.vaccinated && res.stats.vaccinated != *e.vaccinated) {
        res.unmet.push_back("vaccinated " + std::to_string(res.stats.vaccinated) + ", expected " +
                            std::to_string(*e.vaccinated));
    }
    if (e.vp_issued && res.stats.vp_issued != *e.vp_issued) {
        res.unmet.push_back("vp_issued " + std::to_string(res.stats.vp_issued) + ", expected " +
                            std::to_string(*e.vp_issued));
    }
    for (const auto& v : e.verifications) {
        const auto& got = res.verifications[v.citizen];
        if (std::find(got.begin(), got.end(), v.result) == got.end()) {
            res.unmet.push_back("no verification of " + v.citizen + " recorded " + (v.result ? "true" : "false"));
        }
    }
    if (!e.allow_open && res.open_instances > 0) {
        res.unmet.push_back(std::to_string(res.open_instances) + " instance(s) still open at the end");
    }

    res.exit_code = (res.violations.empty() && res.unmet.empty()) ? 0 : 1;
    if (opts.inspect) opts.inspect(sim);
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return res;
}

std::string RunResult::jsonl() const {
    std::ostringstream out;
    for (const auto& r : transcript) {
        ordered_json j;
        j["i"] = r.index;
        j["t"] = r.time;
        j["actor"] = r.actor;
        j["op"] = r.op;
        j["status"] = r.status;
        j["detail"] = r.detail;
        out << j.dump() << '\n';
    }
    ordered_json summary;
    summary["scenario"] = name;
    summary["exit_code"] = exit_code;
    summary["stats"] = stats_json(stats);
    summary["parties"] = ordered_json::array();
    for (const auto& p : parties) summary["parties"].push_back({{"name", p.name}, {"wealth", p.wealth}, {"net", p.net}});
    summary["open_instances"] = open_instances;
    summary["violations"] = violations;
    summary["unmet"] = unmet;
    out << ordered_json{{"summary", summary}}.dump() << '\n';
    return out.str();
}

Stats stats_from_transcript(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::optional<Stats> found;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorKind::DecodeError, std::string("transcript line: ") + e.what());
        }
        if (!j.contains("summary")) continue;
        try {
            const auto& s = j.at("summary").at("stats");
            Stats st;
            st.tokened = s.at("tokened").get<std::uint64_t>();
            st.vaccinated = s.at("vaccinated").get<std::uint64_t>();
            st.vp_issued = s.at("vp_issued").get<std::uint64_t>();
            for (const auto& v : s.at("vcs")) {
                st.vcs.push_back({v.at("name").get<std::string>(), v.at("vc_id").get<std::uint64_t>(),
                                  v.at("vials_in_stock").get<std::uint64_t>(), v.at("money_earned").get<Amount>(),
                                  v.at("doses").get<std::uint64_t>()});
            }
            found = st;
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorKind::DecodeError, std::string("transcript summary: ") + e.what());
        }
    }
    if (!found) fail(ErrorKind::DecodeError, "transcript has no summary line");
    return *found;
}

std::string format_stats(const Stats& s) {
    std::ostringstream out;
    out << "tokened=" << s.tokened << " vaccinated=" << s.vaccinated << " vp_issued=" << s.vp_issued << '\n';
    for (const auto& v : s.vcs) {
        out << "  vc " << v.name << " (#" << v.vc_id << "): stock=" << v.vials_in_stock << " doses=" << v.doses
            << " earned=" << v.money_earned << '\n';
    }
    return out.str();
}

}  // namespace vaxpass::scenario
