#include "vaxpass/scenario/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "vaxpass/core/errors.hpp"

namespace vaxpass::scenario {

using nlohmann::json;

namespace {

const std::set<std::string> kFlows{"register_vc", "dispatch_stock", "obtain_token", "administer_dose",
                                   "obtain_vp",   "verify_vp",      "advance",      "claim_exits",
                                   "sweep"};

template <typename T>
T opt(const json& j, const char* key, T fallback) {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

PartySpec parse_party(const json& j) {
    PartySpec p;
    p.name = j.at("name").get<std::string>();
    p.role = actors::parse_role(j.at("role").get<std::string>());
    p.behavior.deviation = actors::parse_deviation(opt<std::string>(j, "deviation", "honest"));
    if (j.contains("silent_at")) {
        for (const auto& op : j.at("silent_at")) p.behavior.silent_at.insert(op.get<std::string>());
    }
    if (j.contains("pii")) {
        const auto& x = j.at("pii");
        p.pii = actors::Pii{x.at("name").get<std::string>(), x.at("address").get<std::string>(),
                            x.at("dob").get<std::string>(), x.at("citizen_id").get<std::string>()};
    }
    return p;
}

Step parse_step(const json& j) {
    Step s;
    s.op = j.at("op").get<std::string>();
    if (!kFlows.contains(s.op)) fail(ErrorKind::DecodeError, "unknown op '" + s.op + "'");
    s.actor = opt<std::string>(j, "actor", "");
    s.target = opt<std::string>(j, "vc", opt<std::string>(j, "citizen", ""));
    s.vials = opt<std::uint64_t>(j, "vials", 0);
    s.advance = opt<std::uint64_t>(j, "advance", 0);
    s.ticks = opt<std::uint64_t>(j, "ticks", 0);
    return s;
}

void validate(const Scenario& s) {
    std::map<std::string, actors::Role> roles;
    for (const auto& p : s.parties) {
        if (!roles.emplace(p.name, p.role).second) fail(ErrorKind::DecodeError, "duplicate party '" + p.name + "'");
        if (p.role == actors::Role::Citizen && !p.pii) fail(ErrorKind::DecodeError, "citizen '" + p.name + "' has no pii");
    }
    if (s.parties.empty() || s.parties.front().role != actors::Role::Govt) {
        fail(ErrorKind::DecodeError, "the first party must be the government");
    }
    if (s.config.step_timeout == 0 || s.config.dispute_window == 0) {
        fail(ErrorKind::DecodeError, "timeouts must be positive");
    }
    auto known = [&](const std::string& n, const char* what, std::size_t i) {
        if (!roles.contains(n)) {
            fail(ErrorKind::DecodeError, "step " + std::to_string(i) + ": unknown " + what + " '" + n + "'");
        }
    };
    for (std::size_t i = 0; i < s.script.size(); ++i) {
        const auto& st = s.script[i];
        bool needs_actor = st.op != "advance" && st.op != "claim_exits" && st.op != "sweep" && st.op != "dispatch_stock";
        if (needs_actor) known(st.actor, "actor", i);
        bool needs_target = st.op == "dispatch_stock" || st.op == "administer_dose" || st.op == "verify_vp";
        if (needs_target) known(st.target, "counterpart", i);
        if (st.op == "dispatch_stock" && st.vials == 0) {
            fail(ErrorKind::DecodeError, "step " + std::to_string(i) + ": dispatch_stock needs vials > 0");
        }
        if (st.op == "advance" && st.ticks == 0) {
            fail(ErrorKind::DecodeError, "step " + std::to_string(i) + ": advance needs ticks > 0");
        }
    }
    for (const auto& f : s.expect.faulty) known(f, "faulty party", 0);
    for (const auto& v : s.expect.verifications) known(v.citizen, "citizen", 0);
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
    Scenario s;
    try {
        auto j = json::parse(text);
        s.name = j.at("name").get<std::string>();
        s.description = opt<std::string>(j, "description", "");
        s.config.seed = opt<std::uint64_t>(j, "seed", 1);
        if (j.contains("config")) {
            const auto& c = j.at("config");
            s.config.step_timeout = opt<std::uint64_t>(c, "step_timeout", s.config.step_timeout);
            s.config.dispute_window = opt<std::uint64_t>(c, "dispute_window", s.config.dispute_window);
            s.config.deposit = opt<std::int64_t>(c, "deposit", s.config.deposit);
            s.config.service_charge_per_vial =
                opt<std::int64_t>(c, "service_charge_per_vial", s.config.service_charge_per_vial);
            s.config.genesis = opt<std::int64_t>(c, "genesis", s.config.genesis);
        }
        for (const auto& p : j.at("parties")) s.parties.push_back(parse_party(p));
        for (const auto& st : j.at("script")) s.script.push_back(parse_step(st));
        if (j.contains("expect")) {
            const auto& e = j.at("expect");
            if (e.contains("errors")) {
                for (const auto& x : e.at("errors")) {
                    s.expect.errors.push_back({x.at("op").get<std::string>(), x.at("kind").get<std::string>()});
                }
            }
            if (e.contains("faulty")) s.expect.faulty = e.at("faulty").get<std::vector<std::string>>();
            if (e.contains("vaccinated")) s.expect.vaccinated = e.at("vaccinated").get<std::uint64_t>();
            if (e.contains("vp_issued")) s.expect.vp_issued = e.at("vp_issued").get<std::uint64_t>();
            if (e.contains("verifications")) {
                for (const auto& x : e.at("verifications")) {
                    s.expect.verifications.push_back({x.at("citizen").get<std::string>(), x.at("result").get<bool>()});
                }
            }
            s.expect.allow_open = opt<bool>(e, "allow_open", false);
        }
    } catch (const json::exception& e) {
        fail(ErrorKind::DecodeError, std::string("scenario: ") + e.what());
    }
    validate(s);
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::DecodeError, "cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

}  // namespace vaxpass::scenario
