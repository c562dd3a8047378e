#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vaxpass/actors/simulation.hpp"

namespace vaxpass::scenario {

struct PartySpec {
    std::string name;
    actors::Role role = actors::Role::Citizen;
    actors::Behavior behavior;
    std::optional<actors::Pii> pii;
};

/// One script line. `actor` is the party that drives the flow; `target` is
/// the counterpart named by the flow ("vc" for dispatch_stock, "citizen" for
/// administer_dose and verify_vp).
struct Step {
    std::string op;
    std::string actor;
    std::string target;
    std::uint64_t vials = 0;
    contracts::Ticks advance = 0;  // ticks to let pass before the step
    contracts::Ticks ticks = 0;    // for op == "advance"
};

struct ExpectedError {
    std::string op;
    std::string kind;
};

struct ExpectedVerification {
    std::string citizen;
    bool result = false;
};

struct Expectations {
    std::vector<ExpectedError> errors;
    std::vector<std::string> faulty;
    std::optional<std::uint64_t> vaccinated;
    std::optional<std::uint64_t> vp_issued;
    std::vector<ExpectedVerification> verifications;
    bool allow_open = false;
};

struct Scenario {
    std::string name;
    std::string description;
    actors::SimConfig config;
    std::vector<PartySpec> parties;
    std::vector<Step> script;
    Expectations expect;
};

/// Throws DecodeError on malformed JSON or a schema violation.
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace vaxpass::scenario
