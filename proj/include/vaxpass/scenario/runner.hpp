#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vaxpass/scenario/scenario.hpp"

namespace vaxpass::scenario {

struct VcStats {
    std::string name;
    std::uint64_t vc_id = 0;
    std::uint64_t vials_in_stock = 0;
    contracts::Amount money_earned = 0;
    std::uint64_t doses = 0;
};

struct Stats {
    std::uint64_t tokened = 0;
    std::uint64_t vaccinated = 0;
    std::uint64_t vp_issued = 0;
    std::vector<VcStats> vcs;
};

struct RunOptions {
    bool strict = false;
    std::optional<std::uint64_t> seed;
    /// Called once after the script, with the simulation still alive.
    std::function<void(const actors::Simulation&)> inspect;
};

struct PartyOutcome {
    std::string name;
    contracts::Amount wealth = 0;  // balance plus escrows the party still holds
    contracts::Amount net = 0;     // wealth change once earned or paid service charges are taken out
};

struct RunResult {
    std::string name;
    int exit_code = 0;  // 0 clean, 1 invariant or expectation failure
    std::vector<std::string> violations;
    std::vector<std::string> unmet;
    std::vector<actors::StepRecord> transcript;
    std::vector<PartyOutcome> parties;
    std::map<std::string, std::vector<bool>> verifications;
    Stats stats;
    std::size_t open_instances = 0;
    bool conserved_every_step = true;
    bool escrows_closed_every_step = true;
    double seconds = 0;

    /// One JSON object per step, then a closing summary line.
    std::string jsonl() const;
};

RunResult run_scenario(const Scenario& s, const RunOptions& opts = {});

/// Rebuilds the statistics block from a transcript written by jsonl().
/// Throws DecodeError when no summary line is present.
Stats stats_from_transcript(std::string_view jsonl);
std::string format_stats(const Stats& s);

/// Invariant checks over a chain; each returns a description per violation.
std::vector<std::string> check_escrows_closed(const contracts::Chain& ch);
std::vector<std::string> check_vial_lifecycle(const contracts::Chain& ch);
std::vector<std::string> check_timestamps(const contracts::Chain& ch);

}  // namespace vaxpass::scenario
