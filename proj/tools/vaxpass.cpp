#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "vaxpass/core/errors.hpp"
#include "vaxpass/scenario/runner.hpp"

namespace fs = std::filesystem;
using namespace vaxpass;

namespace {

constexpr int kParseError = 2;

struct Options {
    std::optional<std::uint64_t> seed;
    std::string log_dir;
    bool strict = false;
};

void write_transcript(const Options& o, const scenario::RunResult& r) {
    if (o.log_dir.empty()) return;
    fs::create_directories(o.log_dir);
    std::ofstream(fs::path(o.log_dir) / (r.name + ".jsonl")) << r.jsonl();
}

void report(const scenario::RunResult& r, bool verbose) {
    std::cout << (r.exit_code == 0 ? "PASS " : "FAIL ") << r.name << "  calls=" << r.transcript.size()
              << " open=" << r.open_instances << '\n';
    if (verbose) {
        for (const auto& s : r.transcript) {
            std::cout << "  [" << s.index << "] t=" << s.time << ' ' << s.actor << ' ' << s.op << ' ' << s.status;
            if (!s.detail.empty()) std::cout << "  " << s.detail;
            std::cout << '\n';
        }
        std::cout << scenario::format_stats(r.stats);
        for (const auto& p : r.parties) std::cout << "  " << p.name << " net=" << p.net << '\n';
    }
    for (const auto& v : r.violations) std::cout << "  invariant: " << v << '\n';
    for (const auto& u : r.unmet) std::cout << "  expectation: " << u << '\n';
}

int run_one(const fs::path& file, const Options& o) {
    scenario::Scenario s;
    try {
        s = scenario::load_scenario(file);
    } catch (const Error& e) {
        std::cerr << file.string() << ": " << e.what() << '\n';
        return kParseError;
    }
    scenario::RunResult r = scenario::run_scenario(s, {o.strict, o.seed, {}});
    write_transcript(o, r);
    report(r, true);
    return r.exit_code;
}

int run_batch(const fs::path& dir, const Options& o) {
    if (!fs::is_directory(dir)) {
        std::cerr << dir.string() << ": not a directory\n";
        return kParseError;
    }
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());

    std::vector<scenario::Scenario> parsed;
    int worst = 0;
    for (const auto& f : files) {
        try {
            parsed.push_back(scenario::load_scenario(f));
        } catch (const Error& e) {
            std::cerr << f.string() << ": " << e.what() << '\n';
            worst = kParseError;
        }
    }
    std::vector<std::future<scenario::RunResult>> jobs;
    for (const auto& s : parsed) {
        jobs.push_back(std::async(std::launch::async, [&s, &o] { return scenario::run_scenario(s, {o.strict, o.seed, {}}); }));
    }
    for (auto& j : jobs) {
        auto r = j.get();
        write_transcript(o, r);
        report(r, false);
        worst = std::max(worst, r.exit_code);
    }
    return worst;
}

int show_stats(const fs::path& file) {
    std::ifstream in(file);
    if (!in) {
        std::cerr << file.string() << ": cannot read\n";
        return kParseError;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        std::cout << scenario::format_stats(scenario::stats_from_transcript(buf.str()));
    } catch (const Error& e) {
        std::cerr << file.string() << ": " << e.what() << '\n';
        return kParseError;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vaxpass: vaccine passport protocol simulator"};
    app.require_subcommand(1);
    Options o;
    std::uint64_t seed = 0;
    auto* seed_opt = app.add_option("--seed", seed, "override the scenario seed");
    app.add_option("--log-dir", o.log_dir, "write one JSONL transcript per scenario here");
    app.add_flag("--strict", o.strict, "stop a scenario at its first invariant violation");

    std::string target;
    auto* run = app.add_subcommand("run", "run one scenario file");
    run->add_option("file", target, "scenario JSON")->required();
    auto* batch = app.add_subcommand("batch", "run every *.json scenario in a directory");
    batch->add_option("dir", target, "scenario directory")->required();
    auto* stats = app.add_subcommand("stats", "print statistics from a transcript");
    stats->add_option("transcript", target, "JSONL transcript")->required();
    for (auto* sub : {run, batch, stats}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kParseError;
    }
    if (seed_opt->count() > 0) o.seed = seed;

    if (run->parsed()) return run_one(target, o);
    if (batch->parsed()) return run_batch(target, o);
    return show_stats(target);
}
