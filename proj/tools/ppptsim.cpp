/*
 * ppptsim — command-line front end.
 *
 *   ppptsim run <scenario.json> [--out DIR] [--seed N]
 *   ppptsim grid <preset> [--out DIR] [--seed N] [--threads N]
 *   ppptsim verify <events.log> [--manifest FILE]
 *
 * Exit codes: 0 success, 2 scenario/config errors (message names the
 * offending key), 1 anything else (I/O failures, corrupt logs, replay
 * disagreements).
 */
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pppt/harness.hpp"
#include "pppt/scenario.hpp"

namespace {

void print_run_summary(const pppt::RunArtifacts& art) {
    const auto& r = art.result;
    const auto& c = r.counters;
    std::cout << "run " << r.config.scenario_id << ": scheme=" << to_string(r.config.scheme)
              << " hops=" << r.hops() << " events=" << r.log.size() << "\n"
              << "  generated=" << c.generated << " arrived=" << c.arrived
              << " lost=" << c.lost_natural << " maldropped=" << c.dropped_malicious << "\n"
              << "  verified=" << c.verified << " forged=" << c.forged_detected
              << " stripped_discards=" << c.discarded_stripped << " broken=" << c.broken
              << " ambiguous=" << c.ambiguous << " mismatch=" << c.mismatch << "\n"
              << "  log_sha256=" << art.log_sha256 << "\n"
              << "  wrote " << (art.dir / "events.log").string() << ", manifest.json, "
              << "metrics.csv, loss_series.csv\n";
}

int run_cmd(const std::string& scenario_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed) {
    const pppt::ScenarioConfig cfg = pppt::load_scenario_file(scenario_path);
    const pppt::RunArtifacts art = pppt::execute_run(cfg, out_dir, seed);
    print_run_summary(art);
    return 0;
}

int grid_cmd(const std::string& preset, const std::string& out_dir, std::uint64_t seed,
             unsigned threads) {
    const pppt::GridOutcome out = pppt::run_grid(preset, out_dir, seed, threads);
    std::cout << "grid " << out.preset << ": " << out.run_count << " runs\n";
    for (const auto& f : out.csv_files) std::cout << "  wrote " << f.string() << "\n";
    return 0;
}

int verify_cmd(const std::string& log_path, std::string manifest_path) {
    if (manifest_path.empty())
        manifest_path = (std::filesystem::path(log_path).parent_path() / "manifest.json").string();
    const pppt::VerifyReport rep = pppt::verify_run(log_path, manifest_path);
    std::cout << "verify " << log_path << ": " << rep.events << " events, hash "
              << rep.log_sha256 << " matches manifest\n"
              << "  arrivals=" << rep.arrivals << " verified=" << rep.verified
              << " forged=" << rep.forged << " broken=" << rep.broken
              << " ambiguous=" << rep.ambiguous << " mismatch=" << rep.mismatch << "\n"
              << "  stripped_discards=" << rep.discarded_stripped
              << " unflagged_discards=" << rep.discarded_unflagged
              << " membership_decodes=" << rep.bloom_decoded
              << " plain=" << rep.accepted_plain << "\n";
    if (!rep.ok()) {
        for (const auto& p : rep.problems) std::cerr << "problem: " << p << "\n";
        return 1;
    }
    std::cout << "  replay consistent with logged verdicts and manifest counters\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic provenance-simulation toolkit"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir = "out";
    std::optional<std::uint64_t> seed;
    auto* run = app.add_subcommand("run", "execute one scenario file");
    run->add_option("scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--out", out_dir, "output directory (default: out)");
    std::uint64_t seed_value = 0;
    auto* seed_opt = run->add_option("--seed", seed_value, "override adversary.rng_seed");

    std::string preset, grid_out = "out";
    std::uint64_t grid_seed = 42;
    unsigned threads = 0;
    auto* grid = app.add_subcommand("grid", "execute a named preset grid");
    grid->add_option("preset", preset, "preset name (see error message for the list)")
        ->required();
    grid->add_option("--out", grid_out, "output directory (default: out)");
    grid->add_option("--seed", grid_seed, "base seed for seeded presets (default: 42)");
    grid->add_option("--threads", threads, "worker threads (default: hardware)");

    std::string log_path, manifest_path;
    auto* verify = app.add_subcommand("verify", "replay an event log against its manifest");
    verify->add_option("log", log_path, "events.log to verify")->required();
    verify->add_option("--manifest", manifest_path,
                       "manifest.json (default: next to the log)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (seed_opt->count() > 0) seed = seed_value;
            return run_cmd(scenario_path, out_dir, seed);
        }
        if (grid->parsed()) return grid_cmd(preset, grid_out, grid_seed, threads);
        if (verify->parsed()) return verify_cmd(log_path, manifest_path);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
