/*
 * Run orchestration around the simulation engine: executing one scenario
 * into an output directory (event log + manifest + metric CSVs), fanning a
 * grid preset out across worker threads into per-figure CSVs, and the
 * independent log-replay verifier behind `ppptsim verify`.
 */
#ifndef PPPT_HARNESS_HPP
#define PPPT_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pppt/metrics.hpp"
#include "pppt/scenario.hpp"
#include "pppt/sim.hpp"

namespace pppt {

struct RunArtifacts {
    RunResult result;
    std::string log_sha256;
    std::filesystem::path dir;  // holds events.log, manifest.json, metrics.csv, loss_series.csv
};

/* Runs one scenario and writes its artifacts under out_dir. */
RunArtifacts execute_run(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                         std::optional<std::uint64_t> seed_override = {});

/* The per-run summary rows that land in metrics.csv. */
std::vector<MetricRow> summary_rows(const RunResult& r);

struct GridOutcome {
    std::string preset;
    std::size_t run_count = 0;
    std::vector<std::filesystem::path> csv_files;  // aggregated per-figure CSVs
};

/*
 * Executes every run of a named preset (threads = 0 picks the hardware
 * count), writing per-run artifacts under out_dir/runs/<scenario_id>/ and
 * the figure's aggregated CSVs under out_dir.  Aggregation happens in
 * preset order, so output is independent of scheduling.
 */
GridOutcome run_grid(const std::string& preset_name, const std::filesystem::path& out_dir,
                     std::uint64_t base_seed = 42, unsigned threads = 0);

/*
 * Replays an event log against the run manifest it shipped with: checks
 * the log hash (catching truncation or edits), rebuilds the topology from
 * the echoed config, re-applies every recorded forwarding observation and
 * interval reset, and re-runs the root-side checks on every arrival.  Any
 * disagreement with the logged verdicts or manifest counters lands in
 * `problems`.  Hash mismatch throws std::runtime_error.
 */
struct VerifyReport {
    std::size_t events = 0;
    std::string log_sha256;
    std::uint64_t arrivals = 0;
    std::uint64_t verified = 0;
    std::uint64_t forged = 0;
    std::uint64_t broken = 0;
    std::uint64_t ambiguous = 0;
    std::uint64_t mismatch = 0;
    std::uint64_t discarded_stripped = 0;
    std::uint64_t discarded_unflagged = 0;
    std::uint64_t bloom_decoded = 0;
    std::uint64_t accepted_plain = 0;
    std::vector<std::string> problems;

    bool ok() const { return problems.empty(); }
};

VerifyReport verify_run(const std::filesystem::path& log_path,
                        const std::filesystem::path& manifest_path);

}  // namespace pppt

#endif
