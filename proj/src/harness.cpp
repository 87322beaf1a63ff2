/*
 * Artifact plumbing: per-run output directories, threaded grid fan-out
 * with per-figure CSV aggregation, and the log-replay verifier.
 */
#include "pppt/harness.hpp"

#include <atomic>
#include <deque>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "pppt/baseline_codec.hpp"
#include "pppt/digest.hpp"
#include "pppt/pppt_codec.hpp"

namespace pppt {
namespace {

using nlohmann::json;

void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << body;
    if (!out) throw std::runtime_error("short write to " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream body;
    body << in.rdbuf();
    return body.str();
}

MetricRow row_for(const RunResult& r, std::string metric, double value) {
    return {r.config.scenario_id, to_string(r.config.scheme), r.hops(),
            r.config.packet_interval_s, std::move(metric), value};
}

double cumulative_loss(const RunCounters& c) {
    if (c.generated == 0) return 0.0;
    return 1.0 - static_cast<double>(c.arrived) / static_cast<double>(c.generated);
}

json manifest_json(const RunResult& r, const std::string& log_text,
                   const std::string& log_hash) {
    const json cfg = scenario_to_json(r.config);
    const std::string cfg_text = cfg.dump();
    const auto& c = r.counters;
    json results = {{"generated", c.generated},
                    {"arrived", c.arrived},
                    {"duplicates", c.duplicates},
                    {"lost_natural", c.lost_natural},
                    {"dropped_malicious", c.dropped_malicious},
                    {"stripped", c.stripped},
                    {"forged_injected", c.forged_injected},
                    {"discarded_stripped", c.discarded_stripped},
                    {"discarded_unflagged", c.discarded_unflagged},
                    {"verified", c.verified},
                    {"forged_detected", c.forged_detected},
                    {"broken", c.broken},
                    {"ambiguous", c.ambiguous},
                    {"mismatch", c.mismatch},
                    {"bloom_decoded", c.bloom_decoded},
                    {"accepted_plain", c.accepted_plain},
                    {"detected_drop_events", drop_event_count(r.detected_drops)},
                    {"final_tick", r.final_tick},
                    {"hops", r.hops()}};
    return json{{"tool", "ppptsim"},
                {"scenario_id", r.config.scenario_id},
                {"config", cfg},
                {"config_sha256", hex(compute_digest(cfg_text))},
                {"event_log_lines", r.log.size()},
                {"event_log_sha256", log_hash},
                {"event_log_bytes", log_text.size()},
                {"results", results}};
}

std::vector<MetricRow> loss_series_rows(const RunResult& r, std::uint64_t window) {
    std::vector<MetricRow> rows;
    for (const LossPoint& p : packet_loss_series(r.log, window))
        rows.push_back(
            row_for(r, "loss_rate_after_" + std::to_string(p.sent), p.loss_rate));
    return rows;
}

std::vector<std::uint8_t> unhex(const std::string& s) {
    if (s.size() % 2 != 0) throw std::invalid_argument("odd-length hex string");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument("bad hex digit");
    };
    std::vector<std::uint8_t> out(s.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint8_t>(nibble(s[2 * i]) << 4 | nibble(s[2 * i + 1]));
    return out;
}

}  // namespace

std::vector<MetricRow> summary_rows(const RunResult& r) {
    const auto& c = r.counters;
    std::vector<MetricRow> rows;
    auto add = [&](const char* metric, double v) { rows.push_back(row_for(r, metric, v)); };
    add("generated", static_cast<double>(c.generated));
    add("arrived", static_cast<double>(c.arrived));
    add("duplicates", static_cast<double>(c.duplicates));
    add("lost_natural", static_cast<double>(c.lost_natural));
    add("dropped_malicious", static_cast<double>(c.dropped_malicious));
    add("stripped", static_cast<double>(c.stripped));
    add("forged_injected", static_cast<double>(c.forged_injected));
    add("discarded_stripped", static_cast<double>(c.discarded_stripped));
    add("discarded_unflagged", static_cast<double>(c.discarded_unflagged));
    add("verified", static_cast<double>(c.verified));
    add("forged_detected", static_cast<double>(c.forged_detected));
    add("broken", static_cast<double>(c.broken));
    add("ambiguous", static_cast<double>(c.ambiguous));
    add("mismatch", static_cast<double>(c.mismatch));
    add("bloom_decoded", static_cast<double>(c.bloom_decoded));
    add("accepted_plain", static_cast<double>(c.accepted_plain));
    add("cumulative_loss_rate", cumulative_loss(c));
    const std::size_t detected = drop_event_count(r.detected_drops);
    const std::uint64_t actual = actual_drop_count(r.log);
    add("detected_drop_events", static_cast<double>(detected));
    add("actual_drops", static_cast<double>(actual));
    add("pddr", pddr(detected, static_cast<std::size_t>(actual)));
    add("avg_pgt_min", pgt_series(r.log).average_minutes);
    const SizeStats sz = measured_provenance_size(r.log);
    if (sz.samples > 0) {
        add("provenance_size_bytes_min", static_cast<double>(sz.min_bytes));
        add("provenance_size_bytes_max", static_cast<double>(sz.max_bytes));
    }
    add("network_energy_mJ", network_energy_mJ(r.energy));
    add("avg_power_per_node_mW",
        avg_power_mW(network_energy_mJ(r.energy),
                     static_cast<double>(r.energy.duration_ticks) / SimTime::kTicksPerSecond,
                     r.energy.nodes.size()));
    return rows;
}

RunArtifacts execute_run(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                         std::optional<std::uint64_t> seed_override) {
    ScenarioConfig effective = cfg;
    if (seed_override) effective.adversary.rng_seed = *seed_override;

    RunArtifacts art;
    art.result = run(effective);
    art.dir = out_dir;
    std::filesystem::create_directories(out_dir);

    const std::string log_text = serialize_log(art.result.log);
    art.log_sha256 = log_hash(art.result.log);
    write_file(out_dir / "events.log", log_text);
    write_file(out_dir / "manifest.json",
               manifest_json(art.result, log_text, art.log_sha256).dump(2) + "\n");
    write_file(out_dir / "metrics.csv", metrics_csv(summary_rows(art.result)));
    write_file(out_dir / "loss_series.csv", metrics_csv(loss_series_rows(art.result, 200)));
    return art;
}

namespace {

/* Runs every preset scenario on a small pool; results land in preset order. */
std::vector<RunArtifacts> execute_all(const GridPreset& preset,
                                      const std::filesystem::path& out_dir,
                                      unsigned threads) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(preset.runs.size()));

    std::vector<RunArtifacts> results(preset.runs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < preset.runs.size(); i = next.fetch_add(1)) {
            const ScenarioConfig& cfg = preset.runs[i];
            results[i] = execute_run(cfg, out_dir / "runs" / cfg.scenario_id);
        }
    };
    std::vector<std::future<void>> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.push_back(std::async(std::launch::async, worker));
    for (auto& f : pool) f.get();  // rethrows worker failures
    return results;
}

double run_psize(const RunResult& r) {
    const SizeStats sz = measured_provenance_size(r.log);
    if (sz.samples == 0) throw std::runtime_error("no provenance arrivals in " +
                                                  r.config.scenario_id);
    return static_cast<double>(sz.max_bytes);
}

double run_power(const RunResult& r) {
    return avg_power_mW(network_energy_mJ(r.energy),
                        static_cast<double>(r.energy.duration_ticks) / SimTime::kTicksPerSecond,
                        r.energy.nodes.size());
}

double run_pddr(const RunResult& r) {
    return pddr(drop_event_count(r.detected_drops),
                static_cast<std::size_t>(actual_drop_count(r.log)));
}

/* Group key "fig13_m3" from scenario id "fig13_m3_s42". */
std::string seed_group(const std::string& id) {
    const auto pos = id.rfind("_s");
    return pos == std::string::npos ? id : id.substr(0, pos);
}

std::filesystem::path write_rows(const std::filesystem::path& out_dir, const std::string& name,
                                 const std::vector<MetricRow>& rows) {
    const auto path = out_dir / name;
    write_file(path, metrics_csv(rows));
    return path;
}

}  // namespace

GridOutcome run_grid(const std::string& preset_name, const std::filesystem::path& out_dir,
                     std::uint64_t base_seed, unsigned threads) {
    const GridPreset preset = make_preset(preset_name, base_seed);
    std::filesystem::create_directories(out_dir);
    const auto results = execute_all(preset, out_dir, threads);

    GridOutcome out;
    out.preset = preset.name;
    out.run_count = results.size();

    if (preset.name == "fig7") {
        std::vector<MetricRow> rows;
        for (const auto& a : results)
            rows.push_back(row_for(a.result, "network_energy_mJ",
                                   network_energy_mJ(a.result.energy)));
        out.csv_files.push_back(write_rows(out_dir, "fig7_energy.csv", rows));
    } else if (preset.name == "fig8" || preset.name == "fig9") {
        std::vector<MetricRow> rows;
        for (const auto& a : results)
            rows.push_back(row_for(a.result, "avg_power_per_node_mW", run_power(a.result)));
        out.csv_files.push_back(write_rows(
            out_dir, preset.name == "fig8" ? "fig8_power.csv" : "fig9_power_nodc.csv", rows));
    } else if (preset.name == "fig11" || preset.name == "fig12") {
        std::vector<MetricRow> rows;
        for (const auto& a : results)
            rows.push_back(row_for(a.result, "provenance_size_bytes", run_psize(a.result)));
        out.csv_files.push_back(write_rows(out_dir, preset.name + "_psize.csv", rows));
    } else if (preset.name == "fig13") {
        std::vector<MetricRow> detection;
        std::vector<MetricRow> series;
        // Seed-averaged rows per drop-rate group, in first-appearance order.
        std::vector<std::string> order;
        std::map<std::string, std::pair<double, unsigned>> pddr_acc;
        std::map<std::string, std::pair<double, unsigned>> loss_acc;
        std::map<std::string, const RunResult*> first_of_group;
        for (const auto& a : results) {
            const RunResult& r = a.result;
            const double p = run_pddr(r);
            const double l = cumulative_loss(r.counters);
            detection.push_back(row_for(r, "pddr", p));
            detection.push_back(row_for(r, "cumulative_loss_rate", l));
            const std::string g = seed_group(r.config.scenario_id);
            if (!pddr_acc.count(g)) {
                order.push_back(g);
                first_of_group[g] = &r;
            }
            pddr_acc[g].first += p;
            ++pddr_acc[g].second;
            loss_acc[g].first += l;
            ++loss_acc[g].second;
        }
        for (const std::string& g : order) {
            const RunResult& rep = *first_of_group.at(g);
            MetricRow base = row_for(rep, "", 0.0);
            base.scenario_id = g + "_avg";
            MetricRow avg_pddr = base;
            avg_pddr.metric = "pddr_avg";
            avg_pddr.value = pddr_acc[g].first / pddr_acc[g].second;
            MetricRow avg_loss = base;
            avg_loss.metric = "cumulative_loss_rate_avg";
            avg_loss.value = loss_acc[g].first / loss_acc[g].second;
            detection.push_back(avg_pddr);
            detection.push_back(avg_loss);
            for (MetricRow row : loss_series_rows(rep, 200)) series.push_back(row);
        }
        out.csv_files.push_back(write_rows(out_dir, "fig13_detection.csv", detection));
        out.csv_files.push_back(write_rows(out_dir, "fig13_loss_series.csv", series));
    } else if (preset.name == "fig14") {
        std::vector<MetricRow> rows;
        std::map<unsigned, double> with_prov, without;
        for (const auto& a : results) {
            const double v = pgt_series(a.result.log).average_minutes;
            rows.push_back(row_for(a.result, "avg_pgt_min", v));
            (a.result.config.scheme == Scheme::Pppt ? with_prov
                                                    : without)[a.result.hops()] = v;
        }
        for (const auto& [hops, v] : with_prov) {
            auto it = without.find(hops);
            if (it == without.end()) continue;
            rows.push_back({"fig14_h" + std::to_string(hops) + "_delta", "delta", hops, 10.0,
                            "pgt_overhead_min", v - it->second});
        }
        out.csv_files.push_back(write_rows(out_dir, "fig14_pgt.csv", rows));
    } else {
        throw std::logic_error("preset " + preset.name + " has no aggregation rule");
    }
    return out;
}

namespace {

ProvenanceKind kind_for(Scheme s) {
    switch (s) {
        case Scheme::Pppt: return ProvenanceKind::Pppt;
        case Scheme::Pid: return ProvenanceKind::Pid;
        case Scheme::Bloom: return ProvenanceKind::Bloom;
        case Scheme::None: break;
    }
    throw std::logic_error("scheme carries no provenance");
}

}  // namespace

VerifyReport verify_run(const std::filesystem::path& log_path,
                        const std::filesystem::path& manifest_path) {
    VerifyReport rep;

    json manifest;
    try {
        manifest = json::parse(read_file(manifest_path));
    } catch (const json::parse_error& e) {
        throw std::runtime_error("manifest " + manifest_path.string() + ": " + e.what());
    }
    const std::string log_text = read_file(log_path);
    rep.log_sha256 = hex(compute_digest(log_text));
    const std::string expected = manifest.value("event_log_sha256", std::string{});
    if (expected.empty())
        throw std::runtime_error("manifest has no event_log_sha256; cannot verify");
    if (rep.log_sha256 != expected)
        throw std::runtime_error("event log hash mismatch: log is truncated or corrupted");

    std::istringstream log_in(log_text);
    const EventLog log = parse_log(log_in);
    rep.events = log.size();
    if (manifest.contains("event_log_lines") &&
        manifest["event_log_lines"].get<std::size_t>() != log.size())
        rep.problems.push_back("event count differs from manifest");

    const ScenarioConfig cfg = parse_scenario(manifest.at("config"));
    Dodag d = build_dodag(cfg.topology);
    const Scheme scheme = cfg.scheme;

    // Verdicts the replay produces, awaiting the matching logged line.
    std::deque<std::pair<EventKind, std::string>> pending;
    auto expect = [&](EventKind kind, std::string detail) {
        pending.emplace_back(kind, std::move(detail));
    };

    for (const EventRecord& ev : log) {
        switch (ev.kind) {
            case EventKind::Rx: {
                if (scheme != Scheme::Pppt) break;
                const NodeId from{static_cast<std::uint8_t>(
                    std::stoi(detail_value(ev.detail, "from")))};
                d.rt(ev.node).record_seq(from, ev.origin, ev.seq, cfg.interval_I);
                break;
            }
            case EventKind::Dup: {
                if (scheme != Scheme::Pppt) break;
                const NodeId from{static_cast<std::uint8_t>(
                    std::stoi(detail_value(ev.detail, "from")))};
                d.rt(ev.node).record_seq(from, ev.origin, ev.seq, 0);
                break;
            }
            case EventKind::Reset:
                if (scheme == Scheme::Pppt) reset_interval(d);
                break;
            case EventKind::Arrive: {
                ++rep.arrivals;
                if (scheme == Scheme::Pppt) {
                    const NodeId from{static_cast<std::uint8_t>(
                        std::stoi(detail_value(ev.detail, "from")))};
                    d.rt(ev.node).record_seq(from, ev.origin, ev.seq, 0);
                }
                if (scheme == Scheme::None) {
                    ++rep.accepted_plain;
                    break;
                }
                DataPacket pkt;
                pkt.origin = ev.origin;
                pkt.seq = ev.seq;
                pkt.payload_len = cfg.payload_bytes;
                pkt.eh_prov_flag = detail_value(ev.detail, "flag") == "1";
                const std::string prov = detail_value(ev.detail, "prov");
                if (prov != "-") {
                    pkt.provenance = deserialize_provenance(unhex(prov), kind_for(scheme));
                    if (detail_value(ev.detail, "digest") == "ok")
                        refresh_digest(pkt);  // reproduce a matching digest
                    else
                        pkt.digest.fill(0);  // logged as failing; keep it failing
                }
                const FlagCheck fc = check_eh_flag(pkt);
                if (!fc.accept) {
                    if (fc.reason == "provenance stripped")
                        ++rep.discarded_stripped;
                    else
                        ++rep.discarded_unflagged;
                    expect(EventKind::Discard, "reason=" + fc.reason);
                    break;
                }
                if (scheme == Scheme::Bloom) {
                    ++rep.bloom_decoded;
                    std::string set;
                    for (NodeId m : bf_decode(pkt, d)) {
                        if (!set.empty()) set += '-';
                        set += to_string(m);
                    }
                    expect(EventKind::Decode, "result=members;set=" + (set.empty() ? "-" : set));
                    break;
                }
                const DecodeResult dr =
                    (scheme == Scheme::Pppt) ? decode(pkt, d) : pid_decode(pkt, d);
                switch (dr.status) {
                    case DecodeStatus::Verified: ++rep.verified; break;
                    case DecodeStatus::Forged: ++rep.forged; break;
                    case DecodeStatus::Broken: ++rep.broken; break;
                    case DecodeStatus::Ambiguous: ++rep.ambiguous; break;
                    case DecodeStatus::Mismatch: ++rep.mismatch; break;
                }
                std::string detail = std::string("result=") + to_string(dr.status);
                detail += ";fault=" + (dr.fault.assigned() ? to_string(dr.fault) : "-");
                detail += ";trace=" + (dr.trace.empty() ? "-" : to_string(dr.trace));
                expect(EventKind::Decode, detail);
                break;
            }
            case EventKind::Decode:
            case EventKind::Discard: {
                if (pending.empty()) {
                    rep.problems.push_back("unexpected " + std::string(to_string(ev.kind)) +
                                           " for (" + to_string(ev.origin) + "," +
                                           std::to_string(ev.seq) + ")");
                    break;
                }
                auto [kind, detail] = pending.front();
                pending.pop_front();
                if (kind != ev.kind || detail != ev.detail)
                    rep.problems.push_back(
                        "replay disagrees for (" + to_string(ev.origin) + "," +
                        std::to_string(ev.seq) + "): expected \"" + detail + "\" got \"" +
                        ev.detail + "\"");
                break;
            }
            default:
                break;
        }
    }
    if (!pending.empty())
        rep.problems.push_back(std::to_string(pending.size()) +
                               " verdicts missing from the log");

    if (manifest.contains("results")) {
        const json& res = manifest["results"];
        auto check = [&](const char* key, std::uint64_t mine) {
            if (res.contains(key) && res[key].get<std::uint64_t>() != mine)
                rep.problems.push_back(std::string("manifest ") + key + "=" +
                                       res[key].dump() + " but replay counted " +
                                       std::to_string(mine));
        };
        check("arrived", rep.arrivals);
        check("verified", rep.verified);
        check("forged_detected", rep.forged);
        check("broken", rep.broken);
        check("ambiguous", rep.ambiguous);
        check("mismatch", rep.mismatch);
        check("discarded_stripped", rep.discarded_stripped);
        check("discarded_unflagged", rep.discarded_unflagged);
        check("bloom_decoded", rep.bloom_decoded);
        check("accepted_plain", rep.accepted_plain);
    }
    return rep;
}

}  // namespace pppt
