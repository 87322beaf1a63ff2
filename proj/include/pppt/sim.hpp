/*
 * Deterministic discrete-event simulator for multipoint-to-point traffic on
 * a DODAG.  One run is strictly single-threaded: events execute in
 * (tick, insertion) order off one queue and all randomness comes from one
 * seeded generator, so a (config, seed) pair reproduces the event log
 * byte for byte.
 *
 * Per-hop model: receive, process (base cpu plus one encode step when a
 * provenance scheme is active), transmit.  Airtime is proportional to the
 * on-air bytes (payload + provenance + digest) at the configured bitrate.
 * No MAC contention, retransmissions or queueing delays are modeled.
 *
 * Energy accounting partitions each node's ticks into tx/rx/cpu/lpm.  With
 * duty cycling the radio is on only for packet airtime plus a small idle
 * listening fraction; without it the radio listens whenever not
 * transmitting (lpm stays 0).
 */
#ifndef PPPT_SIM_HPP
#define PPPT_SIM_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pppt/adversary.hpp"
#include "pppt/dodag.hpp"
#include "pppt/event_log.hpp"
#include "pppt/metrics.hpp"
#include "pppt/pppt_codec.hpp"
#include "pppt/types.hpp"

namespace pppt {

enum class Scheme : std::uint8_t { Pppt, Pid, Bloom, None };

const char* to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct ScenarioConfig {
    std::string scenario_id = "run";
    TopologyGraph topology;
    std::vector<NodeId> sources;        // empty: every Source-role node
    double packet_interval_s = 10.0;
    std::uint32_t payload_bytes = 200;
    double sim_duration_s = 600.0;
    Scheme scheme = Scheme::Pppt;
    bool duty_cycling = true;
    std::uint32_t interval_I = kDefaultIntervalPackets;  // packets per source per interval
    AdversaryConfig adversary;

    // Tick-cost model.
    std::uint32_t cpu_ticks_forward = 20;  // per-hop base processing
    std::uint32_t cpu_ticks_encode = 50;   // per provenance encode step
    double idle_radio_fraction = 0.01;     // duty-cycled idle listening share
    double bitrate_bps = 250000.0;
};

/* Per-node tick partition; tx + rx + cpu + lpm == run duration. */
struct NodeEnergy {
    std::uint64_t tx_ticks = 0;
    std::uint64_t rx_ticks = 0;
    std::uint64_t cpu_ticks = 0;
    std::uint64_t lpm_ticks = 0;

    std::uint64_t total_ticks() const { return tx_ticks + rx_ticks + cpu_ticks + lpm_ticks; }
};

struct EnergyLedger {
    std::map<NodeId, NodeEnergy> nodes;
    std::uint64_t duration_ticks = 0;
};

/*
 * Energy in millijoules from the tick partition, at 3 V on a 32768 Hz
 * timer with the platform's current draws (mA): tx 19.5, rx 21.8,
 * cpu 1.8, lpm 0.0545, times the byte-width factor 8.
 */
double energy_mJ(const NodeEnergy& e);
double energy_mJ(const EnergyLedger& ledger, NodeId node);
double network_energy_mJ(const EnergyLedger& ledger);

/* Average power in mW; throws for zero duration or node count. */
double avg_power_mW(double total_energy_mJ, double duration_s, std::size_t node_count);

struct RunCounters {
    std::uint64_t generated = 0;
    std::uint64_t arrived = 0;            // unique (origin, seq) at the root
    std::uint64_t duplicates = 0;
    std::uint64_t lost_natural = 0;
    std::uint64_t dropped_malicious = 0;
    std::uint64_t stripped = 0;           // strip actions applied in flight
    std::uint64_t forged_injected = 0;    // forge actions applied in flight
    std::uint64_t discarded_stripped = 0;
    std::uint64_t discarded_unflagged = 0;
    std::uint64_t verified = 0;
    std::uint64_t forged_detected = 0;
    std::uint64_t broken = 0;
    std::uint64_t ambiguous = 0;
    std::uint64_t mismatch = 0;
    std::uint64_t bloom_decoded = 0;      // membership-only decodes
    std::uint64_t accepted_plain = 0;     // scheme none arrivals
};

struct Delivery {
    NodeId origin;
    std::uint32_t seq = 0;
    std::size_t prov_len = 0;
    DecodeStatus status = DecodeStatus::Verified;
    bool policy_discarded = false;
    bool checked = false;  // false for scheme none / membership-only decodes
};

struct RunResult {
    ScenarioConfig config;
    Dodag dodag;  // end-of-run state, including recorded histories
    EventLog log;
    EnergyLedger energy;
    RunCounters counters;
    RootSeen seen_at_root;
    std::map<NodeId, std::uint32_t> generated_per_source;
    std::vector<Delivery> deliveries;
    std::vector<DropRecord> detected_drops;  // merged over all gap scans
    std::uint64_t final_tick = 0;

    /* Forwarder count on the (first) source's path; report label. */
    unsigned hops() const;
};

/* Validates the config and executes the run. */
RunResult run(const ScenarioConfig& cfg);

/* On-air bytes for a packet under a scheme: payload + provenance + digest. */
std::size_t on_air_bytes(const ScenarioConfig& cfg, const DataPacket& pkt);

}  // namespace pppt

#endif
