/*
 * Root-side drop detection/localization and the report metrics derived
 * from a run's event log: measured provenance size, drop detection ratio,
 * cumulative packet-loss series and per-hop path-generation times.
 */
#ifndef PPPT_METRICS_HPP
#define PPPT_METRICS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pppt/dodag.hpp"
#include "pppt/event_log.hpp"

namespace pppt {

/* Per-origin seqs that arrived at the root (sorted, unique). */
using RootSeen = std::map<NodeId, std::vector<std::uint32_t>>;

/*
 * A missing packet with the nodes the gap scan blames.  `localized` is a
 * single node when the recorded evidence is contiguous (the successor of
 * the deepest node that recorded the seq); a candidate set otherwise.
 */
struct DropRecord {
    NodeId origin;
    std::uint32_t seq = 0;
    std::vector<NodeId> localized;
};

/*
 * Gap scan: for every origin, any seq below the maximum seen at the root
 * that never arrived is reported missing and localized by walking the
 * recorded seq histories along the root's known path for that origin.
 * Must run before an interval reset erases the evidence it depends on.
 */
std::vector<DropRecord> detect_drops(const Dodag& d, const RootSeen& seen);

/*
 * Number of drop events among detected missing packets: one event per
 * maximal run of consecutive missing seqs per origin.  A gap is revealed
 * and investigated as a unit, so consecutive drops mask each other; this
 * count is the l_p used for the detection ratio.
 */
std::size_t drop_event_count(const std::vector<DropRecord>& drops);

/*
 * Drop detection ratio l_p / t_p.  No drops at all (t_p = 0) is a perfect
 * score (1.0).  Detecting more than happened is a contract violation and
 * throws std::logic_error ("drop overdetection").
 */
double pddr(std::size_t detected, std::size_t actual);

/* Cumulative loss rate sampled every `window` generated packets; a point
 * counts, among the first `sent` packets, those that never arrived at all
 * (in-flight packets at the sampling instant are not losses). */
struct LossPoint {
    std::uint64_t sent = 0;
    std::uint64_t delivered = 0;
    double loss_rate = 0.0;
};

std::vector<LossPoint> packet_loss_series(const EventLog& log, std::uint64_t window);

/* Per-hop forwarding deltas in minutes, plus their mean. */
struct PgtStats {
    std::vector<double> per_hop_minutes;  // event order
    double average_minutes = 0.0;
};

PgtStats pgt_series(const EventLog& log);

/*
 * Measured provenance sizes over (non-duplicate) root arrivals, from the
 * log's `plen` values.  Returns the multiset of observed sizes as
 * min/max/count; callers assert exactness per scheme.
 */
struct SizeStats {
    std::size_t min_bytes = 0;
    std::size_t max_bytes = 0;
    std::uint64_t samples = 0;
};

SizeStats measured_provenance_size(const EventLog& log);

/* Counts of drop causes recoverable from the log (ground truth t_p). */
std::uint64_t actual_drop_count(const EventLog& log);

/* One row of the stable report schema. */
struct MetricRow {
    std::string scenario_id;
    std::string scheme;
    unsigned hops = 0;         // forwarders between source and root
    double interval_s = 0.0;
    std::string metric;
    double value = 0.0;
};

/* Renders rows under the fixed header; stable order = input order. */
std::string metrics_csv(const std::vector<MetricRow>& rows);

}  // namespace pppt

#endif
