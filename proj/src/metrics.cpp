#include "pppt/metrics.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pppt {

namespace {

/*
 * Localizes one missing (origin, seq) by walking the root's known path from
 * the source upward: the deepest forwarder whose routing entry (for the
 * previous path node) recorded the seq is the last good hop; its successor
 * on the path is blamed.  No record anywhere blames the first hop.  A hole
 * in the middle of the evidence yields a candidate set spanning it.
 */
std::vector<NodeId> localize(const Dodag& d, const PathTrace& path, NodeId origin,
                             std::uint32_t seq) {
    // path = [source, f1, ..., root]; recorders are the interior nodes.
    std::vector<bool> recorded(path.size(), false);
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
        const RoutingEntry* e = d.rt(path[i]).find(path[i - 1]);
        recorded[i] = e && e->has_seq(origin, seq);
    }
    std::size_t deepest = 0;      // last index with a record (0 = none: the source)
    std::size_t first_gap = 1;    // first interior index without a record
    for (std::size_t i = 1; i + 1 < path.size(); ++i)
        if (recorded[i]) deepest = i;
    while (first_gap + 1 < path.size() && recorded[first_gap]) ++first_gap;

    if (deepest + 1 <= first_gap) {
        // Contiguous prefix of evidence: blame the successor of the last
        // recorder (the first hop when nothing was recorded).
        return {path[deepest + 1]};
    }
    // Evidence resumes beyond a hole; every node in the hole is a candidate.
    std::vector<NodeId> out;
    for (std::size_t i = first_gap; i <= deepest + 1 && i < path.size(); ++i)
        out.push_back(path[i]);
    return out;
}

}  // namespace

std::vector<DropRecord> detect_drops(const Dodag& d, const RootSeen& seen) {
    std::vector<DropRecord> out;
    for (const auto& [origin, seqs] : seen) {
        if (seqs.empty()) continue;
        auto path_it = d.root_paths.find(origin);
        if (path_it == d.root_paths.end()) continue;
        const std::uint32_t max_seen = seqs.back();
        std::size_t idx = 0;
        for (std::uint32_t s = 1; s <= max_seen; ++s) {
            if (idx < seqs.size() && seqs[idx] == s) {
                ++idx;
                continue;
            }
            out.push_back({origin, s, localize(d, path_it->second, origin, s)});
        }
    }
    return out;
}

std::size_t drop_event_count(const std::vector<DropRecord>& drops) {
    // One event per maximal run of consecutive seqs within an origin.
    std::vector<std::pair<NodeId, std::uint32_t>> keys;
    keys.reserve(drops.size());
    for (const DropRecord& r : drops) keys.emplace_back(r.origin, r.seq);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::size_t events = 0;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (i == 0 || keys[i - 1].first != keys[i].first ||
            keys[i - 1].second + 1 != keys[i].second)
            ++events;
    }
    return events;
}

double pddr(std::size_t detected, std::size_t actual) {
    if (actual == 0) {
        if (detected != 0) throw std::logic_error("drop overdetection");
        return 1.0;
    }
    if (detected > actual) throw std::logic_error("drop overdetection");
    return static_cast<double>(detected) / static_cast<double>(actual);
}

std::vector<LossPoint> packet_loss_series(const EventLog& log, std::uint64_t window) {
    if (window == 0) throw std::invalid_argument("loss window must be positive");
    // A point after N generations counts how many of those N packets ever
    // arrived, anywhere later in the log, so in-flight packets at the
    // sampling instant are not mistaken for losses.
    std::vector<std::pair<NodeId, std::uint32_t>> order;
    std::set<std::pair<NodeId, std::uint32_t>> arrived;
    for (const EventRecord& e : log) {
        if (e.kind == EventKind::Gen)
            order.emplace_back(e.origin, e.seq);
        else if (e.kind == EventKind::Arrive)
            arrived.insert({e.origin, e.seq});
    }
    std::vector<LossPoint> out;
    std::uint64_t delivered = 0;
    auto point = [&](std::uint64_t sent) {
        const double rate =
            sent ? static_cast<double>(sent - delivered) / static_cast<double>(sent) : 0.0;
        out.push_back({sent, delivered, rate});
    };
    for (std::uint64_t i = 0; i < order.size(); ++i) {
        if (arrived.count(order[i])) ++delivered;
        if ((i + 1) % window == 0) point(i + 1);
    }
    if (out.empty() || out.back().sent != order.size()) point(order.size());
    return out;
}

PgtStats pgt_series(const EventLog& log) {
    PgtStats stats;
    // Arrival tick per in-flight (origin, seq); gen counts as arrival at the
    // source, each rx/arrive closes one hop.
    std::map<std::pair<NodeId, std::uint32_t>, std::uint64_t> last_arrival;
    for (const EventRecord& e : log) {
        const auto key = std::make_pair(e.origin, e.seq);
        switch (e.kind) {
            case EventKind::Gen:
                last_arrival[key] = e.time_ticks;
                break;
            case EventKind::Rx:
            case EventKind::Arrive: {
                auto it = last_arrival.find(key);
                if (it == last_arrival.end()) break;
                const double minutes =
                    static_cast<double>(e.time_ticks - it->second) /
                    (static_cast<double>(SimTime::kTicksPerSecond) * 60.0);
                stats.per_hop_minutes.push_back(minutes);
                if (e.kind == EventKind::Arrive)
                    last_arrival.erase(it);
                else
                    it->second = e.time_ticks;
                break;
            }
            default:
                break;
        }
    }
    if (!stats.per_hop_minutes.empty()) {
        double sum = 0.0;
        for (double v : stats.per_hop_minutes) sum += v;
        stats.average_minutes = sum / static_cast<double>(stats.per_hop_minutes.size());
    }
    return stats;
}

SizeStats measured_provenance_size(const EventLog& log) {
    SizeStats s;
    for (const EventRecord& e : log) {
        if (e.kind != EventKind::Arrive) continue;
        const std::string plen = detail_value(e.detail, "plen");
        if (plen.empty()) continue;
        const std::size_t n = static_cast<std::size_t>(std::stoul(plen));
        if (s.samples == 0) {
            s.min_bytes = s.max_bytes = n;
        } else {
            s.min_bytes = std::min(s.min_bytes, n);
            s.max_bytes = std::max(s.max_bytes, n);
        }
        ++s.samples;
    }
    return s;
}

std::uint64_t actual_drop_count(const EventLog& log) {
    std::uint64_t n = 0;
    for (const EventRecord& e : log)
        if (e.kind == EventKind::Lost || e.kind == EventKind::MalDrop) ++n;
    return n;
}

std::string metrics_csv(const std::vector<MetricRow>& rows) {
    std::ostringstream out;
    out << "scenario_id,scheme,hops,interval_s,metric,value\n";
    for (const MetricRow& r : rows) {
        out << r.scenario_id << ',' << r.scheme << ',' << r.hops << ',' << r.interval_s
            << ',' << r.metric << ',';
        out.precision(12);
        out << r.value << '\n';
    }
    return out.str();
}

}  // namespace pppt
