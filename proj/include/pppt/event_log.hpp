/*
 * Totally ordered event log of a simulation run.  Serialized form is one
 * record per line:
 *
 *   time_ticks,node,event_kind,origin,seq,detail
 *
 * where detail is `-` or a `key=value;key=value` list (never contains a
 * comma).  The log is the ground truth for reports: every metric the
 * pipeline emits is computable from the log alone, and a run's identity is
 * the SHA-256 of its serialized log.
 */
#ifndef PPPT_EVENT_LOG_HPP
#define PPPT_EVENT_LOG_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pppt/types.hpp"

namespace pppt {

enum class EventKind : std::uint8_t {
    Gen,      // source generated a packet
    Tx,       // node started transmitting to its parent
    Rx,       // forwarder received from a child (seq gets recorded)
    Lost,     // transmission lost on the link (node = intended receiver)
    MalDrop,  // malicious node swallowed the packet
    Strip,    // malicious node removed the provenance field
    Forge,    // malicious node replaced the provenance pair
    Arrive,   // packet reached the root
    Discard,  // root policy discarded the arrival (flag check)
    Decode,   // root decode/verification outcome
    Dup,      // duplicate (origin, seq) arrival, not double-counted
    Detect,   // root detected a missing packet (gap scan), with localization
    Reset,    // interval boundary: non-root seq histories cleared
};

const char* to_string(EventKind kind);
EventKind event_kind_from_string(const std::string& s);

struct EventRecord {
    std::uint64_t time_ticks = 0;
    NodeId node;        // where it happened (0 = network-wide)
    EventKind kind = EventKind::Gen;
    NodeId origin;      // packet origin (0 when not packet-bound)
    std::uint32_t seq = 0;
    std::string detail;  // `key=value;...`, empty serialized as `-`
};

using EventLog = std::vector<EventRecord>;

std::string format_event(const EventRecord& e);
EventRecord parse_event(const std::string& line);  // throws on malformed input

std::string serialize_log(const EventLog& log);
EventLog parse_log(std::istream& in);

/* SHA-256 (hex) of the serialized log; the run's reproducibility witness. */
std::string log_hash(const EventLog& log);

/* Returns the value for `key` in a detail string, or "" if missing. */
std::string detail_value(const std::string& detail, const std::string& key);

}  // namespace pppt

#endif
