#include "pppt/event_log.hpp"

#include <array>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "pppt/digest.hpp"

namespace pppt {

namespace {
constexpr std::array<const char*, 13> kKindNames = {
    "gen",  "tx",     "rx",     "lost", "maldrop", "strip", "forge",
    "arrive", "discard", "decode", "dup", "detect", "reset",
};
}

const char* to_string(EventKind kind) {
    return kKindNames[static_cast<std::size_t>(kind)];
}

EventKind event_kind_from_string(const std::string& s) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i)
        if (s == kKindNames[i]) return static_cast<EventKind>(i);
    throw std::invalid_argument("unknown event kind: " + s);
}

std::string format_event(const EventRecord& e) {
    std::ostringstream out;
    out << e.time_ticks << ',' << to_string(e.node) << ',' << to_string(e.kind) << ','
        << to_string(e.origin) << ',' << e.seq << ','
        << (e.detail.empty() ? "-" : e.detail);
    return out.str();
}

EventRecord parse_event(const std::string& line) {
    std::array<std::string, 6> fields;
    std::size_t start = 0;
    for (int i = 0; i < 5; ++i) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos)
            throw std::invalid_argument("malformed event record: " + line);
        fields[static_cast<std::size_t>(i)] = line.substr(start, comma - start);
        start = comma + 1;
    }
    fields[5] = line.substr(start);

    EventRecord e;
    e.time_ticks = std::stoull(fields[0]);
    const unsigned long node = std::stoul(fields[1]);
    const unsigned long origin = std::stoul(fields[3]);
    if (node > 255 || origin > 255)
        throw std::invalid_argument("node id out of range: " + line);
    e.node = NodeId{static_cast<std::uint8_t>(node)};
    e.kind = event_kind_from_string(fields[2]);
    e.origin = NodeId{static_cast<std::uint8_t>(origin)};
    e.seq = static_cast<std::uint32_t>(std::stoul(fields[4]));
    e.detail = (fields[5] == "-") ? std::string{} : fields[5];
    return e;
}

std::string serialize_log(const EventLog& log) {
    std::string out;
    for (const EventRecord& e : log) {
        out += format_event(e);
        out += '\n';
    }
    return out;
}

EventLog parse_log(std::istream& in) {
    EventLog log;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        log.push_back(parse_event(line));
    }
    return log;
}

std::string log_hash(const EventLog& log) { return hex(compute_digest(serialize_log(log))); }

std::string detail_value(const std::string& detail, const std::string& key) {
    std::size_t pos = 0;
    while (pos < detail.size()) {
        std::size_t end = detail.find(';', pos);
        if (end == std::string::npos) end = detail.size();
        const std::size_t eq = detail.find('=', pos);
        if (eq != std::string::npos && eq < end && detail.substr(pos, eq - pos) == key)
            return detail.substr(eq + 1, end - eq - 1);
        pos = end + 1;
    }
    return {};
}

}  // namespace pppt
