#include "pppt/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pppt {

std::string to_string(NodeId id) {
    return std::to_string(static_cast<unsigned>(id.value));
}

const char* to_string(NodeRole role) {
    switch (role) {
        case NodeRole::Source: return "source";
        case NodeRole::Forwarder: return "forwarder";
        case NodeRole::Root: return "root";
    }
    return "?";
}

SimTime SimTime::from_seconds(double s) {
    return SimTime{static_cast<std::uint64_t>(std::llround(s * kTicksPerSecond))};
}

std::string to_string(const PathTrace& trace) {
    std::string out;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (i) out += '-';
        out += to_string(trace[i]);
    }
    return out;
}

/* --- Bloom filter -------------------------------------------------------- */

namespace {

/* splitmix64 finalizer; a one-byte key needs strong mixing to spread over
 * 144 bit positions. */
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

namespace {
/* Probe positions: independent 16-bit slices of the mixed hash.  At this
 * small m, double hashing's arithmetic-progression probes collide far more
 * often than the analytic rate; independent slices match it. */
std::size_t bloom_bit(std::uint64_t h, int i) {
    return static_cast<std::size_t>((h >> (16 * i)) & 0xffffULL) % BloomFilter::kBits;
}
}  // namespace

void BloomFilter::insert(NodeId id) {
    const std::uint64_t h = mix64(id.value);
    for (int i = 0; i < kHashes; ++i) {
        const std::size_t bit = bloom_bit(h, i);
        bits_[bit / 8] |= static_cast<std::uint8_t>(1u << (bit % 8));
    }
}

bool BloomFilter::contains(NodeId id) const {
    const std::uint64_t h = mix64(id.value);
    for (int i = 0; i < kHashes; ++i) {
        const std::size_t bit = bloom_bit(h, i);
        if (!(bits_[bit / 8] & (1u << (bit % 8)))) return false;
    }
    return true;
}

/* --- routing table ------------------------------------------------------- */

bool RoutingEntry::has_seq(NodeId origin, std::uint32_t seq) const {
    return seq_history.count({origin, seq}) > 0;
}

void RoutingEntry::record(NodeId origin, std::uint32_t seq, std::uint32_t cap) {
    last_seq = seq;
    ++seq_history[{origin, seq}];
    if (cap == 0) return;
    // Per-origin bound: keep at most `cap` distinct seqs, evicting oldest.
    const auto lo = seq_history.lower_bound({origin, 0});
    auto hi = seq_history.upper_bound({origin, UINT32_MAX});
    std::size_t count = static_cast<std::size_t>(std::distance(lo, hi));
    while (count > cap) {
        seq_history.erase(seq_history.lower_bound({origin, 0}));
        --count;
    }
}

RoutingEntry& RoutingTable::add_entry(NodeId child) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), child,
                               [](const RoutingEntry& e, NodeId c) { return e.child < c; });
    if (it != entries_.end() && it->child == child) return *it;
    it = entries_.insert(it, RoutingEntry{child, {child}, std::nullopt, {}});
    return *it;
}

RoutingEntry* RoutingTable::find(NodeId child) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), child,
                               [](const RoutingEntry& e, NodeId c) { return e.child < c; });
    if (it == entries_.end() || it->child != child) return nullptr;
    return &*it;
}

const RoutingEntry* RoutingTable::find(NodeId child) const {
    return const_cast<RoutingTable*>(this)->find(child);
}

void RoutingTable::record_seq(NodeId child, NodeId origin, std::uint32_t seq,
                              std::uint32_t cap) {
    RoutingEntry* e = find(child);
    if (!e) throw std::invalid_argument("unknown child route");
    e->record(origin, seq, cap);
}

void RoutingTable::reset_histories() {
    for (auto& e : entries_) e.seq_history.clear();
}

std::set<NodeId> RoutingTable::reachable_set() const {
    std::set<NodeId> out;
    for (const auto& e : entries_) out.insert(e.reachable.begin(), e.reachable.end());
    return out;
}

std::vector<NodeId> RoutingTable::children() const {
    std::vector<NodeId> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.child);
    return out;
}

/* --- serialization ------------------------------------------------------- */

std::vector<std::uint8_t> serialize_provenance(const ProvenanceField& field) {
    if (field.absent()) throw std::invalid_argument("no provenance to serialize");
    std::vector<std::uint8_t> out;
    if (field.is_pppt()) {
        out = {field.pair().destination.value, field.pair().source.value};
    } else if (field.is_pid()) {
        out.reserve(field.pid().size());
        for (NodeId id : field.pid()) out.push_back(id.value);
    } else {
        const auto& b = field.bloom().bytes();
        out.assign(b.begin(), b.end());
    }
    return out;
}

ProvenanceField deserialize_provenance(const std::vector<std::uint8_t>& bytes,
                                       ProvenanceKind kind) {
    switch (kind) {
        case ProvenanceKind::Pppt: {
            if (bytes.size() != 2)
                throw std::invalid_argument("pair provenance must be exactly 2 bytes");
            return {RInfoPair{NodeId{bytes[0]}, NodeId{bytes[1]}}};
        }
        case ProvenanceKind::Pid: {
            if (bytes.empty())
                throw std::invalid_argument("pid provenance cannot be empty");
            PidList list;
            list.reserve(bytes.size());
            for (std::uint8_t b : bytes) list.push_back(NodeId{b});
            return {list};
        }
        case ProvenanceKind::Bloom: {
            if (bytes.size() != BloomFilter::kBytes)
                throw std::invalid_argument("bloom provenance must be exactly 18 bytes");
            BloomFilter f;
            std::array<std::uint8_t, BloomFilter::kBytes> raw{};
            std::copy(bytes.begin(), bytes.end(), raw.begin());
            f.set_bytes(raw);
            return {f};
        }
    }
    throw std::invalid_argument("unknown provenance kind");
}

std::size_t provenance_wire_size(const ProvenanceField& field) {
    if (field.absent()) return 0;
    if (field.is_pppt()) return 2;
    if (field.is_pid()) return field.pid().size();
    return BloomFilter::kBytes;
}

namespace {
std::string hex_impl(const std::uint8_t* data, std::size_t n) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        out += digits[data[i] >> 4];
        out += digits[data[i] & 0xf];
    }
    return out;
}
}  // namespace

std::string hex(const std::vector<std::uint8_t>& bytes) {
    return hex_impl(bytes.data(), bytes.size());
}

std::string hex(const Digest& digest) { return hex_impl(digest.data(), digest.size()); }

}  // namespace pppt
