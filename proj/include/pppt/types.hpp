/*
 * Core protocol types for an RPL storing-mode network with packet-level
 * provenance: node identities and roles, routing/neighbor tables with
 * per-entry sequence histories, the provenance field variants carried in
 * data packets, and the simulation clock.
 */
#ifndef PPPT_TYPES_HPP
#define PPPT_TYPES_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace pppt {

/* One-byte node identity; 0 is reserved as "unassigned". */
struct NodeId {
    std::uint8_t value = 0;

    constexpr NodeId() = default;
    constexpr explicit NodeId(std::uint8_t v) : value(v) {}

    constexpr bool assigned() const { return value != 0; }
    auto operator<=>(const NodeId&) const = default;
};

std::string to_string(NodeId id);

enum class NodeRole : std::uint8_t {
    Source,     // generates data packets; leaf of the DODAG
    Forwarder,  // relays upward; an aggregator is a Forwarder with several children
    Root,       // DODAG root / sink; exactly one per network
};

const char* to_string(NodeRole role);

/* Simulation clock: 32768 ticks per second (binary second). */
struct SimTime {
    static constexpr std::uint64_t kTicksPerSecond = 32768;

    std::uint64_t ticks = 0;

    static SimTime from_seconds(double s);
    double seconds() const { return static_cast<double>(ticks) / kTicksPerSecond; }
    double minutes() const { return seconds() / 60.0; }
    auto operator<=>(const SimTime&) const = default;
};

/*
 * System-level provenance pair carried in the packet: destination is the
 * next-hop preferred parent, source is the node that last encoded.  The
 * pair is overwritten at every hop, so its size never grows.
 */
struct RInfoPair {
    NodeId destination;
    NodeId source;

    auto operator<=>(const RInfoPair&) const = default;
};

/* Fixed-size Bloom filter baseline: 144 bits, 4 independently hashed probes. */
class BloomFilter {
  public:
    static constexpr std::size_t kBits = 144;
    static constexpr std::size_t kBytes = kBits / 8;
    static constexpr int kHashes = 4;

    void insert(NodeId id);
    bool contains(NodeId id) const;

    const std::array<std::uint8_t, kBytes>& bytes() const { return bits_; }
    void set_bytes(const std::array<std::uint8_t, kBytes>& b) { bits_ = b; }

    auto operator<=>(const BloomFilter&) const = default;

  private:
    std::array<std::uint8_t, kBytes> bits_{};
};

/* Marker for a packet with no provenance field (never encoded or stripped). */
struct AbsentProvenance {
    auto operator<=>(const AbsentProvenance&) const = default;
};

/*
 * Provenance field variants:
 *   Pppt  — constant two-byte pair, rewritten per hop
 *   Pid   — per-node ID list, grows one byte per encoding node
 *   Bloom — fixed 18-byte set sketch, membership only
 */
using PidList = std::vector<NodeId>;

struct ProvenanceField {
    std::variant<AbsentProvenance, RInfoPair, PidList, BloomFilter> value;

    bool absent() const { return std::holds_alternative<AbsentProvenance>(value); }
    bool is_pppt() const { return std::holds_alternative<RInfoPair>(value); }
    bool is_pid() const { return std::holds_alternative<PidList>(value); }
    bool is_bloom() const { return std::holds_alternative<BloomFilter>(value); }

    const RInfoPair& pair() const { return std::get<RInfoPair>(value); }
    RInfoPair& pair() { return std::get<RInfoPair>(value); }
    const PidList& pid() const { return std::get<PidList>(value); }
    PidList& pid() { return std::get<PidList>(value); }
    const BloomFilter& bloom() const { return std::get<BloomFilter>(value); }
    BloomFilter& bloom() { return std::get<BloomFilter>(value); }

    static ProvenanceField absent_field() { return {AbsentProvenance{}}; }

    bool operator==(const ProvenanceField&) const = default;
};

/* Kind tag used when deserializing raw provenance bytes. */
enum class ProvenanceKind : std::uint8_t { Pppt, Pid, Bloom };

using Digest = std::array<std::uint8_t, 32>;

/*
 * Application data packet as seen by the provenance layer.  Payload content
 * is irrelevant; only its length matters for airtime and size accounting.
 */
struct DataPacket {
    std::uint32_t seq = 0;       // per-origin, starts at 1
    NodeId origin;               // generating source
    std::uint32_t payload_len = 200;
    ProvenanceField provenance = ProvenanceField::absent_field();
    Digest digest{};             // digest over the serialized provenance field
    bool eh_prov_flag = false;   // extension-header bit: provenance was embedded at origin
};

/* Ordered node sequence from a source to the root (both inclusive). */
using PathTrace = std::vector<NodeId>;

std::string to_string(const PathTrace& trace);

/*
 * One routing-table entry: a next-hop child route plus, keyed by
 * (origin, seq), the per-packet observations recorded when packets from
 * that child were forwarded.  last_seq survives interval resets so gap
 * detection keeps continuity; seq_history is cleared on reset.
 */
struct RoutingEntry {
    NodeId child;
    std::set<NodeId> reachable;  // destinations routed via this child (child included)
    std::optional<std::uint32_t> last_seq;
    // (origin, seq) -> observation count; >1 only for duplicate transits
    std::map<std::pair<NodeId, std::uint32_t>, std::uint32_t> seq_history;

    bool has_seq(NodeId origin, std::uint32_t seq) const;
    /* Records one observation; per-origin history is capped at `cap`
     * distinct seqs (0 = unbounded, used by the root). */
    void record(NodeId origin, std::uint32_t seq, std::uint32_t cap);
};

/* Storing-mode routing table: one entry per distinct child route. */
class RoutingTable {
  public:
    RoutingEntry& add_entry(NodeId child);
    RoutingEntry* find(NodeId child);
    const RoutingEntry* find(NodeId child) const;

    /* Throws std::invalid_argument("unknown child route") if `child` has
     * no entry. */
    void record_seq(NodeId child, NodeId origin, std::uint32_t seq, std::uint32_t cap);

    /* Clears every entry's seq_history, keeping last_seq and routes. */
    void reset_histories();

    std::set<NodeId> reachable_set() const;
    std::vector<NodeId> children() const;

    const std::vector<RoutingEntry>& entries() const { return entries_; }
    std::vector<RoutingEntry>& entries() { return entries_; }
    bool empty() const { return entries_.empty(); }

  private:
    std::vector<RoutingEntry> entries_;  // kept sorted by child id
};

/* Neighbor table: adjacency plus the parent-set split. */
struct NeighborTable {
    std::optional<NodeId> parent;      // preferred parent (rank strictly below owner)
    std::vector<NodeId> substitutes;   // other minimum-rank parents
    std::vector<NodeId> neighbors;     // full adjacency, sorted
};

/* --- provenance serialization ------------------------------------------- */

/*
 * Canonical byte layout:
 *   Pppt  -> [destination, source]                  (always 2 bytes)
 *   Pid   -> one byte per node, list order           (n bytes)
 *   Bloom -> raw filter bytes                        (always 18 bytes)
 * Absent provenance cannot be serialized; throws std::invalid_argument
 * ("no provenance to serialize").
 */
std::vector<std::uint8_t> serialize_provenance(const ProvenanceField& field);

/* Inverse of serialize_provenance for a known kind; validates length. */
ProvenanceField deserialize_provenance(const std::vector<std::uint8_t>& bytes,
                                       ProvenanceKind kind);

std::size_t provenance_wire_size(const ProvenanceField& field);

std::string hex(const std::vector<std::uint8_t>& bytes);
std::string hex(const Digest& digest);

}  // namespace pppt

#endif
