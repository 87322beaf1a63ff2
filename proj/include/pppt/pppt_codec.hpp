/*
 * Bi-fold provenance codec.
 *
 * System level: the packet carries a single destination/source pair that
 * every encoding node overwrites with (preferred parent, self), so the
 * in-packet provenance never exceeds two bytes.  Node level: each forwarder
 * records the packet's (origin, seq) against the child route it arrived by.
 * The root reconstructs the path by walking those recorded histories from
 * the delivered pair down to the source, then compares the trace with its
 * a-priori path knowledge.
 */
#ifndef PPPT_CODEC_HPP
#define PPPT_CODEC_HPP

#include <cstdint>
#include <string>

#include "pppt/dodag.hpp"
#include "pppt/types.hpp"

namespace pppt {

inline constexpr std::uint32_t kDefaultIntervalPackets = 256;

/* Outcome of the extension-header provenance-bit check at the root. */
struct FlagCheck {
    bool accept = true;
    std::string reason;  // "provenance stripped" / "unflagged packet"
};

enum class DecodeStatus {
    Verified,   // trace reconstructed and equal to the root's known path
    Forged,     // digest mismatch or delivered pair not addressed to the root
    Broken,     // no child route at `fault` recorded the (origin, seq)
    Ambiguous,  // several child routes at `fault` recorded it
    Mismatch,   // trace complete but differs from the root's known path
};

const char* to_string(DecodeStatus s);

struct DecodeResult {
    DecodeStatus status = DecodeStatus::Verified;
    PathTrace trace;     // as reconstructed (may be partial on Broken)
    NodeId fault;        // node where the walk failed, if any
    std::string message;
};

/*
 * Source-side encode: sets provenance to the pair (preferred parent, self),
 * raises the extension-header provenance flag and recomputes the digest.
 * Throws for nodes that are not sources or have no parent (detached).
 */
void encode_at_source(DataPacket& pkt, NodeId node, const Dodag& d);

/*
 * Forwarder-side encode: records pkt's (origin, seq) against the child
 * route `from_child`, overwrites the pair with (preferred parent, self) and
 * recomputes the digest.  The flag is left untouched.  `history_cap` bounds
 * the per-origin seq history (0 = unbounded; the root's table is always
 * unbounded).  Throws std::invalid_argument("unknown child route") when
 * from_child has no routing entry, and for non-forwarder or detached nodes.
 */
void encode_at_forwarder(DataPacket& pkt, NodeId node, NodeId from_child, Dodag& d,
                         std::uint32_t history_cap = kDefaultIntervalPackets);

/*
 * Root-side policy check on the extension-header bit.  A raised flag with
 * absent provenance means the field was stripped in flight; a cleared flag
 * means the packet never carried provenance and is not acceptable when a
 * provenance scheme is in force.
 */
FlagCheck check_eh_flag(const DataPacket& pkt);

/*
 * Root-side decode and verification.  Assumes check_eh_flag accepted the
 * packet.  Verifies the digest, then walks recorded seq histories from the
 * delivered pair toward the source and compares the trace against
 * root_paths[pkt.origin].
 */
DecodeResult decode(const DataPacket& pkt, const Dodag& d);

/*
 * Interval maintenance: clears seq histories in every non-root routing
 * table (routes and last_seq survive).  The root's table is never reset.
 */
void reset_interval(Dodag& d);

}  // namespace pppt

#endif
