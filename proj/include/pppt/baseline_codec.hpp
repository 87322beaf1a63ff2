/*
 * Baseline provenance codecs used for comparison runs.
 *
 * PID: every encoding node grows an in-packet list of node ids.  The source
 * seeds the list with [self, preferred parent]; each forwarder appends its
 * preferred parent, so the delivered list is the full source-to-root path
 * and costs one byte per recorded node.
 *
 * Bloom: encoding nodes insert their own id into a fixed 144-bit filter
 * (18 bytes, 4 probes).  Membership is checkable but ordering is lost, so
 * the root can only recover a candidate superset of the path's encoders.
 */
#ifndef PPPT_BASELINE_CODEC_HPP
#define PPPT_BASELINE_CODEC_HPP

#include <set>

#include "pppt/dodag.hpp"
#include "pppt/pppt_codec.hpp"
#include "pppt/types.hpp"

namespace pppt {

/*
 * PID encode step at `node` (source or forwarder).  Throws when the list
 * would outgrow the packet's payload capacity ("PID provenance overflow")
 * or when the node has no preferred parent.
 */
void pid_encode(DataPacket& pkt, NodeId node, const Dodag& d);

/*
 * PID decode at the root: the delivered list is already in source-to-root
 * order, so verification is a direct comparison with the root's known path.
 * Digest failures report Forged; an empty or alien list reports Mismatch.
 */
DecodeResult pid_decode(const DataPacket& pkt, const Dodag& d);

/* Bloom encode step: inserts `node` into the packet's filter. */
void bf_encode(DataPacket& pkt, NodeId node);

/*
 * Bloom decode at the root: all candidate ids testing positive.  The result
 * is a set (no ordering); it contains every true encoder and possibly false
 * positives.
 */
std::set<NodeId> bf_decode(const DataPacket& pkt, const Dodag& d);

}  // namespace pppt

#endif
