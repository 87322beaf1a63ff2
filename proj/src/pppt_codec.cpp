#include "pppt/pppt_codec.hpp"

#include "pppt/digest.hpp"

namespace pppt {

const char* to_string(DecodeStatus s) {
    switch (s) {
        case DecodeStatus::Verified: return "verified";
        case DecodeStatus::Forged: return "forged";
        case DecodeStatus::Broken: return "broken";
        case DecodeStatus::Ambiguous: return "ambiguous";
        case DecodeStatus::Mismatch: return "mismatch";
    }
    return "?";
}

void encode_at_source(DataPacket& pkt, NodeId node, const Dodag& d) {
    if (d.role(node) != NodeRole::Source)
        throw std::invalid_argument("node " + to_string(node) + " is not a source");
    if (!d.attached(node))
        throw std::invalid_argument("node " + to_string(node) +
                                    " has no preferred parent (detached)");
    pkt.origin = node;
    pkt.provenance = ProvenanceField{RInfoPair{d.next_hop(node), node}};
    pkt.eh_prov_flag = true;
    refresh_digest(pkt);
}

void encode_at_forwarder(DataPacket& pkt, NodeId node, NodeId from_child, Dodag& d,
                         std::uint32_t history_cap) {
    if (d.role(node) == NodeRole::Source)
        throw std::invalid_argument("node " + to_string(node) + " does not forward");
    if (node != d.root && !d.attached(node))
        throw std::invalid_argument("node " + to_string(node) + " is detached");
    const std::uint32_t cap = (node == d.root) ? 0 : history_cap;
    d.rt(node).record_seq(from_child, pkt.origin, pkt.seq, cap);
    if (node == d.root) return;  // the root records but does not re-encode
    pkt.provenance = ProvenanceField{RInfoPair{d.next_hop(node), node}};
    refresh_digest(pkt);
}

FlagCheck check_eh_flag(const DataPacket& pkt) {
    if (!pkt.eh_prov_flag) return {false, "unflagged packet"};
    if (pkt.provenance.absent()) return {false, "provenance stripped"};
    return {true, {}};
}

DecodeResult decode(const DataPacket& pkt, const Dodag& d) {
    DecodeResult res;
    if (!digest_ok(pkt)) {
        res.status = DecodeStatus::Forged;
        res.message = "provenance forged";
        return res;
    }
    const RInfoPair pair = pkt.provenance.pair();
    if (pair.destination != d.root) {
        // Every genuine delivery is addressed to the root by its last hop.
        res.status = DecodeStatus::Forged;
        res.message = "provenance forged";
        return res;
    }

    // Walk recorded histories from the last forwarder toward the source.
    PathTrace trace{d.root};
    NodeId cur = pair.source;
    trace.insert(trace.begin(), cur);
    while (cur != d.root && (!d.roles.count(cur) || d.role(cur) != NodeRole::Source)) {
        if (!d.roles.count(cur) || !d.attached(cur)) {
            res.status = DecodeStatus::Broken;
            res.fault = cur;
            res.trace = trace;
            res.message = "trace broken at node " + to_string(cur);
            return res;
        }
        const RoutingEntry* match = nullptr;
        unsigned matches = 0;
        for (const RoutingEntry& e : d.rt(cur).entries()) {
            if (e.has_seq(pkt.origin, pkt.seq)) {
                ++matches;
                match = &e;
            }
        }
        if (matches == 0) {
            res.status = DecodeStatus::Broken;
            res.fault = cur;
            res.trace = trace;
            res.message = "trace broken at node " + to_string(cur);
            return res;
        }
        if (matches > 1) {
            res.status = DecodeStatus::Ambiguous;
            res.fault = cur;
            res.trace = trace;
            res.message = "ambiguous trace at node " + to_string(cur);
            return res;
        }
        cur = match->child;
        trace.insert(trace.begin(), cur);
    }

    res.trace = trace;
    auto known = d.root_paths.find(pkt.origin);
    if (known == d.root_paths.end() || known->second != trace) {
        res.status = DecodeStatus::Mismatch;
        res.message = "trace does not match the root's known path";
        return res;
    }
    res.status = DecodeStatus::Verified;
    return res;
}

void reset_interval(Dodag& d) {
    for (auto& [n, table] : d.routing_tables) {
        if (n == d.root) continue;  // the root's table is never reset
        table.reset_histories();
    }
}

}  // namespace pppt
