#include "pppt/baseline_codec.hpp"

#include "pppt/digest.hpp"

namespace pppt {

void pid_encode(DataPacket& pkt, NodeId node, const Dodag& d) {
    if (!d.attached(node))
        throw std::invalid_argument("node " + to_string(node) +
                                    " has no preferred parent (detached)");
    const NodeId pp = d.next_hop(node);
    if (pkt.provenance.absent()) {
        // Source step: seed with self, then the next hop.
        pkt.origin = node;
        pkt.provenance = ProvenanceField{PidList{node, pp}};
        pkt.eh_prov_flag = true;
    } else {
        if (!pkt.provenance.is_pid())
            throw std::invalid_argument("packet does not carry list provenance");
        pkt.provenance.pid().push_back(pp);
    }
    if (pkt.provenance.pid().size() > pkt.payload_len)
        throw std::length_error("PID provenance overflow: list exceeds payload capacity");
    refresh_digest(pkt);
}

DecodeResult pid_decode(const DataPacket& pkt, const Dodag& d) {
    DecodeResult res;
    if (!digest_ok(pkt)) {
        res.status = DecodeStatus::Forged;
        res.message = "provenance forged";
        return res;
    }
    if (!pkt.provenance.is_pid()) {
        res.status = DecodeStatus::Forged;
        res.message = "wrong provenance kind";
        return res;
    }
    res.trace = pkt.provenance.pid();
    auto known = d.root_paths.find(pkt.origin);
    if (res.trace.empty() || known == d.root_paths.end() || known->second != res.trace) {
        res.status = DecodeStatus::Mismatch;
        res.message = "trace does not match the root's known path";
        return res;
    }
    res.status = DecodeStatus::Verified;
    return res;
}

void bf_encode(DataPacket& pkt, NodeId node) {
    if (pkt.provenance.absent()) {
        pkt.origin = node;
        pkt.provenance = ProvenanceField{BloomFilter{}};
        pkt.eh_prov_flag = true;
    }
    if (!pkt.provenance.is_bloom())
        throw std::invalid_argument("packet does not carry bloom provenance");
    pkt.provenance.bloom().insert(node);
    refresh_digest(pkt);
}

std::set<NodeId> bf_decode(const DataPacket& pkt, const Dodag& d) {
    std::set<NodeId> out;
    if (!pkt.provenance.is_bloom()) return out;
    const BloomFilter& f = pkt.provenance.bloom();
    for (const auto& [id, role] : d.roles) {
        (void)role;
        if (f.contains(id)) out.insert(id);
    }
    return out;
}

}  // namespace pppt
