#include "pppt/adversary.hpp"

#include <stdexcept>

namespace pppt {

LinkOutcome apply_link_loss(double loss_probability, Rng& rng) {
    return rng.bernoulli(loss_probability) ? LinkOutcome::Lost : LinkOutcome::Delivered;
}

MaliciousAction apply_malicious(DataPacket& pkt, const AdversaryConfig& cfg,
                                const std::vector<NodeId>& universe, Rng& rng) {
    if (rng.bernoulli(cfg.malicious_drop_rate)) return MaliciousAction::Drop;

    if (cfg.strip_provenance) {
        // Removes the field; the already-processed extension-header bit stays.
        pkt.provenance = ProvenanceField::absent_field();
        return MaliciousAction::Strip;
    }

    if (cfg.forge_provenance) {
        if (!pkt.provenance.is_pppt()) return MaliciousAction::Pass;
        if (universe.size() < 2)
            throw std::invalid_argument("forging needs at least two node ids");
        const RInfoPair original = pkt.provenance.pair();
        RInfoPair forged = original;
        while (forged == original || forged.destination == forged.source) {
            forged.destination = universe[rng.index(universe.size())];
            forged.source = universe[rng.index(universe.size())];
        }
        pkt.provenance.pair() = forged;  // digest intentionally left stale
        return MaliciousAction::Forge;
    }

    return MaliciousAction::Pass;
}

}  // namespace pppt
