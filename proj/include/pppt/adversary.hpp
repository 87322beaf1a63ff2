/*
 * Threat-model knobs and the two fault injectors used by the simulator:
 * natural per-link Bernoulli loss and a single malicious forwarder that can
 * drop, strip the provenance field (leaving the extension-header bit set)
 * or forge the provenance pair (leaving the digest stale).
 *
 * All randomness flows through one seeded generator with self-rolled draws,
 * so a (config, seed) pair reproduces a byte-identical event log.
 */
#ifndef PPPT_ADVERSARY_HPP
#define PPPT_ADVERSARY_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "pppt/dodag.hpp"
#include "pppt/types.hpp"

namespace pppt {

/* Deterministic RNG: mt19937_64 core, library-independent derived draws. */
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /* Uniform in [0, 1) with 53-bit resolution. */
    double next_double() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return next_double() < p;
    }

    /* Uniform index in [0, n); n must be nonzero. */
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

  private:
    std::mt19937_64 engine_;
};

struct AdversaryConfig {
    std::optional<NodeId> malicious_node;  // never the root
    double malicious_drop_rate = 0.0;
    double natural_loss_rate = 0.0;        // default per-link loss probability
    bool strip_provenance = false;
    bool forge_provenance = false;
    std::uint64_t rng_seed = 1;
};

/* One transmission over a link with the given loss probability. */
enum class LinkOutcome { Delivered, Lost };

LinkOutcome apply_link_loss(double loss_probability, Rng& rng);

/* Behavior of the malicious node for one transiting packet. */
enum class MaliciousAction {
    Pass,   // forward faithfully
    Drop,   // swallow the packet (no routing record is made)
    Strip,  // remove the provenance field; the EH bit cannot be unset
    Forge,  // replace the pair with a random valid-looking one; digest kept stale
};

/*
 * Decides and applies the malicious behavior to `pkt`.  Drop wins over
 * strip/forge; strip and forge apply to every passing packet when enabled
 * (strip takes precedence if both are set).  Forged pairs are drawn from
 * the node id universe and never equal the original pair.
 */
MaliciousAction apply_malicious(DataPacket& pkt, const AdversaryConfig& cfg,
                                const std::vector<NodeId>& universe, Rng& rng);

}  // namespace pppt

#endif
