/*
 * Fault injection: deterministic RNG draws, per-link loss statistics, and
 * the malicious drop/strip/forge behaviors with their precedence rules.
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pppt/adversary.hpp"
#include "pppt/digest.hpp"
#include "pppt/pppt_codec.hpp"

using namespace pppt;

namespace {

NodeId n(int v) { return NodeId{static_cast<std::uint8_t>(v)}; }

std::vector<NodeId> universe_1_to(int max) {
    std::vector<NodeId> out;
    for (int v = 1; v <= max; ++v) out.push_back(n(v));
    return out;
}

DataPacket pppt_packet() {
    DataPacket pkt;
    pkt.origin = n(10);
    pkt.seq = 7;
    pkt.provenance = ProvenanceField{RInfoPair{n(3), n(6)}};
    pkt.eh_prov_flag = true;
    refresh_digest(pkt);
    return pkt;
}

}  // namespace

TEST_CASE("the rng is deterministic and library-independent") {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) {
        CHECK(a.next_u64() == b.next_u64());
        const double da = a.next_double();
        const double db = b.next_double();
        CHECK(da == db);
        CHECK(da >= 0.0);
        CHECK(da < 1.0);
        CHECK(a.index(17) == b.index(17));
    }
    Rng c(43);
    bool differs = false;
    for (int i = 0; i < 10 && !differs; ++i) differs = (Rng(42).next_u64() != c.next_u64());
    CHECK(differs);
}

TEST_CASE("link loss: degenerate probabilities are exact") {
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
        CHECK(apply_link_loss(0.0, rng) == LinkOutcome::Delivered);
        CHECK(apply_link_loss(1.0, rng) == LinkOutcome::Lost);
    }
}

TEST_CASE("link loss converges on the configured rate") {
    Rng rng(2024);
    const int trials = 10000;
    const double p = 0.01;
    int lost = 0;
    for (int i = 0; i < trials; ++i)
        if (apply_link_loss(p, rng) == LinkOutcome::Lost) ++lost;
    const double sigma = std::sqrt(p * (1 - p) * trials);  // ~9.95
    CHECK(std::abs(lost - p * trials) <= 3.0 * sigma);
}

TEST_CASE("malicious drop swallows the packet untouched") {
    AdversaryConfig cfg;
    cfg.malicious_node = n(3);
    cfg.malicious_drop_rate = 1.0;
    Rng rng(5);
    DataPacket pkt = pppt_packet();
    const DataPacket before = pkt;
    CHECK(apply_malicious(pkt, cfg, universe_1_to(10), rng) == MaliciousAction::Drop);
    CHECK(pkt.provenance == before.provenance);
    CHECK(pkt.digest == before.digest);
}

TEST_CASE("drop rate is honored statistically") {
    AdversaryConfig cfg;
    cfg.malicious_node = n(3);
    cfg.malicious_drop_rate = 0.06;
    Rng rng(99);
    int drops = 0;
    const int trials = 10000;
    for (int i = 0; i < trials; ++i) {
        DataPacket pkt = pppt_packet();
        if (apply_malicious(pkt, cfg, universe_1_to(10), rng) == MaliciousAction::Drop)
            ++drops;
    }
    const double sigma = std::sqrt(0.06 * 0.94 * trials);
    CHECK(std::abs(drops - 600.0) <= 3.0 * sigma);
}

TEST_CASE("strip removes the field but cannot clear the header bit") {
    AdversaryConfig cfg;
    cfg.malicious_node = n(3);
    cfg.strip_provenance = true;
    Rng rng(5);
    DataPacket pkt = pppt_packet();
    CHECK(apply_malicious(pkt, cfg, universe_1_to(10), rng) == MaliciousAction::Strip);
    CHECK(pkt.provenance.absent());
    CHECK(pkt.eh_prov_flag);  // the bit survives: that is the tell-tale

    const FlagCheck fc = check_eh_flag(pkt);
    CHECK_FALSE(fc.accept);
    CHECK(fc.reason == "provenance stripped");
}

TEST_CASE("forge replaces the pair with a stale digest") {
    AdversaryConfig cfg;
    cfg.malicious_node = n(3);
    cfg.forge_provenance = true;
    Rng rng(5);

    for (int i = 0; i < 1000; ++i) {
        DataPacket pkt = pppt_packet();
        const RInfoPair original = pkt.provenance.pair();
        CHECK(apply_malicious(pkt, cfg, universe_1_to(10), rng) == MaliciousAction::Forge);
        REQUIRE(pkt.provenance.is_pppt());
        const RInfoPair forged = pkt.provenance.pair();
        CHECK(forged != original);                    // never a no-op
        CHECK(forged.destination != forged.source);   // looks plausible
        CHECK(forged.destination.assigned());
        CHECK(forged.source.assigned());
        CHECK_FALSE(digest_ok(pkt));  // the adversary cannot forge the digest
    }
}

TEST_CASE("forge applies only to pair provenance") {
    AdversaryConfig cfg;
    cfg.malicious_node = n(3);
    cfg.forge_provenance = true;
    Rng rng(5);
    DataPacket pkt;
    pkt.origin = n(10);
    pkt.provenance = ProvenanceField{PidList{n(10), n(6)}};
    pkt.eh_prov_flag = true;
    refresh_digest(pkt);
    CHECK(apply_malicious(pkt, cfg, universe_1_to(10), rng) == MaliciousAction::Pass);
    CHECK(pkt.provenance.is_pid());
    CHECK(digest_ok(pkt));
}

TEST_CASE("precedence: drop beats strip, strip beats forge") {
    Rng rng(5);
    SUBCASE("drop wins") {
        AdversaryConfig cfg;
        cfg.malicious_node = n(3);
        cfg.malicious_drop_rate = 1.0;
        cfg.strip_provenance = true;
        cfg.forge_provenance = true;
        DataPacket pkt = pppt_packet();
        CHECK(apply_malicious(pkt, cfg, universe_1_to(10), rng) == MaliciousAction::Drop);
    }
    SUBCASE("strip wins over forge") {
        AdversaryConfig cfg;
        cfg.malicious_node = n(3);
        cfg.strip_provenance = true;
        cfg.forge_provenance = true;
        DataPacket pkt = pppt_packet();
        CHECK(apply_malicious(pkt, cfg, universe_1_to(10), rng) == MaliciousAction::Strip);
        CHECK(pkt.provenance.absent());
    }
}

TEST_CASE("a benign config always passes") {
    AdversaryConfig cfg;  // no malicious node, nothing enabled
    Rng rng(5);
    DataPacket pkt = pppt_packet();
    for (int i = 0; i < 100; ++i)
        CHECK(apply_malicious(pkt, cfg, universe_1_to(10), rng) == MaliciousAction::Pass);
    CHECK(digest_ok(pkt));
}
