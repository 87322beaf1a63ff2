/*
 * Core types: identities, clock, provenance serialization, digests
 * (vectors frozen against an independent SHA-256 implementation), routing
 * tables with capped seq histories, and the event-log line format.
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "pppt/digest.hpp"
#include "pppt/event_log.hpp"
#include "pppt/types.hpp"

using namespace pppt;

TEST_CASE("node ids: reserved zero, ordering, printing") {
    CHECK_FALSE(NodeId{}.assigned());
    CHECK(NodeId{1}.assigned());
    CHECK(NodeId{3} < NodeId{10});
    CHECK(to_string(NodeId{10}) == "10");
}

TEST_CASE("simulation clock uses 32768 ticks per second") {
    CHECK(SimTime::kTicksPerSecond == 32768);
    CHECK(SimTime::from_seconds(1.0).ticks == 32768);
    CHECK(SimTime::from_seconds(600.0).ticks == 600ull * 32768);
    CHECK(SimTime{32768 * 60}.minutes() == doctest::Approx(1.0));
}

TEST_CASE("pair provenance serializes to exactly two bytes, destination first") {
    ProvenanceField f{RInfoPair{NodeId{6}, NodeId{10}}};
    const auto bytes = serialize_provenance(f);
    REQUIRE(bytes.size() == 2);
    CHECK(bytes[0] == 0x06);
    CHECK(bytes[1] == 0x0a);
    CHECK(provenance_wire_size(f) == 2);

    const ProvenanceField back = deserialize_provenance(bytes, ProvenanceKind::Pppt);
    REQUIRE(back.is_pppt());
    CHECK(back.pair() == f.pair());
}

TEST_CASE("pid provenance is one byte per recorded node, in list order") {
    ProvenanceField f{PidList{NodeId{10}, NodeId{6}, NodeId{3}, NodeId{1}}};
    const auto bytes = serialize_provenance(f);
    CHECK(bytes == std::vector<std::uint8_t>{0x0a, 0x06, 0x03, 0x01});
    CHECK(provenance_wire_size(f) == 4);
    CHECK(hex(bytes) == "0a060301");

    const ProvenanceField back = deserialize_provenance(bytes, ProvenanceKind::Pid);
    REQUIRE(back.is_pid());
    CHECK(back.pid() == f.pid());
}

TEST_CASE("bloom filter: fixed 18 bytes, no false negatives, sane positives") {
    BloomFilter bf;
    CHECK(BloomFilter::kBytes == 18);
    bf.insert(NodeId{10});
    bf.insert(NodeId{6});
    bf.insert(NodeId{3});
    CHECK(bf.contains(NodeId{10}));
    CHECK(bf.contains(NodeId{6}));
    CHECK(bf.contains(NodeId{3}));

    int positives = 0;
    for (int v = 1; v <= 255; ++v)
        if (bf.contains(NodeId{static_cast<std::uint8_t>(v)})) ++positives;
    // 3 true members plus at most a few false positives (theory ~4e-5 each).
    CHECK(positives >= 3);
    CHECK(positives <= 8);

    ProvenanceField f{bf};
    const auto bytes = serialize_provenance(f);
    REQUIRE(bytes.size() == 18);
    const ProvenanceField back = deserialize_provenance(bytes, ProvenanceKind::Bloom);
    REQUIRE(back.is_bloom());
    CHECK(back.bloom().bytes() == bf.bytes());
}

TEST_CASE("bloom insertion is deterministic across instances") {
    BloomFilter a, b;
    for (int v : {7, 42, 199}) {
        a.insert(NodeId{static_cast<std::uint8_t>(v)});
        b.insert(NodeId{static_cast<std::uint8_t>(v)});
    }
    CHECK(a.bytes() == b.bytes());
}

TEST_CASE("absent provenance cannot be serialized") {
    const ProvenanceField f = ProvenanceField::absent_field();
    CHECK(provenance_wire_size(f) == 0);
    CHECK_THROWS_WITH_AS(serialize_provenance(f), "no provenance to serialize",
                         std::invalid_argument);
}

TEST_CASE("deserialization validates lengths") {
    CHECK_THROWS_AS(deserialize_provenance({0x01}, ProvenanceKind::Pppt),
                    std::invalid_argument);
    CHECK_THROWS_AS(deserialize_provenance({0x01, 0x02, 0x03}, ProvenanceKind::Pppt),
                    std::invalid_argument);
    CHECK_THROWS_AS(deserialize_provenance(std::vector<std::uint8_t>(17, 0),
                                           ProvenanceKind::Bloom),
                    std::invalid_argument);
    CHECK_THROWS_AS(deserialize_provenance({}, ProvenanceKind::Pid), std::invalid_argument);
}

/* Vectors frozen from an independent SHA-256 implementation. */
TEST_CASE("sha-256 digest vectors") {
    CHECK(hex(compute_digest(std::string{})) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(hex(compute_digest(std::string{"abc"})) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

    CHECK(hex(provenance_digest(ProvenanceField{RInfoPair{NodeId{6}, NodeId{10}}})) ==
          "51b05cecae8a29507731d3050b0c83eb04513a00327e1ff775ee60aaae6388c0");
    CHECK(hex(provenance_digest(ProvenanceField{RInfoPair{NodeId{10}, NodeId{6}}})) ==
          "7306c1520838bd3b312946c607711f75b3f56add76189f7a1d6a280c021d6800");
    CHECK(hex(provenance_digest(ProvenanceField{RInfoPair{NodeId{1}, NodeId{3}}})) ==
          "c79b932e1e1da3c0e098e5ad2c422937eb904a76cf61d83975a74a68fbb04b99");
    CHECK(hex(provenance_digest(ProvenanceField{RInfoPair{NodeId{3}, NodeId{6}}})) ==
          "9385514d971afeefb74d9e1a7e4e40d4946f5bc0379908f18038ad9b5dfaf36b");
    CHECK(hex(provenance_digest(
              ProvenanceField{PidList{NodeId{10}, NodeId{6}, NodeId{3}, NodeId{1}}})) ==
          "30ad22a2ff1da1a82428308857cc8e57263e371d846a2e802cb4f6a1b340a1db");
}

TEST_CASE("digest refresh and verification on packets") {
    DataPacket pkt;
    pkt.provenance = ProvenanceField{RInfoPair{NodeId{6}, NodeId{10}}};
    CHECK_FALSE(digest_ok(pkt));  // digest not yet computed
    refresh_digest(pkt);
    CHECK(digest_ok(pkt));

    pkt.provenance.pair().source = NodeId{9};  // tamper without re-digesting
    CHECK_FALSE(digest_ok(pkt));

    pkt.provenance = ProvenanceField::absent_field();
    CHECK_FALSE(digest_ok(pkt));  // nothing to verify against
}

TEST_CASE("any single-bit mutation changes the digest (10k samples)") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t len = 1 + rng() % 64;
        std::vector<std::uint8_t> bytes(len);
        for (auto& b : bytes) b = static_cast<std::uint8_t>(rng());
        const Digest before = compute_digest(bytes);
        const std::size_t bit = rng() % (len * 8);
        bytes[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        REQUIRE(compute_digest(bytes) != before);
    }
}

TEST_CASE("routing entry histories: counts, caps, per-origin isolation") {
    RoutingEntry e;
    e.child = NodeId{6};

    e.record(NodeId{10}, 1, 0);
    e.record(NodeId{10}, 1, 0);  // duplicate transit
    CHECK(e.has_seq(NodeId{10}, 1));
    CHECK(e.seq_history.at({NodeId{10}, 1}) == 2);

    SUBCASE("cap keeps only the most recent seqs of one origin") {
        for (std::uint32_t s = 1; s <= 5; ++s) e.record(NodeId{9}, s, 3);
        CHECK_FALSE(e.has_seq(NodeId{9}, 1));
        CHECK_FALSE(e.has_seq(NodeId{9}, 2));
        CHECK(e.has_seq(NodeId{9}, 3));
        CHECK(e.has_seq(NodeId{9}, 4));
        CHECK(e.has_seq(NodeId{9}, 5));
        CHECK(e.has_seq(NodeId{10}, 1));  // other origin untouched
    }
    SUBCASE("cap zero is unbounded") {
        for (std::uint32_t s = 1; s <= 1000; ++s) e.record(NodeId{9}, s, 0);
        CHECK(e.has_seq(NodeId{9}, 1));
        CHECK(e.has_seq(NodeId{9}, 1000));
    }
}

TEST_CASE("routing table: sorted entries, lookups, resets") {
    RoutingTable rt;
    rt.add_entry(NodeId{6}).reachable = {NodeId{6}, NodeId{9}, NodeId{10}};
    rt.add_entry(NodeId{5}).reachable = {NodeId{5}, NodeId{8}};

    CHECK(rt.children() == std::vector<NodeId>{NodeId{5}, NodeId{6}});
    CHECK(rt.reachable_set() ==
          std::set<NodeId>{NodeId{5}, NodeId{6}, NodeId{8}, NodeId{9}, NodeId{10}});
    REQUIRE(rt.find(NodeId{5}) != nullptr);
    CHECK(rt.find(NodeId{7}) == nullptr);

    rt.record_seq(NodeId{6}, NodeId{10}, 1, 0);
    CHECK(rt.find(NodeId{6})->has_seq(NodeId{10}, 1));
    CHECK(rt.find(NodeId{6})->last_seq == 1);
    CHECK_THROWS_WITH_AS(rt.record_seq(NodeId{7}, NodeId{10}, 1, 0),
                         "unknown child route", std::invalid_argument);

    rt.reset_histories();
    CHECK_FALSE(rt.find(NodeId{6})->has_seq(NodeId{10}, 1));
    CHECK(rt.find(NodeId{6})->last_seq == 1);  // continuity survives the reset
    CHECK(rt.children().size() == 2);          // routes survive too
}

TEST_CASE("event records round-trip through the line format") {
    EventRecord e{1234567, NodeId{3}, EventKind::Rx, NodeId{10}, 42, "from=6"};
    const std::string line = format_event(e);
    CHECK(line == "1234567,3,rx,10,42,from=6");
    const EventRecord back = parse_event(line);
    CHECK(back.time_ticks == e.time_ticks);
    CHECK(back.node == e.node);
    CHECK(back.kind == e.kind);
    CHECK(back.origin == e.origin);
    CHECK(back.seq == e.seq);
    CHECK(back.detail == e.detail);

    EventRecord bare{0, NodeId{1}, EventKind::Reset, NodeId{}, 0, ""};
    CHECK(format_event(bare) == "0,1,reset,0,0,-");
    CHECK(parse_event("0,1,reset,0,0,-").detail.empty());
}

TEST_CASE("event kinds map to stable names") {
    CHECK(std::string(to_string(EventKind::MalDrop)) == "maldrop");
    CHECK(event_kind_from_string("maldrop") == EventKind::MalDrop);
    for (const char* name : {"gen", "tx", "rx", "lost", "maldrop", "strip", "forge",
                             "arrive", "discard", "decode", "dup", "detect", "reset"})
        CHECK(std::string(to_string(event_kind_from_string(name))) == name);
    CHECK_THROWS_AS(event_kind_from_string("nonsense"), std::invalid_argument);
}

TEST_CASE("malformed event lines are rejected") {
    CHECK_THROWS_AS(parse_event("1,2,rx,10"), std::invalid_argument);
    CHECK_THROWS_AS(parse_event("x,2,rx,10,1,-"), std::invalid_argument);
    CHECK_THROWS_AS(parse_event("1,999,rx,10,1,-"), std::invalid_argument);
    CHECK_THROWS_AS(parse_event(""), std::invalid_argument);
}

TEST_CASE("log serialization, hashing, and detail lookup") {
    EventLog log{{0, NodeId{9}, EventKind::Gen, NodeId{9}, 1, ""},
                 {70, NodeId{9}, EventKind::Tx, NodeId{9}, 1, "to=2;len=234"}};
    const std::string text = serialize_log(log);
    CHECK(text == "0,9,gen,9,1,-\n70,9,tx,9,1,to=2;len=234\n");

    std::istringstream in(text);
    const EventLog round = parse_log(in);
    REQUIRE(round.size() == 2);
    CHECK(round[1].detail == "to=2;len=234");

    const std::string h1 = log_hash(log);
    CHECK(h1.size() == 64);
    log[1].seq = 2;
    CHECK(log_hash(log) != h1);

    CHECK(detail_value("to=2;len=234", "len") == "234");
    CHECK(detail_value("to=2;len=234", "to") == "2");
    CHECK(detail_value("to=2;len=234", "missing").empty());
    CHECK(detail_value("-", "to").empty());
}
