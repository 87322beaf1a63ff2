/*
 * DODAG construction over the sample and generated topologies: ranks,
 * parent selection with pinning, neighbor/routing tables filled by route
 * propagation, root path knowledge, node-failure reparenting and the
 * structural invariants on random trees.
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pppt/dodag.hpp"

using namespace pppt;

namespace {
NodeId n(int v) { return NodeId{static_cast<std::uint8_t>(v)}; }
}  // namespace

TEST_CASE("sample topology: ranks and preferred parents") {
    const Dodag d = build_dodag(sample_topology());

    CHECK(d.root == n(1));
    CHECK(d.rank.at(n(1)) == 0);
    for (int v : {2, 3, 4}) CHECK(d.rank.at(n(v)) == 1);
    for (int v : {5, 6, 7}) CHECK(d.rank.at(n(v)) == 2);
    for (int v : {8, 9, 10}) CHECK(d.rank.at(n(v)) == 3);

    CHECK(d.parent.at(n(2)) == n(1));
    CHECK(d.parent.at(n(3)) == n(1));
    CHECK(d.parent.at(n(4)) == n(1));
    CHECK(d.parent.at(n(5)) == n(3));
    CHECK(d.parent.at(n(6)) == n(3));  // pinned below 3, not smallest-id 2
    CHECK(d.parent.at(n(7)) == n(2));
    CHECK(d.parent.at(n(8)) == n(5));
    CHECK(d.parent.at(n(9)) == n(6));
    CHECK(d.parent.at(n(10)) == n(6));
    CHECK(d.parent.count(n(1)) == 0);

    CHECK(d.role(n(1)) == NodeRole::Root);
    CHECK(d.role(n(6)) == NodeRole::Forwarder);
    CHECK(d.role(n(10)) == NodeRole::Source);
    CHECK_THROWS_AS(d.role(n(99)), std::invalid_argument);
}

TEST_CASE("sample topology: neighbor tables split parent and substitutes") {
    const Dodag d = build_dodag(sample_topology());

    const NeighborTable& nt3 = d.neighbor_tables.at(n(3));
    CHECK(nt3.neighbors == std::vector<NodeId>{n(1), n(2), n(5), n(6)});
    CHECK(nt3.parent == n(1));
    CHECK(nt3.substitutes.empty());

    const NeighborTable& nt6 = d.neighbor_tables.at(n(6));
    CHECK(nt6.parent == n(3));
    CHECK(nt6.substitutes == std::vector<NodeId>{n(2)});  // equal-rank fallback
}

TEST_CASE("sample topology: storing-mode routing tables") {
    const Dodag d = build_dodag(sample_topology());

    const RoutingTable& rt3 = d.rt(n(3));
    CHECK(rt3.children() == std::vector<NodeId>{n(5), n(6)});
    CHECK(rt3.reachable_set() == std::set<NodeId>{n(5), n(6), n(8), n(9), n(10)});
    CHECK(rt3.find(n(6))->reachable == std::set<NodeId>{n(6), n(9), n(10)});

    const RoutingTable& rt1 = d.rt(n(1));
    CHECK(rt1.children() == std::vector<NodeId>{n(2), n(3), n(4)});
    CHECK(rt1.reachable_set() ==
          std::set<NodeId>{n(2), n(3), n(4), n(5), n(6), n(7), n(8), n(9), n(10)});

    CHECK(d.rt(n(10)).empty());  // leaves route nothing
}

TEST_CASE("sample topology: root path knowledge and next hops") {
    const Dodag d = build_dodag(sample_topology());

    CHECK(d.root_paths.at(n(10)) == PathTrace{n(10), n(6), n(3), n(1)});
    CHECK(d.root_paths.at(n(7)) == PathTrace{n(7), n(2), n(1)});
    CHECK(d.root_paths.at(n(8)) == PathTrace{n(8), n(5), n(3), n(1)});
    CHECK(d.root_paths.count(n(1)) == 0);

    CHECK(d.next_hop(n(10)) == n(6));
    CHECK(d.next_hop(n(6)) == n(3));
    CHECK(d.next_hop(n(3)) == n(1));
    CHECK_THROWS_WITH_AS(d.next_hop(n(1)), "root has no next hop", std::invalid_argument);
}

TEST_CASE("per-link loss probabilities fall back to the scenario default") {
    TopologyGraph g = sample_topology();
    for (auto& l : g.links)
        if ((l.a == n(6) && l.b == n(10)) || (l.a == n(10) && l.b == n(6))) l.loss = 0.25;
    const Dodag d = build_dodag(g);
    CHECK(d.link_loss(n(10), n(6), 0.01) == doctest::Approx(0.25));
    CHECK(d.link_loss(n(6), n(10), 0.01) == doctest::Approx(0.25));  // symmetric
    CHECK(d.link_loss(n(6), n(3), 0.01) == doctest::Approx(0.01));
}

TEST_CASE("reparenting after an interior failure") {
    const Dodag before = build_dodag(sample_topology());
    const Dodag after = reparent(before, n(3));

    // 6 falls back to its substitute parent; its subtree stays attached.
    CHECK(after.parent.at(n(6)) == n(2));
    CHECK(after.rank.at(n(6)) == 2);
    CHECK(after.root_paths.at(n(10)) == PathTrace{n(10), n(6), n(2), n(1)});
    CHECK(after.next_hop(n(6)) == n(2));

    // 5 and 8 had no alternative and are detached.
    CHECK(after.detached == std::set<NodeId>{n(5), n(8)});
    CHECK_FALSE(after.attached(n(5)));
    CHECK_THROWS_AS(after.next_hop(n(5)), std::invalid_argument);
    CHECK(after.root_paths.count(n(8)) == 0);

    // Routing tables reflect the new routes; histories are rebuilt empty.
    CHECK(after.rt(n(2)).reachable_set() == std::set<NodeId>{n(6), n(7), n(9), n(10)});
    CHECK(after.rt(n(1)).reachable_set() ==
          std::set<NodeId>{n(2), n(4), n(6), n(7), n(9), n(10)});

    // The failed node is gone everywhere.
    CHECK(after.roles.count(n(3)) == 0);
    CHECK(after.neighbor_tables.count(n(3)) == 0);
    for (const auto& [id, nt] : after.neighbor_tables)
        for (NodeId nb : nt.neighbors) CHECK(nb != n(3));
}

TEST_CASE("reparenting after a leaf failure leaves the rest untouched") {
    const Dodag before = build_dodag(sample_topology());
    const Dodag after = reparent(before, n(7));
    CHECK(after.detached.empty());
    CHECK(after.rank.size() == before.rank.size() - 1);
    CHECK(after.rt(n(2)).reachable_set().empty());  // 7 was 2's only route
    CHECK(after.rt(n(3)).reachable_set() == before.rt(n(3)).reachable_set());
    CHECK(after.root_paths.at(n(10)) == before.root_paths.at(n(10)));
}

TEST_CASE("the root cannot be failed") {
    const Dodag d = build_dodag(sample_topology());
    CHECK_THROWS_AS(reparent(d, n(1)), std::invalid_argument);
}

TEST_CASE("linear topology generator") {
    const Dodag d = build_dodag(linear_topology(3, 2));
    CHECK(d.rank.at(n(4)) == 3);   // deepest forwarder
    CHECK(d.rank.at(n(5)) == 4);   // both sources hang off it
    CHECK(d.rank.at(n(6)) == 4);
    CHECK(d.role(n(5)) == NodeRole::Source);
    CHECK(d.role(n(6)) == NodeRole::Source);
    CHECK(d.root_paths.at(n(5)) == PathTrace{n(5), n(4), n(3), n(2), n(1)});
    CHECK(d.rt(n(4)).children() == std::vector<NodeId>{n(5), n(6)});
}

TEST_CASE("construction rejects malformed graphs") {
    SUBCASE("no root") {
        TopologyGraph g;
        g.nodes = {{n(1), NodeRole::Forwarder}, {n(2), NodeRole::Source}};
        g.links = {{n(1), n(2), -1.0}};
        CHECK_THROWS_AS(build_dodag(g), std::invalid_argument);
    }
    SUBCASE("two roots") {
        TopologyGraph g;
        g.nodes = {{n(1), NodeRole::Root}, {n(2), NodeRole::Root}};
        g.links = {{n(1), n(2), -1.0}};
        CHECK_THROWS_AS(build_dodag(g), std::invalid_argument);
    }
    SUBCASE("duplicate id") {
        TopologyGraph g;
        g.nodes = {{n(1), NodeRole::Root}, {n(2), NodeRole::Source},
                   {n(2), NodeRole::Source}};
        g.links = {{n(1), n(2), -1.0}};
        CHECK_THROWS_AS(build_dodag(g), std::invalid_argument);
    }
    SUBCASE("link to unknown node") {
        TopologyGraph g;
        g.nodes = {{n(1), NodeRole::Root}, {n(2), NodeRole::Source}};
        g.links = {{n(1), n(9), -1.0}};
        CHECK_THROWS_AS(build_dodag(g), std::invalid_argument);
    }
    SUBCASE("self link") {
        TopologyGraph g;
        g.nodes = {{n(1), NodeRole::Root}, {n(2), NodeRole::Source}};
        g.links = {{n(1), n(2), -1.0}, {n(2), n(2), -1.0}};
        CHECK_THROWS_AS(build_dodag(g), std::invalid_argument);
    }
    SUBCASE("unreachable node is named in the error") {
        TopologyGraph g;
        g.nodes = {{n(1), NodeRole::Root}, {n(2), NodeRole::Source},
                   {n(7), NodeRole::Source}};
        g.links = {{n(1), n(2), -1.0}};
        try {
            build_dodag(g);
            FAIL("expected an exception");
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).find("7") != std::string::npos);
        }
    }
}

TEST_CASE("a root-only graph builds trivially") {
    TopologyGraph g;
    g.nodes = {{n(1), NodeRole::Root}};
    const Dodag d = build_dodag(g);
    CHECK(d.rank.at(n(1)) == 0);
    CHECK(d.root_paths.empty());
    CHECK(d.rt(n(1)).empty());
}

TEST_CASE("random trees satisfy the structural invariants") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const TopologyGraph g = random_tree_topology(12, 3, seed);
        const Dodag d = build_dodag(g);

        REQUIRE(d.rank.size() == 12);  // everything attached
        for (const auto& [id, r] : d.rank) {
            if (id == d.root) continue;
            // Next hop steps exactly one rank toward the root.
            CHECK(d.rank.at(d.next_hop(id)) == r - 1);
            // The recorded root path walks the parent chain.
            const PathTrace& path = d.root_paths.at(id);
            REQUIRE(path.size() == r + 1);
            CHECK(path.front() == id);
            CHECK(path.back() == d.root);
            for (std::size_t i = 0; i + 1 < path.size(); ++i)
                CHECK(d.parent.at(path[i]) == path[i + 1]);
        }
        // Every routing entry's child is one rank below its owner and its
        // reachable set is consistent with the children's own tables.
        for (const auto& [id, rt] : d.routing_tables)
            for (const RoutingEntry& e : rt.entries()) {
                CHECK(d.rank.at(e.child) == d.rank.at(id) + 1);
                CHECK(e.reachable.count(e.child) == 1);
                std::set<NodeId> expect = d.rt(e.child).reachable_set();
                expect.insert(e.child);
                CHECK(e.reachable == expect);
            }
        // Leaves are sources, interior nodes forwarders.
        for (const auto& [id, role] : d.roles) {
            if (id == d.root) continue;
            const bool leaf = d.rt(id).empty();
            CHECK(role == (leaf ? NodeRole::Source : NodeRole::Forwarder));
        }
    }
}
