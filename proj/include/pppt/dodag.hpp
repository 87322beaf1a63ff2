/*
 * DODAG construction and maintenance over an undirected topology graph.
 *
 * Ranks are BFS hop counts from the root; each non-root node's preferred
 * parent is its minimum-rank neighbor (ties broken by smallest NodeId,
 * unless the topology pins a preferred parent among the minimum-rank
 * candidates — figures distinguish preferred from substitute parent edges).
 * Storing mode: every node's routing table holds one entry per child route,
 * carrying the full set of descendants reachable through it.  The root also
 * keeps its a-priori path knowledge (root_paths) for verification.
 */
#ifndef PPPT_DODAG_HPP
#define PPPT_DODAG_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pppt/types.hpp"

namespace pppt {

struct TopologyGraph {
    struct NodeDecl {
        NodeId id;
        NodeRole role = NodeRole::Forwarder;
    };
    struct Link {
        NodeId a;
        NodeId b;
        double loss = -1.0;  // <0: use the scenario's default natural loss rate
    };

    std::vector<NodeDecl> nodes;
    std::vector<Link> links;
    // Optional preferred-parent pins; honored only for minimum-rank neighbors.
    std::map<NodeId, NodeId> preferred;

    std::vector<NodeId> neighbors_of(NodeId n) const;
    const NodeDecl* find_node(NodeId n) const;
};

class Dodag {
  public:
    NodeId root;
    std::map<NodeId, NodeRole> roles;
    std::map<NodeId, unsigned> rank;            // attached nodes only
    std::map<NodeId, NodeId> parent;            // preferred parent; absent for root
    std::map<NodeId, NeighborTable> neighbor_tables;
    std::map<NodeId, RoutingTable> routing_tables;
    std::map<NodeId, PathTrace> root_paths;     // per non-root attached node
    std::set<NodeId> detached;                  // unreachable after failures
    TopologyGraph graph;

    NodeRole role(NodeId n) const;
    bool attached(NodeId n) const { return rank.count(n) > 0; }

    /* Next hop toward the root.  Throws std::invalid_argument at the root
     * ("root has no next hop") or for detached nodes. */
    NodeId next_hop(NodeId at) const;

    /* Effective loss probability of the link a-b given the default rate. */
    double link_loss(NodeId a, NodeId b, double default_rate) const;

    RoutingTable& rt(NodeId n) { return routing_tables.at(n); }
    const RoutingTable& rt(NodeId n) const { return routing_tables.at(n); }
};

/*
 * Builds the DODAG.  Throws std::invalid_argument when the graph has no or
 * multiple roots, duplicate/unassigned ids, links naming unknown nodes, or
 * unreachable nodes (the message names them).
 */
Dodag build_dodag(const TopologyGraph& graph);

/*
 * Removes a failed node and rebuilds ranks, parents, tables and root_paths
 * from the remaining graph.  Nodes with no remaining path to the root are
 * marked detached.  Routing histories do not survive (tables are rebuilt).
 * Throws if the failed node is the root.
 */
Dodag reparent(const Dodag& d, NodeId failed);

/*
 * Sample topology used throughout the tests: root 1; forwarders 2..6 with
 * 6 aggregating for sources 9 and 10; sources 7..10.  Node 6 has substitute
 * parent 2 pinned below preferred parent 3.
 */
TopologyGraph sample_topology();

/*
 * Linear chain: root 1 - forwarders 2..(f+1) - sources hanging off the
 * deepest forwarder (ids f+2 ...).  With one source this is a single line
 * whose source sits f+1 hops from the root.
 */
TopologyGraph linear_topology(unsigned forwarders, unsigned sources = 1);

/*
 * Seeded random tree: `node_count` nodes (ids 1..n, root 1), each node at
 * most `max_children` children; internal nodes are forwarders, leaves are
 * sources.
 */
TopologyGraph random_tree_topology(unsigned node_count, unsigned max_children,
                                   std::uint64_t seed);

}  // namespace pppt

#endif
