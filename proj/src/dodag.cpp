#include "pppt/dodag.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <sstream>

namespace pppt {

std::vector<NodeId> TopologyGraph::neighbors_of(NodeId n) const {
    std::vector<NodeId> out;
    for (const Link& l : links) {
        if (l.a == n) out.push_back(l.b);
        if (l.b == n) out.push_back(l.a);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

const TopologyGraph::NodeDecl* TopologyGraph::find_node(NodeId n) const {
    for (const NodeDecl& d : nodes)
        if (d.id == n) return &d;
    return nullptr;
}

NodeRole Dodag::role(NodeId n) const {
    auto it = roles.find(n);
    if (it == roles.end()) throw std::invalid_argument("unknown node " + to_string(n));
    return it->second;
}

NodeId Dodag::next_hop(NodeId at) const {
    if (at == root) throw std::invalid_argument("root has no next hop");
    auto it = parent.find(at);
    if (it == parent.end())
        throw std::invalid_argument("node " + to_string(at) + " is detached");
    return it->second;
}

double Dodag::link_loss(NodeId a, NodeId b, double default_rate) const {
    for (const auto& l : graph.links) {
        if ((l.a == a && l.b == b) || (l.a == b && l.b == a))
            return l.loss >= 0.0 ? l.loss : default_rate;
    }
    return default_rate;
}

namespace {

void validate_graph(const TopologyGraph& g, NodeId* root_out) {
    std::set<NodeId> ids;
    NodeId root;
    unsigned roots = 0;
    for (const auto& n : g.nodes) {
        if (!n.id.assigned())
            throw std::invalid_argument("node id 0 is reserved as unassigned");
        if (!ids.insert(n.id).second)
            throw std::invalid_argument("duplicate node id " + to_string(n.id));
        if (n.role == NodeRole::Root) {
            ++roots;
            root = n.id;
        }
    }
    if (roots != 1)
        throw std::invalid_argument("topology must declare exactly one root, found " +
                                    std::to_string(roots));
    for (const auto& l : g.links) {
        if (!ids.count(l.a) || !ids.count(l.b))
            throw std::invalid_argument("link references unknown node " +
                                        to_string(ids.count(l.a) ? l.b : l.a));
        if (l.a == l.b)
            throw std::invalid_argument("self-link at node " + to_string(l.a));
    }
    *root_out = root;
}

/* BFS hop-count ranks from the root over the adjacency. */
std::map<NodeId, unsigned> bfs_ranks(const TopologyGraph& g, NodeId root) {
    std::map<NodeId, unsigned> rank;
    rank[root] = 0;
    std::deque<NodeId> queue{root};
    while (!queue.empty()) {
        NodeId n = queue.front();
        queue.pop_front();
        for (NodeId m : g.neighbors_of(n)) {
            if (!rank.count(m)) {
                rank[m] = rank[n] + 1;
                queue.push_back(m);
            }
        }
    }
    return rank;
}

/* Fills parents, tables and root_paths for all ranked nodes. */
void assemble(Dodag& d) {
    const TopologyGraph& g = d.graph;

    d.parent.clear();
    d.neighbor_tables.clear();
    d.routing_tables.clear();
    d.root_paths.clear();

    for (const auto& [n, r] : d.rank) {
        NeighborTable nt;
        nt.neighbors = g.neighbors_of(n);
        if (n != d.root) {
            std::vector<NodeId> candidates;
            for (NodeId m : nt.neighbors) {
                auto it = d.rank.find(m);
                if (it != d.rank.end() && it->second == r - 1) candidates.push_back(m);
            }
            // BFS guarantees at least one minimum-rank neighbor.
            NodeId pp = candidates.front();
            auto pin = g.preferred.find(n);
            if (pin != g.preferred.end() &&
                std::find(candidates.begin(), candidates.end(), pin->second) !=
                    candidates.end()) {
                pp = pin->second;
            }
            d.parent[n] = pp;
            nt.parent = pp;
            for (NodeId m : candidates)
                if (m != pp) nt.substitutes.push_back(m);
        }
        d.neighbor_tables[n] = std::move(nt);
        d.routing_tables[n] = RoutingTable{};
    }

    // Children per node, then DAO-style propagation: every ancestor learns
    // each descendant through the child route it arrives by.
    for (const auto& [n, p] : d.parent) {
        NodeId dest = n;
        NodeId via = n;
        NodeId hop = p;
        while (true) {
            d.routing_tables[hop].add_entry(via).reachable.insert(dest);
            if (hop == d.root) break;
            via = hop;
            hop = d.parent.at(hop);
        }
    }

    for (const auto& [n, p] : d.parent) {
        PathTrace trace{n};
        NodeId cur = n;
        while (cur != d.root) {
            cur = d.parent.at(cur);
            trace.push_back(cur);
        }
        d.root_paths[n] = std::move(trace);
    }
}

}  // namespace

Dodag build_dodag(const TopologyGraph& graph) {
    Dodag d;
    validate_graph(graph, &d.root);
    d.graph = graph;
    for (const auto& n : graph.nodes) d.roles[n.id] = n.role;

    d.rank = bfs_ranks(graph, d.root);
    if (d.rank.size() != graph.nodes.size()) {
        std::ostringstream msg;
        msg << "unreachable nodes:";
        for (const auto& n : graph.nodes)
            if (!d.rank.count(n.id)) msg << ' ' << to_string(n.id);
        throw std::invalid_argument(msg.str());
    }
    assemble(d);
    return d;
}

Dodag reparent(const Dodag& d, NodeId failed) {
    if (failed == d.root) throw std::invalid_argument("cannot remove the root");

    Dodag out;
    out.root = d.root;
    out.graph = d.graph;
    out.graph.nodes.erase(
        std::remove_if(out.graph.nodes.begin(), out.graph.nodes.end(),
                       [&](const TopologyGraph::NodeDecl& n) { return n.id == failed; }),
        out.graph.nodes.end());
    out.graph.links.erase(
        std::remove_if(out.graph.links.begin(), out.graph.links.end(),
                       [&](const TopologyGraph::Link& l) {
                           return l.a == failed || l.b == failed;
                       }),
        out.graph.links.end());
    out.graph.preferred.erase(failed);
    for (auto it = out.graph.preferred.begin(); it != out.graph.preferred.end();) {
        if (it->second == failed)
            it = out.graph.preferred.erase(it);
        else
            ++it;
    }

    for (const auto& n : out.graph.nodes) out.roles[n.id] = n.role;
    out.rank = bfs_ranks(out.graph, out.root);
    out.detached = d.detached;
    out.detached.erase(failed);
    for (const auto& n : out.graph.nodes)
        if (!out.rank.count(n.id)) out.detached.insert(n.id);
    assemble(out);
    return out;
}

TopologyGraph sample_topology() {
    TopologyGraph g;
    auto node = [&](std::uint8_t id, NodeRole role) {
        g.nodes.push_back({NodeId{id}, role});
    };
    auto link = [&](std::uint8_t a, std::uint8_t b) {
        g.links.push_back({NodeId{a}, NodeId{b}, -1.0});
    };
    node(1, NodeRole::Root);
    for (std::uint8_t f : {2, 3, 4, 5, 6}) node(f, NodeRole::Forwarder);
    for (std::uint8_t s : {7, 8, 9, 10}) node(s, NodeRole::Source);
    link(1, 2);
    link(1, 3);
    link(1, 4);
    link(2, 3);   // 2 and 3 are sibling neighbors
    link(2, 6);   // substitute parent for the aggregator
    link(2, 7);
    link(3, 5);
    link(3, 6);
    link(5, 8);
    link(6, 9);
    link(6, 10);
    g.preferred[NodeId{6}] = NodeId{3};  // solid edge in the reference layout
    return g;
}

TopologyGraph linear_topology(unsigned forwarders, unsigned sources) {
    if (forwarders < 1 || forwarders > 200)
        throw std::invalid_argument("linear topology supports 1..200 forwarders");
    if (sources < 1 || forwarders + 1 + sources > 255)
        throw std::invalid_argument("too many nodes for one-byte ids");
    TopologyGraph g;
    g.nodes.push_back({NodeId{1}, NodeRole::Root});
    for (unsigned i = 0; i < forwarders; ++i)
        g.nodes.push_back({NodeId{static_cast<std::uint8_t>(2 + i)}, NodeRole::Forwarder});
    const std::uint8_t deepest = static_cast<std::uint8_t>(1 + forwarders);
    for (unsigned s = 0; s < sources; ++s)
        g.nodes.push_back(
            {NodeId{static_cast<std::uint8_t>(deepest + 1 + s)}, NodeRole::Source});
    for (std::uint8_t i = 1; i < deepest; ++i)
        g.links.push_back({NodeId{i}, NodeId{static_cast<std::uint8_t>(i + 1)}, -1.0});
    for (unsigned s = 0; s < sources; ++s)
        g.links.push_back(
            {NodeId{deepest}, NodeId{static_cast<std::uint8_t>(deepest + 1 + s)}, -1.0});
    return g;
}

TopologyGraph random_tree_topology(unsigned node_count, unsigned max_children,
                                   std::uint64_t seed) {
    if (node_count < 2 || node_count > 255)
        throw std::invalid_argument("random tree needs 2..255 nodes");
    std::mt19937_64 rng(seed);
    std::vector<unsigned> child_count(node_count + 1, 0);
    std::vector<std::uint8_t> parent(node_count + 1, 0);
    for (unsigned i = 2; i <= node_count; ++i) {
        std::vector<unsigned> open;
        for (unsigned j = 1; j < i; ++j)
            if (child_count[j] < max_children) open.push_back(j);
        const unsigned pick = open[static_cast<std::size_t>(rng() % open.size())];
        parent[i] = static_cast<std::uint8_t>(pick);
        ++child_count[pick];
    }
    TopologyGraph g;
    for (unsigned i = 1; i <= node_count; ++i) {
        NodeRole role = NodeRole::Forwarder;
        if (i == 1)
            role = NodeRole::Root;
        else if (child_count[i] == 0)
            role = NodeRole::Source;
        g.nodes.push_back({NodeId{static_cast<std::uint8_t>(i)}, role});
    }
    for (unsigned i = 2; i <= node_count; ++i)
        g.links.push_back({NodeId{static_cast<std::uint8_t>(i)}, NodeId{parent[i]}, -1.0});
    return g;
}

}  // namespace pppt
