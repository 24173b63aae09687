#pragma once

#include <map>
#include <optional>
#include <queue>
#include <set>

#include "core.hpp"

namespace nockit {

// Directed graph view used by the path search; topologies convert to one with
// both directions per link, parsed adjacency matrices keep their asymmetry.
struct Digraph {
    int n = 0;
    std::vector<std::vector<NodeId>> out;
    std::vector<std::vector<NodeId>> in;

    void add_edge(NodeId a, NodeId b) {
        out[a].push_back(b);
        in[b].push_back(a);
    }

    void sort_edges() {
        for (auto& v : out) std::sort(v.begin(), v.end());
        for (auto& v : in) std::sort(v.begin(), v.end());
    }
};

inline Digraph digraph_of(const Topology& t) {
    Digraph g;
    g.n = t.node_count();
    g.out.resize(g.n);
    g.in.resize(g.n);
    for (const Link& l : t.links) {
        g.add_edge(l.a, l.b);
        g.add_edge(l.b, l.a);
    }
    g.sort_edges();
    return g;
}

inline std::vector<int> bfs_dist(const Digraph& g, NodeId src) {
    std::vector<int> dist(g.n, -1);
    std::queue<NodeId> q;
    dist[src] = 0;
    q.push(src);
    while (!q.empty()) {
        NodeId v = q.front();
        q.pop();
        for (NodeId w : g.out[v])
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                q.push(w);
            }
    }
    return dist;
}

inline std::vector<int> bfs_dist(const Topology& t, NodeId src) {
    return bfs_dist(digraph_of(t), src);
}

struct PathResult {
    std::vector<NodeId> path; // src first, dst last
    int distance = 0;
};

// Unreachable destinations yield nullopt. Among equally short paths the walk
// back from the destination picks the highest-id predecessor at every step.
inline std::optional<PathResult> bfs_shortest_path(const Digraph& g, NodeId src,
                                                   NodeId dst) {
    if (src < 0 || dst < 0 || src >= g.n || dst >= g.n)
        throw Error("path endpoints out of range");
    std::vector<int> dist = bfs_dist(g, src);
    if (dist[dst] < 0) return std::nullopt;
    std::vector<NodeId> rev{dst};
    NodeId v = dst;
    while (v != src) {
        NodeId best = -1;
        for (NodeId p : g.in[v])
            if (dist[p] == dist[v] - 1 && p > best) best = p;
        v = best;
        rev.push_back(v);
    }
    PathResult r;
    r.path.assign(rev.rbegin(), rev.rend());
    r.distance = dist[dst];
    return r;
}

inline std::optional<PathResult> bfs_shortest_path(const Topology& t, NodeId src,
                                                   NodeId dst) {
    return bfs_shortest_path(digraph_of(t), src, dst);
}

struct GraphMetrics {
    int diameter = 0;
    double avg_hops = 0.0;             // mean over ordered distinct pairs
    std::vector<int> eccentricity;     // per node
};

inline std::vector<std::vector<int>> all_pairs_dist(const Topology& t) {
    Digraph g = digraph_of(t);
    std::vector<std::vector<int>> d(g.n);
    for (NodeId v = 0; v < g.n; ++v) d[v] = bfs_dist(g, v);
    return d;
}

inline GraphMetrics all_pairs_metrics(const Topology& t) {
    Digraph g = digraph_of(t);
    GraphMetrics m;
    m.eccentricity.resize(g.n, 0);
    long long total = 0;
    for (NodeId v = 0; v < g.n; ++v) {
        std::vector<int> dist = bfs_dist(g, v);
        for (NodeId w = 0; w < g.n; ++w) {
            if (dist[w] < 0) throw Disconnected("metrics need a connected graph");
            total += dist[w];
            m.eccentricity[v] = std::max(m.eccentricity[v], dist[w]);
        }
        m.diameter = std::max(m.diameter, m.eccentricity[v]);
    }
    long long pairs = 1LL * g.n * (g.n - 1);
    m.avg_hops = pairs == 0 ? 0.0 : static_cast<double>(total) / pairs;
    return m;
}

// Longest shortest path between IP-carrying nodes, i.e. between the points
// where traffic actually enters and leaves the fabric.
inline int endpoint_diameter(const Topology& t) {
    Digraph g = digraph_of(t);
    std::vector<NodeId> ends = t.ip_nodes();
    int d = 0;
    for (NodeId v : ends) {
        std::vector<int> dist = bfs_dist(g, v);
        for (NodeId w : ends) {
            if (dist[w] < 0) throw Disconnected("endpoint metrics need a connected graph");
            d = std::max(d, dist[w]);
        }
    }
    return d;
}

struct BisectionCheck {
    bool is_bisection = false;
    int components = 1;
    std::pair<int, int> halves{0, 0};
};

// Removing `cut` must split the graph into exactly two components whose node
// counts differ by at most one.
inline BisectionCheck verify_bisection(const Topology& t,
                                       const std::vector<Link>& cut) {
    auto key = [](NodeId a, NodeId b) {
        if (a > b) std::swap(a, b);
        return std::pair<NodeId, NodeId>(a, b);
    };
    std::set<std::pair<NodeId, NodeId>> removed;
    for (const Link& l : cut) removed.insert(key(l.a, l.b));

    std::vector<int> comp(t.node_count(), -1);
    int ncomp = 0;
    for (NodeId s = 0; s < t.node_count(); ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = ncomp;
        std::queue<NodeId> q;
        q.push(s);
        while (!q.empty()) {
            NodeId v = q.front();
            q.pop();
            for (NodeId w : t.adj[v]) {
                if (comp[w] >= 0 || removed.count(key(v, w))) continue;
                comp[w] = ncomp;
                q.push(w);
            }
        }
        ++ncomp;
    }
    BisectionCheck r;
    r.components = ncomp;
    if (ncomp == 2) {
        int a = 0;
        for (int c : comp) a += c == 0;
        int b = t.node_count() - a;
        r.halves = {std::min(a, b), std::max(a, b)};
        r.is_bisection = r.halves.second - r.halves.first <= 1;
    }
    return r;
}

// Channel dependency graph: one vertex per directed link occurrence, one edge
// per consecutive channel pair appearing on some routed path.
struct ChannelDependencyGraph {
    std::vector<std::pair<NodeId, NodeId>> channels;
    std::map<std::pair<NodeId, NodeId>, int> index;
    std::vector<std::vector<int>> edges;

    int channel_id(NodeId from, NodeId to) const {
        auto it = index.find({from, to});
        if (it == index.end()) throw Error("unknown channel in dependency graph");
        return it->second;
    }
};

inline ChannelDependencyGraph make_cdg_vertices(const Topology& t) {
    ChannelDependencyGraph g;
    for (const Link& l : t.links) {
        g.index[{l.a, l.b}] = static_cast<int>(g.channels.size());
        g.channels.push_back({l.a, l.b});
        g.index[{l.b, l.a}] = static_cast<int>(g.channels.size());
        g.channels.push_back({l.b, l.a});
    }
    g.edges.resize(g.channels.size());
    return g;
}

inline bool is_deadlock_free(const ChannelDependencyGraph& g) {
    enum { White, Grey, Black };
    std::vector<int> color(g.channels.size(), White);
    std::vector<std::pair<int, std::size_t>> stack;
    for (int s = 0; s < static_cast<int>(g.channels.size()); ++s) {
        if (color[s] != White) continue;
        color[s] = Grey;
        stack.push_back({s, 0});
        while (!stack.empty()) {
            auto& [v, i] = stack.back();
            if (i < g.edges[v].size()) {
                int w = g.edges[v][i++];
                if (color[w] == Grey) return false;
                if (color[w] == White) {
                    color[w] = Grey;
                    stack.push_back({w, 0});
                }
            } else {
                color[v] = Black;
                stack.pop_back();
            }
        }
    }
    return true;
}

} // namespace nockit
