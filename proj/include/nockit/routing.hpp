#pragma once

#include <functional>
#include <memory>

#include "analysis.hpp"
#include "build.hpp"

namespace nockit {

enum class Direction { North, South, East, West, Deliver };

inline const char* direction_name(Direction d) {
    switch (d) {
        case Direction::North: return "north";
        case Direction::South: return "south";
        case Direction::East: return "east";
        case Direction::West: return "west";
        case Direction::Deliver: return "deliver";
    }
    return "unknown";
}

struct XYAddress {
    int row = 0;
    int col = 0;
};

// Dimension order: the row offset is corrected first, then the column.
// North decreases the row, East increases the column.
inline Direction xy_next_hop(XYAddress cur, XYAddress dst) {
    if (cur.row > dst.row) return Direction::North;
    if (cur.row < dst.row) return Direction::South;
    if (cur.col < dst.col) return Direction::East;
    if (cur.col > dst.col) return Direction::West;
    return Direction::Deliver;
}

// Hierarchical address of a mesh-of-trees node. Tree levels count down to 0
// at the root; a leaf carries full row/column prefixes and the maximal
// levels. core_id selects the IP core at the destination leaf.
struct MoTAddress {
    int rn = 0;      // row prefix value
    int rn_bits = 0; // bits resolved in rn
    int cl = 0;      // column-tree level, 0 = root
    int cn = 0;      // column prefix value
    int cn_bits = 0; // bits resolved in cn
    int rl = 0;      // row-tree level, 0 = root
    int core_id = 0;
};

inline MoTAddress mot_address_of(const Topology& t, NodeId id) {
    if (t.family != Family::MoT && t.family != Family::D2DMoT)
        throw AddressMismatch("hierarchical addresses need a mesh-of-trees family");
    if (id < 0 || id >= t.node_count()) throw AddressMismatch("node id out of range");
    MotShape sh = MotShape::of(t.rows, t.cols);
    const Node& n = t.nodes[id];
    MoTAddress a;
    if (n.kind == NodeKind::Leaf) {
        a.rn = n.row;
        a.rn_bits = sh.LM;
        a.cl = sh.LM;
        a.cn = n.col;
        a.cn_bits = sh.LN;
        a.rl = sh.LN;
    } else if (n.axis == Axis::Col) {
        a.rn = n.seg;
        a.rn_bits = sh.LM - n.level;
        a.cl = sh.LM - n.level;
        a.cn = n.col;
        a.cn_bits = sh.LN;
        a.rl = sh.LN;
    } else {
        a.rn = n.row;
        a.rn_bits = sh.LM;
        a.cl = sh.LM;
        a.cn = n.seg;
        a.cn_bits = sh.LN - n.level;
        a.rl = sh.LN - n.level;
    }
    return a;
}

inline NodeId node_at(const Topology& t, const MoTAddress& a) {
    if (t.family != Family::MoT && t.family != Family::D2DMoT)
        throw AddressMismatch("hierarchical addresses need a mesh-of-trees family");
    MotShape sh = MotShape::of(t.rows, t.cols);
    auto in_range = [](int v, int bits) { return v >= 0 && v < (1 << bits); };
    if (a.cl == sh.LM && a.rl == sh.LN) {
        if (a.rn_bits != sh.LM || a.cn_bits != sh.LN || !in_range(a.rn, sh.LM) ||
            !in_range(a.cn, sh.LN))
            throw AddressMismatch("leaf address needs full prefixes");
        return sh.leaf(a.rn, a.cn);
    }
    if (a.cl < sh.LM && a.rl == sh.LN) {
        int level = sh.LM - a.cl;
        if (a.rn_bits != a.cl || a.cn_bits != sh.LN || !in_range(a.rn, a.cl) ||
            !in_range(a.cn, sh.LN))
            throw AddressMismatch("column-tree address prefixes are inconsistent");
        return sh.col_node(a.cn, level, a.rn);
    }
    if (a.cl == sh.LM && a.rl < sh.LN) {
        int level = sh.LN - a.rl;
        if (a.rn_bits != sh.LM || a.cn_bits != a.rl || !in_range(a.rn, sh.LM) ||
            !in_range(a.cn, a.rl))
            throw AddressMismatch("row-tree address prefixes are inconsistent");
        return sh.row_node(a.rn, level, a.cn);
    }
    throw AddressMismatch("address resolves to no node class");
}

// nullopt from next() means "deliver here".
struct RoutingFunction {
    std::string name;
    std::function<std::optional<NodeId>(NodeId, NodeId)> next;
};

namespace detail {

inline XYAddress grid_addr(const Topology& t, NodeId v) {
    return {t.nodes[v].row, t.nodes[v].col};
}

inline NodeId grid_id(const Topology& t, int r, int c) { return r * t.cols + c; }

inline NodeId apply_direction(const Topology& t, NodeId v, Direction d) {
    XYAddress a = grid_addr(t, v);
    switch (d) {
        case Direction::North: return grid_id(t, a.row - 1, a.col);
        case Direction::South: return grid_id(t, a.row + 1, a.col);
        case Direction::East: return grid_id(t, a.row, a.col + 1);
        case Direction::West: return grid_id(t, a.row, a.col - 1);
        case Direction::Deliver: return v;
    }
    return v;
}

// 2 * (levels climbed to the lowest common ancestor) between two leaves of
// one complete binary tree, indices taken as bit strings.
inline int tree_distance(int a, int b) {
    if (a == b) return 0;
    int x = a ^ b, msb = 0;
    while (x > 1) { x >>= 1; ++msb; }
    return 2 * (msb + 1);
}

} // namespace detail

inline void require_grid(const Topology& t) {
    if (t.family != Family::Mesh && t.family != Family::Torus &&
        t.family != Family::D2DMesh)
        throw FamilyUnsupported("router needs a grid family");
}

inline RoutingFunction xy_router(const Topology& t) {
    require_grid(t);
    RoutingFunction f;
    f.name = "xy";
    f.next = [&t](NodeId curr, NodeId dst) -> std::optional<NodeId> {
        Direction d = xy_next_hop(detail::grid_addr(t, curr), detail::grid_addr(t, dst));
        if (d == Direction::Deliver) return std::nullopt;
        return detail::apply_direction(t, curr, d);
    };
    return f;
}

// Dimension-order routing on the diametrical mesh. Short journeys fall back
// to plain XY; long ones detour to the nearest node owning a diameter channel
// whose far end strictly reduces the remaining shortest-path distance.
inline RoutingFunction ext_xy_router(const Topology& t) {
    if (t.family != Family::D2DMesh)
        throw FamilyUnsupported("extended XY needs a diametrical mesh");
    struct State {
        const Topology* t;
        std::vector<std::vector<int>> dist;
        std::vector<std::vector<NodeId>> channel_ends; // per node
    };
    auto st = std::make_shared<State>();
    st->t = &t;
    st->dist = all_pairs_dist(t);
    st->channel_ends.resize(t.node_count());
    for (const Link& l : t.links)
        if (l.kind == LinkKind::DiameterChannel) {
            st->channel_ends[l.a].push_back(l.b);
            st->channel_ends[l.b].push_back(l.a);
        }
    for (auto& v : st->channel_ends) std::sort(v.begin(), v.end());

    RoutingFunction f;
    f.name = "extxy";
    f.next = [st](NodeId curr, NodeId dst) -> std::optional<NodeId> {
        const Topology& t = *st->t;
        if (curr == dst) return std::nullopt;
        XYAddress ca = detail::grid_addr(t, curr), da = detail::grid_addr(t, dst);
        int dr = std::abs(ca.row - da.row), dc = std::abs(ca.col - da.col);
        if (ca.row == da.row || ca.col == da.col || dr + dc <= t.cols - 1)
            return detail::apply_direction(t, curr, xy_next_hop(ca, da));
        for (NodeId far : st->channel_ends[curr])
            if (st->dist[far][dst] < st->dist[curr][dst]) return far;
        NodeId target = -1;
        int best = -1;
        for (NodeId o = 0; o < t.node_count(); ++o) {
            if (o == curr) continue;
            bool owns = false;
            for (NodeId far : st->channel_ends[o])
                if (st->dist[far][dst] < st->dist[o][dst]) { owns = true; break; }
            if (!owns) continue;
            XYAddress oa = detail::grid_addr(t, o);
            int man = std::abs(ca.row - oa.row) + std::abs(ca.col - oa.col);
            if (best < 0 || man < best) { best = man; target = o; }
        }
        if (target < 0) return detail::apply_direction(t, curr, xy_next_hop(ca, da));
        return detail::apply_direction(t, curr, xy_next_hop(ca, detail::grid_addr(t, target)));
    };
    return f;
}

namespace detail {

// Column-tree phase fixes the row, row-tree phase fixes the column. Internal
// nodes re-derive the decision from their own position, so the function is
// total over all sources.
inline std::optional<NodeId> mot_step(const Topology& t, const MotShape& sh,
                                      NodeId curr, NodeId dst) {
    if (curr == dst) return std::nullopt;
    const Node& dn = t.nodes[dst];
    if (dn.kind != NodeKind::Leaf)
        throw AddressMismatch("destination must be a leaf node");
    const int r2 = dn.row, c2 = dn.col;
    const Node& n = t.nodes[curr];
    if (n.kind == NodeKind::Leaf) {
        if (n.row != r2) return sh.col_node(n.col, 1, n.row >> 1);
        return sh.row_node(n.row, 1, n.col >> 1);
    }
    if (n.axis == Axis::Col) {
        if ((r2 >> n.level) == n.seg)
            return n.level == 1 ? sh.leaf(r2, n.col)
                                : sh.col_node(n.col, n.level - 1, r2 >> (n.level - 1));
        return sh.col_node(n.col, n.level + 1, n.seg >> 1);
    }
    if ((c2 >> n.level) == n.seg)
        return n.level == 1 ? sh.leaf(n.row, c2)
                            : sh.row_node(n.row, n.level - 1, c2 >> (n.level - 1));
    return sh.row_node(n.row, n.level + 1, n.seg >> 1);
}

} // namespace detail

inline RoutingFunction mot_router(const Topology& t) {
    if (t.family != Family::MoT)
        throw FamilyUnsupported("tree router needs a mesh-of-trees");
    auto sh = MotShape::of(t.rows, t.cols);
    RoutingFunction f;
    f.name = "mot";
    f.next = [&t, sh](NodeId curr, NodeId dst) {
        return detail::mot_step(t, sh, curr, dst);
    };
    return f;
}

inline std::optional<NodeId> mot_next_hop(const Topology& t, NodeId curr,
                                          const MoTAddress& dest) {
    NodeId dst = node_at(t, dest);
    if (t.nodes[dst].kind != NodeKind::Leaf)
        throw AddressMismatch("destination address must name a leaf");
    if (dest.core_id < 0 || dest.core_id >= t.ips[dst])
        throw AddressMismatch("core_id does not exist at the destination leaf");
    return detail::mot_step(t, MotShape::of(t.rows, t.cols), curr, dst);
}

// Same two-phase scheme as the plain tree router, extended by the diametrical
// channels: a leaf in the wrong row and column takes its module diagonal when
// the far end strictly reduces the summed tree distances, and the column
// phase crosses a root shortcut when that strictly shortens the remainder.
// Channel classes are traversed in a fixed global order (diagonal, column-up,
// shortcut, column-down, row-up, row-down), so the dependency graph stays
// acyclic by construction.
inline RoutingFunction d2dmot_router(const Topology& t) {
    if (t.family != Family::D2DMoT)
        throw FamilyUnsupported("diametrical tree router needs a diametrical mesh-of-trees");
    struct State {
        const Topology* t;
        MotShape sh;
        std::vector<NodeId> diag;             // leaf -> diagonal partner or -1
        std::vector<std::vector<NodeId>> sc;  // node -> same-axis shortcut ends
    };
    auto st = std::make_shared<State>();
    st->t = &t;
    st->sh = MotShape::of(t.rows, t.cols);
    st->diag.assign(t.node_count(), -1);
    st->sc.resize(t.node_count());
    for (const Link& l : t.links) {
        if (l.kind == LinkKind::DiagonalModule) {
            st->diag[l.a] = l.b;
            st->diag[l.b] = l.a;
        } else if (l.kind == LinkKind::RootShortcut) {
            if (t.nodes[l.a].axis == t.nodes[l.b].axis) {
                st->sc[l.a].push_back(l.b);
                st->sc[l.b].push_back(l.a);
            }
        }
    }
    for (auto& v : st->sc) std::sort(v.begin(), v.end());

    RoutingFunction f;
    f.name = "d2dmot";
    f.next = [st](NodeId curr, NodeId dst) -> std::optional<NodeId> {
        const Topology& t = *st->t;
        const MotShape& sh = st->sh;
        if (curr == dst) return std::nullopt;
        const Node& dn = t.nodes[dst];
        if (dn.kind != NodeKind::Leaf)
            throw AddressMismatch("destination must be a leaf node");
        const int r2 = dn.row, c2 = dn.col;
        const Node& n = t.nodes[curr];
        if (n.kind == NodeKind::Leaf && n.row != r2 && n.col != c2) {
            NodeId p = st->diag[curr];
            if (p >= 0) {
                const Node& pn = t.nodes[p];
                int here = detail::tree_distance(n.row, r2) + detail::tree_distance(n.col, c2);
                int there = detail::tree_distance(pn.row, r2) + detail::tree_distance(pn.col, c2);
                if (there < here) return p;
            }
            return sh.col_node(n.col, 1, n.row >> 1);
        }
        if (n.kind == NodeKind::Root && n.axis == Axis::Col) {
            int d_here = detail::tree_distance(n.col, c2);
            for (NodeId far : st->sc[curr]) {
                if (detail::tree_distance(t.nodes[far].col, c2) + 1 < d_here) return far;
            }
        }
        return detail::mot_step(t, sh, curr, dst);
    };
    return f;
}

// Shortest-path next-hop table; ties resolved toward the lowest neighbour id.
inline RoutingFunction table_router(const Topology& t) {
    struct State {
        const Topology* t;
        std::vector<std::vector<int>> dist;
    };
    auto st = std::make_shared<State>();
    st->t = &t;
    st->dist = all_pairs_dist(t);
    RoutingFunction f;
    f.name = "table";
    f.next = [st](NodeId curr, NodeId dst) -> std::optional<NodeId> {
        if (curr == dst) return std::nullopt;
        for (NodeId nb : st->t->adj[curr])
            if (st->dist[nb][dst] >= 0 && st->dist[nb][dst] == st->dist[curr][dst] - 1)
                return nb;
        throw RoutingIncomplete("no next hop towards destination");
    };
    return f;
}

// Deliberately deadlock-prone baseline for the dependency analysis: every
// ring is traversed forward only, so each wrap direction forms a full cycle.
inline RoutingFunction naive_wrap_router(const Topology& t) {
    if (t.family != Family::Torus)
        throw FamilyUnsupported("wrap router needs a torus");
    RoutingFunction f;
    f.name = "naivewrap";
    f.next = [&t](NodeId curr, NodeId dst) -> std::optional<NodeId> {
        XYAddress ca = detail::grid_addr(t, curr), da = detail::grid_addr(t, dst);
        if (ca.row != da.row) return detail::grid_id(t, (ca.row + 1) % t.rows, ca.col);
        if (ca.col != da.col) return detail::grid_id(t, ca.row, (ca.col + 1) % t.cols);
        return std::nullopt;
    };
    return f;
}

inline PathResult route_trace(const Topology& t, const RoutingFunction& routing,
                              NodeId src, NodeId dst) {
    PathResult r;
    r.path.push_back(src);
    NodeId curr = src;
    const int limit = t.node_count();
    while (true) {
        std::optional<NodeId> nx = routing.next(curr, dst);
        if (!nx) break;
        if (*nx == curr)
            throw RoutingIncomplete("routing produced no progress at node " +
                                    std::to_string(curr));
        if (!std::binary_search(t.adj[curr].begin(), t.adj[curr].end(), *nx))
            throw RoutingIncomplete("routing hopped to a non-neighbour");
        r.path.push_back(*nx);
        curr = *nx;
        if (static_cast<int>(r.path.size()) > limit)
            throw LivelockDetected("path exceeded the node count");
    }
    if (curr != dst)
        throw RoutingIncomplete("delivered at the wrong node");
    r.distance = static_cast<int>(r.path.size()) - 1;
    return r;
}

struct StretchRow {
    NodeId src = -1;
    NodeId dst = -1;
    int routed = 0;
    int shortest = 0;
};

struct StretchReport {
    std::string routing;
    long long pairs = 0;
    long long delivered = 0;
    double delivery_rate = 0.0;
    double max_stretch = 0.0;
    double mean_stretch = 0.0;
    std::vector<StretchRow> rows;
    std::vector<std::pair<std::pair<NodeId, NodeId>, std::string>> failures;
};

// Exercises every ordered pair of IP-carrying nodes.
inline StretchReport validate_routing(const Topology& t, const RoutingFunction& routing) {
    StretchReport rep;
    rep.routing = routing.name;
    Digraph g = digraph_of(t);
    std::vector<NodeId> ends = t.ip_nodes();
    double stretch_sum = 0.0;
    for (NodeId s : ends) {
        std::vector<int> dist = bfs_dist(g, s);
        for (NodeId d : ends) {
            if (s == d) continue;
            ++rep.pairs;
            try {
                PathResult pr = route_trace(t, routing, s, d);
                ++rep.delivered;
                StretchRow row{s, d, pr.distance, dist[d]};
                double stretch = static_cast<double>(row.routed) / row.shortest;
                rep.max_stretch = std::max(rep.max_stretch, stretch);
                stretch_sum += stretch;
                rep.rows.push_back(row);
            } catch (const Error& e) {
                rep.failures.push_back({{s, d}, e.what()});
            }
        }
    }
    rep.delivery_rate = rep.pairs == 0 ? 1.0
                                       : static_cast<double>(rep.delivered) / rep.pairs;
    rep.mean_stretch = rep.delivered == 0 ? 0.0 : stretch_sum / rep.delivered;
    return rep;
}

// Dependencies are collected from the routed paths of every ordered pair of
// IP-carrying nodes.
inline ChannelDependencyGraph build_cdg(const Topology& t,
                                        const RoutingFunction& routing) {
    ChannelDependencyGraph g = make_cdg_vertices(t);
    std::set<std::pair<int, int>> es;
    std::vector<NodeId> ends = t.ip_nodes();
    for (NodeId s : ends)
        for (NodeId d : ends) {
            if (s == d) continue;
            PathResult pr = route_trace(t, routing, s, d);
            for (std::size_t i = 0; i + 2 < pr.path.size(); ++i) {
                int c1 = g.channel_id(pr.path[i], pr.path[i + 1]);
                int c2 = g.channel_id(pr.path[i + 1], pr.path[i + 2]);
                es.insert({c1, c2});
            }
        }
    for (auto [a, b] : es) g.edges[a].push_back(b);
    return g;
}

} // namespace nockit
