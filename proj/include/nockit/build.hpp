#pragma once

#include <optional>
#include <queue>
#include <set>
#include <utility>

#include "core.hpp"

namespace nockit {

struct BuildConfig {
    bool attach_ips = true;
    // Overrides the default augmentation link set for D2DMesh / D2DMoT.
    // The pair count must match the family default (8 resp. 10).
    std::optional<std::vector<std::pair<NodeId, NodeId>>> extra_links;
};

// Node-id layout of an M x N mesh-of-trees:
//   leaves row-major in [0, MN), then row-tree internals grouped by row and
//   ordered by (level, seg), then column-tree internals likewise.
struct MotShape {
    int M = 0, N = 0;
    int LM = 0, LN = 0; // log2 of M resp. N

    static MotShape of(int M, int N) {
        MotShape s;
        s.M = M;
        s.N = N;
        s.LM = ilog2(M);
        s.LN = ilog2(N);
        return s;
    }

    int leaf(int r, int c) const { return r * N + c; }

    // Offset of level l within one tree over `dim` leaves: levels 1..l-1
    // hold dim/2 + dim/4 + ... nodes.
    static int level_offset(int dim, int l) { return dim - (dim >> (l - 1)); }

    int row_node(int r, int l, int s) const {
        return M * N + r * (N - 1) + level_offset(N, l) + s;
    }

    int col_node(int c, int l, int s) const {
        return M * N + M * (N - 1) + c * (M - 1) + level_offset(M, l) + s;
    }

    int row_root(int r) const { return row_node(r, LN, 0); }
    int col_root(int c) const { return col_node(c, LM, 0); }

    int node_total() const { return 3 * M * N - M - N; }
};

namespace detail {

inline void check_connected(const Topology& t) {
    if (t.nodes.empty()) throw Disconnected("empty topology");
    std::vector<char> seen(t.nodes.size(), 0);
    std::queue<NodeId> q;
    q.push(0);
    seen[0] = 1;
    int visited = 1;
    while (!q.empty()) {
        NodeId v = q.front();
        q.pop();
        for (NodeId w : t.adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                ++visited;
                q.push(w);
            }
    }
    if (visited != t.node_count())
        throw Disconnected("topology is not connected");
}

inline void add_link(Topology& t, NodeId a, NodeId b, LinkKind kind) {
    if (a > b) std::swap(a, b);
    t.links.push_back({a, b, kind});
}

inline std::vector<std::pair<NodeId, NodeId>> normalize_extras(
    const Topology& base, const std::vector<std::pair<NodeId, NodeId>>& pairs,
    std::size_t required) {
    if (pairs.size() != required)
        throw InvalidAugmentation("augmentation needs exactly " +
                                  std::to_string(required) + " links, got " +
                                  std::to_string(pairs.size()));
    std::set<std::pair<NodeId, NodeId>> seen;
    std::vector<std::pair<NodeId, NodeId>> out;
    for (auto [a, b] : pairs) {
        if (a > b) std::swap(a, b);
        if (a < 0 || b >= base.node_count())
            throw InvalidAugmentation("augmentation link endpoint out of range");
        if (a == b) throw InvalidAugmentation("augmentation link is a self-loop");
        if (!seen.insert({a, b}).second)
            throw InvalidAugmentation("duplicate augmentation link");
        if (base.has_link(a, b))
            throw InvalidAugmentation("augmentation duplicates an existing link");
        out.push_back({a, b});
    }
    return out;
}

} // namespace detail

inline Topology& attach_ips(Topology& t) {
    for (int c : t.ips)
        if (c > 0) throw AlreadyAttached("topology already has IP cores attached");
    switch (t.family) {
        case Family::Mesh:
        case Family::Torus:
        case Family::D2DMesh:
            for (NodeId v = 0; v < t.node_count(); ++v) t.ips[v] = 1;
            break;
        case Family::BinaryTree:
            for (NodeId v = 0; v < t.node_count(); ++v)
                if (t.nodes[v].kind == NodeKind::Leaf) t.ips[v] = 4;
            break;
        case Family::MoT:
            for (NodeId v = 0; v < t.node_count(); ++v)
                if (t.nodes[v].kind == NodeKind::Leaf) t.ips[v] = 1;
            break;
        case Family::D2DMoT:
            for (NodeId v = 0; v < t.node_count(); ++v)
                if (t.nodes[v].kind == NodeKind::Leaf) t.ips[v] = 2;
            break;
        default:
            throw FamilyUnsupported("no IP attachment rule for this family");
    }
    return t;
}

namespace detail {

inline Topology grid_base(Family fam, int M, int N) {
    if (M < 2 || N < 2)
        throw SizeUnsupported("grid families need at least 2x2");
    Topology t;
    t.family = fam;
    t.rows = M;
    t.cols = N;
    t.nodes.resize(static_cast<std::size_t>(M) * N);
    for (int r = 0; r < M; ++r)
        for (int c = 0; c < N; ++c) {
            Node& n = t.nodes[r * N + c];
            n.id = r * N + c;
            n.kind = NodeKind::Switch;
            n.row = r;
            n.col = c;
        }
    for (int r = 0; r < M; ++r)
        for (int c = 0; c < N; ++c) {
            if (c + 1 < N) add_link(t, r * N + c, r * N + c + 1, LinkKind::MeshGrid);
            if (r + 1 < M) add_link(t, r * N + c, (r + 1) * N + c, LinkKind::MeshGrid);
        }
    return t;
}

inline Topology mot_base(int M, int N) {
    if (!is_power_of_two(M) || !is_power_of_two(N) || M < 2 || N < 2)
        throw SizeUnsupported("mesh-of-trees needs power-of-two sizes >= 2");
    MotShape sh = MotShape::of(M, N);
    Topology t;
    t.family = Family::MoT;
    t.rows = M;
    t.cols = N;
    t.nodes.resize(sh.node_total());
    for (int r = 0; r < M; ++r)
        for (int c = 0; c < N; ++c) {
            Node& n = t.nodes[sh.leaf(r, c)];
            n.id = sh.leaf(r, c);
            n.kind = NodeKind::Leaf;
            n.row = r;
            n.col = c;
        }
    for (int r = 0; r < M; ++r)
        for (int l = 1; l <= sh.LN; ++l)
            for (int s = 0; s < (N >> l); ++s) {
                NodeId id = sh.row_node(r, l, s);
                Node& n = t.nodes[id];
                n.id = id;
                n.kind = l == sh.LN ? NodeKind::Root : NodeKind::Stem;
                n.axis = Axis::Row;
                n.row = r;
                n.level = l;
                n.seg = s;
                NodeId c0 = l == 1 ? sh.leaf(r, 2 * s) : sh.row_node(r, l - 1, 2 * s);
                NodeId c1 = l == 1 ? sh.leaf(r, 2 * s + 1) : sh.row_node(r, l - 1, 2 * s + 1);
                add_link(t, id, c0, LinkKind::Tree);
                add_link(t, id, c1, LinkKind::Tree);
            }
    for (int c = 0; c < N; ++c)
        for (int l = 1; l <= sh.LM; ++l)
            for (int s = 0; s < (M >> l); ++s) {
                NodeId id = sh.col_node(c, l, s);
                Node& n = t.nodes[id];
                n.id = id;
                n.kind = l == sh.LM ? NodeKind::Root : NodeKind::Stem;
                n.axis = Axis::Col;
                n.col = c;
                n.level = l;
                n.seg = s;
                NodeId c0 = l == 1 ? sh.leaf(2 * s, c) : sh.col_node(c, l - 1, 2 * s);
                NodeId c1 = l == 1 ? sh.leaf(2 * s + 1, c) : sh.col_node(c, l - 1, 2 * s + 1);
                add_link(t, id, c0, LinkKind::Tree);
                add_link(t, id, c1, LinkKind::Tree);
            }
    return t;
}

} // namespace detail

inline Topology build_mesh(int M, int N, const BuildConfig& cfg = {}) {
    Topology t = detail::grid_base(Family::Mesh, M, N);
    t.ips.assign(t.nodes.size(), 0);
    t.rebuild_adjacency();
    detail::check_connected(t);
    if (cfg.attach_ips) attach_ips(t);
    return t;
}

inline Topology build_torus(int M, int N, const BuildConfig& cfg = {}) {
    Topology t = detail::grid_base(Family::Torus, M, N);
    t.family = Family::Torus;
    // A wrap link in a dimension of size 2 would duplicate the grid link, so
    // it is suppressed to keep at most one link per node pair.
    if (N > 2)
        for (int r = 0; r < M; ++r)
            detail::add_link(t, r * N, r * N + N - 1, LinkKind::Wraparound);
    if (M > 2)
        for (int c = 0; c < N; ++c)
            detail::add_link(t, c, (M - 1) * N + c, LinkKind::Wraparound);
    t.ips.assign(t.nodes.size(), 0);
    t.rebuild_adjacency();
    detail::check_connected(t);
    if (cfg.attach_ips) attach_ips(t);
    return t;
}

inline Topology build_binary_tree(int n_leaves, const BuildConfig& cfg = {}) {
    if (!is_power_of_two(n_leaves) || n_leaves < 2)
        throw SizeUnsupported("binary tree needs a power-of-two leaf count >= 2");
    const int L = ilog2(n_leaves);
    Topology t;
    t.family = Family::BinaryTree;
    t.rows = n_leaves;
    t.cols = 0;
    t.nodes.resize(2 * n_leaves - 1);
    auto id_of = [&](int l, int s) {
        return MotShape::level_offset(2 * n_leaves, l + 1) + s;
    };
    for (int l = 0; l <= L; ++l)
        for (int s = 0; s < (n_leaves >> l); ++s) {
            NodeId id = id_of(l, s);
            Node& n = t.nodes[id];
            n.id = id;
            n.kind = l == 0 ? NodeKind::Leaf : (l == L ? NodeKind::Root : NodeKind::Stem);
            n.level = l;
            n.seg = s;
            if (l > 0) {
                detail::add_link(t, id, id_of(l - 1, 2 * s), LinkKind::Tree);
                detail::add_link(t, id, id_of(l - 1, 2 * s + 1), LinkKind::Tree);
            }
        }
    t.ips.assign(t.nodes.size(), 0);
    t.rebuild_adjacency();
    detail::check_connected(t);
    if (cfg.attach_ips) attach_ips(t);
    return t;
}

inline Topology build_mot(int M, int N, const BuildConfig& cfg = {}) {
    Topology t = detail::mot_base(M, N);
    t.ips.assign(t.nodes.size(), 0);
    t.rebuild_adjacency();
    detail::check_connected(t);
    if (cfg.attach_ips) attach_ips(t);
    return t;
}

inline Topology build_d2dmesh(int M, int N, const BuildConfig& cfg = {}) {
    if (M < 3 || N < 3)
        throw SizeUnsupported(
            "diametrical mesh needs at least 3x3 for distinct channel endpoints");
    Topology t = detail::grid_base(Family::D2DMesh, M, N);
    t.family = Family::D2DMesh;
    t.ips.assign(t.nodes.size(), 0);
    auto id = [&](int r, int c) { return r * N + c; };
    std::vector<std::pair<NodeId, NodeId>> extras;
    if (cfg.extra_links) {
        t.rebuild_adjacency();
        extras = detail::normalize_extras(t, *cfg.extra_links, 8);
    } else {
        extras = {
            {id(0, 0), id(M - 1, N - 1)},
            {id(0, N - 1), id(M - 1, 0)},
            {id(0, 0), id(0, N - 1)},
            {id(M - 1, 0), id(M - 1, N - 1)},
            {id(0, 0), id(M - 1, 0)},
            {id(0, N - 1), id(M - 1, N - 1)},
            {id(0, N / 2), id(M - 1, N / 2)},
            {id(M / 2, 0), id(M / 2, N - 1)},
        };
    }
    for (auto [a, b] : extras) detail::add_link(t, a, b, LinkKind::DiameterChannel);
    t.rebuild_adjacency();
    detail::check_connected(t);
    if (cfg.attach_ips) attach_ips(t);
    return t;
}

inline Topology build_d2dmot(int M, int N, const BuildConfig& cfg = {}) {
    Topology t = detail::mot_base(M, N);
    t.family = Family::D2DMoT;
    t.ips.assign(t.nodes.size(), 0);
    MotShape sh = MotShape::of(M, N);
    std::vector<std::pair<NodeId, NodeId>> extras;
    if (cfg.extra_links) {
        t.rebuild_adjacency();
        extras = detail::normalize_extras(
            t, *cfg.extra_links, static_cast<std::size_t>(M) * N / 2 + 2);
        for (auto [a, b] : extras) {
            LinkKind k = t.nodes[a].kind == NodeKind::Leaf &&
                                 t.nodes[b].kind == NodeKind::Leaf
                             ? LinkKind::DiagonalModule
                             : LinkKind::RootShortcut;
            detail::add_link(t, a, b, k);
        }
    } else {
        // One module per 2x2 leaf block, both diagonals linked.
        for (int a = 0; a < M / 2; ++a)
            for (int b = 0; b < N / 2; ++b) {
                detail::add_link(t, sh.leaf(2 * a, 2 * b), sh.leaf(2 * a + 1, 2 * b + 1),
                                 LinkKind::DiagonalModule);
                detail::add_link(t, sh.leaf(2 * a, 2 * b + 1), sh.leaf(2 * a + 1, 2 * b),
                                 LinkKind::DiagonalModule);
            }
        detail::add_link(t, sh.row_root(M / 2 - 1), sh.row_root(M / 2),
                         LinkKind::RootShortcut);
        detail::add_link(t, sh.col_root(N / 2 - 1), sh.col_root(N / 2),
                         LinkKind::RootShortcut);
    }
    // Roots touching a shortcut are internal, the rest external.
    for (Node& n : t.nodes)
        if (n.kind == NodeKind::Root) n.placement = Placement::External;
    for (const Link& l : t.links)
        if (l.kind == LinkKind::RootShortcut) {
            for (NodeId v : {l.a, l.b})
                if (t.nodes[v].kind == NodeKind::Root)
                    t.nodes[v].placement = Placement::Internal;
        }
    t.rebuild_adjacency();
    detail::check_connected(t);
    if (cfg.attach_ips) attach_ips(t);
    return t;
}

inline Topology build_topology(Family fam, int rows, int cols = 0,
                               const BuildConfig& cfg = {}) {
    switch (fam) {
        case Family::Mesh: return build_mesh(rows, cols, cfg);
        case Family::Torus: return build_torus(rows, cols, cfg);
        case Family::BinaryTree: return build_binary_tree(rows, cfg);
        case Family::MoT: return build_mot(rows, cols, cfg);
        case Family::D2DMesh: return build_d2dmesh(rows, cols, cfg);
        case Family::D2DMoT: return build_d2dmot(rows, cols, cfg);
        default:
            throw FamilyUnsupported(std::string("no builder for family ") +
                                    family_name(fam));
    }
}

} // namespace nockit
