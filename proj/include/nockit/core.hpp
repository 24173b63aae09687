#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nockit {

using NodeId = int;

// Families with a calculator entry, a builder, or both. Custom marks graphs
// loaded from external matrices/JSON; it has neither formulas nor a builder.
enum class Family {
    Mesh,
    Torus,
    FoldedTorus,
    BinaryTree,
    Octagon,
    Spin,
    Bft,
    MoT,
    D2DMesh,
    D2DMoT,
    Custom,
};

enum class NodeKind { Switch, Leaf, Stem, Root };

// Axis of the tree a Stem/Root node belongs to. Grid switches and binary-tree
// nodes use None.
enum class Axis { None, Row, Col };

// Root placement: Internal roots carry a shortcut link, External roots do not.
enum class Placement { None, Internal, External };

enum class LinkKind {
    MeshGrid,
    Wraparound,
    Tree,
    DiagonalModule,
    RootShortcut,
    DiameterChannel,
};

struct Node {
    NodeId id = -1;
    NodeKind kind = NodeKind::Switch;
    Axis axis = Axis::None;
    Placement placement = Placement::None;
    // Grid switches and leaves: row/col hold coordinates.
    // Row-tree internals: row = tree index, col = -1; Col-tree internals: the
    // reverse. level counts up from the leaves (leaf level 0); seg is the
    // position within the level.
    int row = -1;
    int col = -1;
    int level = 0;
    int seg = 0;
};

struct Link {
    NodeId a = -1; // invariant: a < b
    NodeId b = -1;
    LinkKind kind = LinkKind::MeshGrid;

    friend bool operator==(const Link& x, const Link& y) {
        return x.a == y.a && x.b == y.b && x.kind == y.kind;
    }
};

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SizeUnsupported : Error { using Error::Error; };
struct FamilyUnsupported : Error { using Error::Error; };
struct InvalidAugmentation : Error { using Error::Error; };
struct AlreadyAttached : Error { using Error::Error; };
struct Disconnected : Error { using Error::Error; };
struct RoutingIncomplete : Error { using Error::Error; };
struct LivelockDetected : Error { using Error::Error; };
struct AddressMismatch : Error { using Error::Error; };
struct MalformedMatrix : Error { using Error::Error; };
struct ConfigInvalid : Error { using Error::Error; };

struct Topology {
    Family family = Family::Custom;
    int rows = 0; // BinaryTree stores the leaf-router count here, cols = 0
    int cols = 0;
    std::vector<Node> nodes;
    std::vector<Link> links;
    std::vector<int> ips;                  // IP cores attached per node
    std::vector<std::vector<NodeId>> adj;  // sorted neighbour lists

    int node_count() const { return static_cast<int>(nodes.size()); }
    int link_count() const { return static_cast<int>(links.size()); }

    long long total_ips() const {
        long long t = 0;
        for (int c : ips) t += c;
        return t;
    }

    bool has_link(NodeId a, NodeId b) const {
        if (a > b) std::swap(a, b);
        for (const Link& l : links)
            if (l.a == a && l.b == b) return true;
        return false;
    }

    void rebuild_adjacency() {
        adj.assign(nodes.size(), {});
        for (const Link& l : links) {
            adj[l.a].push_back(l.b);
            adj[l.b].push_back(l.a);
        }
        for (auto& v : adj) std::sort(v.begin(), v.end());
    }

    std::vector<NodeId> ip_nodes() const {
        std::vector<NodeId> out;
        for (NodeId v = 0; v < node_count(); ++v)
            if (ips[v] > 0) out.push_back(v);
        return out;
    }
};

inline const char* family_name(Family f) {
    switch (f) {
        case Family::Mesh: return "mesh";
        case Family::Torus: return "torus";
        case Family::FoldedTorus: return "foldedtorus";
        case Family::BinaryTree: return "binarytree";
        case Family::Octagon: return "octagon";
        case Family::Spin: return "spin";
        case Family::Bft: return "bft";
        case Family::MoT: return "mot";
        case Family::D2DMesh: return "d2dmesh";
        case Family::D2DMoT: return "d2dmot";
        case Family::Custom: return "custom";
    }
    return "unknown";
}

inline Family family_from_name(const std::string& s) {
    for (Family f : {Family::Mesh, Family::Torus, Family::FoldedTorus,
                     Family::BinaryTree, Family::Octagon, Family::Spin,
                     Family::Bft, Family::MoT, Family::D2DMesh,
                     Family::D2DMoT, Family::Custom})
        if (s == family_name(f)) return f;
    throw FamilyUnsupported("unknown family name: " + s);
}

inline const char* node_kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::Switch: return "switch";
        case NodeKind::Leaf: return "leaf";
        case NodeKind::Stem: return "stem";
        case NodeKind::Root: return "root";
    }
    return "unknown";
}

inline const char* link_kind_name(LinkKind k) {
    switch (k) {
        case LinkKind::MeshGrid: return "grid";
        case LinkKind::Wraparound: return "wrap";
        case LinkKind::Tree: return "tree";
        case LinkKind::DiagonalModule: return "diagonal";
        case LinkKind::RootShortcut: return "shortcut";
        case LinkKind::DiameterChannel: return "diameter";
    }
    return "unknown";
}

inline bool is_power_of_two(long long v) { return v > 0 && (v & (v - 1)) == 0; }

inline int ilog2(long long v) {
    int l = 0;
    while (v > 1) { v >>= 1; ++l; }
    return l;
}

} // namespace nockit
