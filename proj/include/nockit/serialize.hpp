#pragma once

#include <sstream>

#include <json.hpp>

#include "build.hpp"

namespace nockit {

using json = nlohmann::ordered_json;

// Human-readable node address. Grid switches and tree leaves print their
// coordinates; tree internals print tree id, level and segment; binary-tree
// nodes print level and segment only.
inline std::string node_address(const Node& n) {
    std::ostringstream os;
    if (n.kind == NodeKind::Switch || (n.row >= 0 && n.col >= 0)) {
        os << n.row << ',' << n.col;
    } else if (n.axis == Axis::Row) {
        os << 'r' << n.row << ":l" << n.level << ":s" << n.seg;
    } else if (n.axis == Axis::Col) {
        os << 'c' << n.col << ":l" << n.level << ":s" << n.seg;
    } else {
        os << "t:l" << n.level << ":s" << n.seg;
    }
    return os.str();
}

inline json to_json(const Topology& t) {
    json j;
    j["family"] = family_name(t.family);
    j["rows"] = t.rows;
    j["cols"] = t.cols;
    json nodes = json::array();
    for (const Node& n : t.nodes) {
        json e;
        e["id"] = n.id;
        e["kind"] = node_kind_name(n.kind);
        e["address"] = node_address(n);
        nodes.push_back(std::move(e));
    }
    j["nodes"] = std::move(nodes);
    json links = json::array();
    for (const Link& l : t.links) {
        json e;
        e["a"] = l.a;
        e["b"] = l.b;
        e["kind"] = link_kind_name(l.kind);
        links.push_back(std::move(e));
    }
    j["links"] = std::move(links);
    json ips = json::object();
    for (NodeId v = 0; v < t.node_count(); ++v)
        if (t.ips[v] > 0) ips[std::to_string(v)] = t.ips[v];
    j["ips"] = std::move(ips);
    return j;
}

namespace detail {

inline NodeKind node_kind_from_name(const std::string& s) {
    for (NodeKind k : {NodeKind::Switch, NodeKind::Leaf, NodeKind::Stem, NodeKind::Root})
        if (s == node_kind_name(k)) return k;
    throw Error("unknown node kind: " + s);
}

inline LinkKind link_kind_from_name(const std::string& s) {
    for (LinkKind k : {LinkKind::MeshGrid, LinkKind::Wraparound, LinkKind::Tree,
                       LinkKind::DiagonalModule, LinkKind::RootShortcut,
                       LinkKind::DiameterChannel})
        if (s == link_kind_name(k)) return k;
    throw Error("unknown link kind: " + s);
}

inline void parse_address(const std::string& a, Node& n) {
    char axis = 0;
    if (a.find(',') != std::string::npos) {
        if (std::sscanf(a.c_str(), "%d,%d", &n.row, &n.col) != 2)
            throw Error("bad coordinate address: " + a);
        return;
    }
    int idx = 0, l = 0, s = 0;
    if (std::sscanf(a.c_str(), "%c%d:l%d:s%d", &axis, &idx, &l, &s) == 4) {
        n.level = l;
        n.seg = s;
        if (axis == 'r') {
            n.axis = Axis::Row;
            n.row = idx;
            n.col = -1;
        } else if (axis == 'c') {
            n.axis = Axis::Col;
            n.col = idx;
            n.row = -1;
        } else {
            throw Error("bad tree address: " + a);
        }
        return;
    }
    if (std::sscanf(a.c_str(), "t:l%d:s%d", &l, &s) == 2) {
        n.level = l;
        n.seg = s;
        n.row = -1;
        n.col = -1;
        return;
    }
    throw Error("unparseable node address: " + a);
}

} // namespace detail

inline Topology from_json(const json& j) {
    Topology t;
    t.family = family_from_name(j.at("family").get<std::string>());
    t.rows = j.at("rows").get<int>();
    t.cols = j.at("cols").get<int>();
    for (const json& e : j.at("nodes")) {
        Node n;
        n.id = e.at("id").get<NodeId>();
        n.kind = detail::node_kind_from_name(e.at("kind").get<std::string>());
        detail::parse_address(e.at("address").get<std::string>(), n);
        if (n.id != static_cast<NodeId>(t.nodes.size()))
            throw Error("node ids must be dense and ascending");
        t.nodes.push_back(n);
    }
    for (const json& e : j.at("links")) {
        Link l;
        l.a = e.at("a").get<NodeId>();
        l.b = e.at("b").get<NodeId>();
        l.kind = detail::link_kind_from_name(e.at("kind").get<std::string>());
        if (l.a < 0 || l.b >= t.node_count() || l.a >= l.b)
            throw Error("link endpoints invalid");
        t.links.push_back(l);
    }
    t.ips.assign(t.nodes.size(), 0);
    for (auto& [key, val] : j.at("ips").items()) {
        int id = std::stoi(key);
        if (id < 0 || id >= t.node_count()) throw Error("ip node id out of range");
        t.ips[id] = val.get<int>();
    }
    if (t.family == Family::D2DMoT) {
        for (Node& n : t.nodes)
            if (n.kind == NodeKind::Root) n.placement = Placement::External;
        for (const Link& l : t.links)
            if (l.kind == LinkKind::RootShortcut)
                for (NodeId v : {l.a, l.b})
                    if (t.nodes[v].kind == NodeKind::Root)
                        t.nodes[v].placement = Placement::Internal;
    }
    t.rebuild_adjacency();
    return t;
}

} // namespace nockit
