#include <catch2/catch_amalgamated.hpp>

#include "nockit/build.hpp"
#include "nockit/routing.hpp"

using namespace nockit;

TEST_CASE("dimension order next hop", "[routing]") {
    XYAddress c{1, 1};
    REQUIRE(xy_next_hop(c, XYAddress{1, 1}) == Direction::Deliver);
    REQUIRE(xy_next_hop(c, XYAddress{0, 1}) == Direction::North);
    REQUIRE(xy_next_hop(c, XYAddress{3, 1}) == Direction::South);
    REQUIRE(xy_next_hop(c, XYAddress{1, 3}) == Direction::East);
    REQUIRE(xy_next_hop(c, XYAddress{1, 0}) == Direction::West);
    // The row offset is corrected before the column offset.
    REQUIRE(xy_next_hop(c, XYAddress{0, 0}) == Direction::North);
    REQUIRE(xy_next_hop(c, XYAddress{2, 3}) == Direction::South);
    REQUIRE(std::string(direction_name(Direction::East)) == "east");
}

TEST_CASE("dimension order routing is shortest on meshes", "[routing]") {
    for (int n = 2; n <= 6; ++n) {
        Topology t = build_mesh(n, n);
        StretchReport r = validate_routing(t, xy_router(t));
        REQUIRE(r.pairs == 1LL * n * n * (n * n - 1));
        REQUIRE(r.delivery_rate == 1.0);
        REQUIRE(r.max_stretch == 1.0);
        REQUIRE(r.failures.empty());
    }
}

TEST_CASE("trace guards against broken routing functions", "[routing]") {
    Topology t = build_mesh(2, 2);

    RoutingFunction stay{"stay", [](NodeId c, NodeId) { return std::optional<NodeId>(c); }};
    REQUIRE_THROWS_AS(route_trace(t, stay, 0, 3), RoutingIncomplete);

    RoutingFunction pingpong{"pingpong", [](NodeId c, NodeId) {
        return std::optional<NodeId>(c == 0 ? 1 : 0);
    }};
    REQUIRE_THROWS_AS(route_trace(t, pingpong, 0, 3), LivelockDetected);

    RoutingFunction teleport{"teleport", [](NodeId, NodeId d) {
        return std::optional<NodeId>(d);
    }};
    REQUIRE_THROWS_AS(route_trace(t, teleport, 0, 3), RoutingIncomplete);

    RoutingFunction early{"early", [](NodeId, NodeId) {
        return std::optional<NodeId>();
    }};
    REQUIRE_THROWS_AS(route_trace(t, early, 0, 3), RoutingIncomplete);

    PathResult self = route_trace(t, xy_router(t), 3, 3);
    REQUIRE(self.path == std::vector<NodeId>{3});
    REQUIRE(self.distance == 0);
}

TEST_CASE("tree grid routing fixes the row then the column", "[routing]") {
    Topology t = build_mot(4, 4);
    MotShape sh = MotShape::of(4, 4);
    RoutingFunction r = mot_router(t);

    REQUIRE(route_trace(t, r, sh.leaf(0, 0), sh.leaf(3, 0)).distance == 4);
    REQUIRE(route_trace(t, r, sh.leaf(0, 0), sh.leaf(3, 3)).distance == 8);
    PathResult hop = route_trace(t, r, sh.leaf(0, 0), sh.leaf(0, 1));
    REQUIRE(hop.path == std::vector<NodeId>{0, 16, 1});
    REQUIRE(route_trace(t, r, sh.leaf(2, 2), sh.leaf(2, 2)).distance == 0);

    // First hop out of a leaf in the wrong row enters its column tree.
    REQUIRE(route_trace(t, r, sh.leaf(0, 0), sh.leaf(3, 3)).path[1] == 28);

    // Internal sources are routed too.
    REQUIRE(route_trace(t, r, sh.row_node(2, 1, 0), sh.leaf(0, 3)).distance == 7);
    REQUIRE(route_trace(t, r, sh.col_root(2), sh.leaf(2, 2)).distance == 2);
}

TEST_CASE("tree grid routing is shortest at every size", "[routing]") {
    for (auto [m, n] : std::vector<std::pair<int, int>>{{2, 2}, {4, 4}, {8, 8}, {2, 4}}) {
        Topology t = build_mot(m, n);
        StretchReport r = validate_routing(t, mot_router(t));
        REQUIRE(r.delivery_rate == 1.0);
        REQUIRE(r.max_stretch == 1.0);
        REQUIRE(r.mean_stretch == 1.0);
    }
}

TEST_CASE("hierarchical addresses round trip", "[routing]") {
    for (Topology t : {build_mot(4, 4), build_mot(2, 4), build_d2dmot(4, 4)}) {
        for (NodeId v = 0; v < t.node_count(); ++v)
            REQUIRE(node_at(t, mot_address_of(t, v)) == v);
    }

    Topology t = build_mot(4, 4);
    MotShape sh = MotShape::of(4, 4);
    MoTAddress leaf = mot_address_of(t, sh.leaf(3, 3));
    REQUIRE(leaf.rn == 3);
    REQUIRE(leaf.cn == 3);

    MoTAddress broken = leaf;
    broken.rn_bits = 0;
    REQUIRE_THROWS_AS(node_at(t, broken), AddressMismatch);
    broken = leaf;
    broken.cl = 99;
    REQUIRE_THROWS_AS(node_at(t, broken), AddressMismatch);
    REQUIRE_THROWS_AS(mot_address_of(build_mesh(2, 2), 0), AddressMismatch);

    // Address-level next hop validates the destination core.
    REQUIRE(mot_next_hop(t, sh.leaf(0, 0), leaf) == 28);
    REQUIRE_FALSE(mot_next_hop(t, sh.leaf(3, 3), leaf).has_value());
    MoTAddress badcore = leaf;
    badcore.core_id = 5;
    REQUIRE_THROWS_AS(mot_next_hop(t, 0, badcore), AddressMismatch);
    MoTAddress stem = mot_address_of(t, sh.row_node(0, 1, 0));
    REQUIRE_THROWS_AS(mot_next_hop(t, 0, stem), AddressMismatch);
}

TEST_CASE("diametrical tree routing takes the pinned paths", "[routing]") {
    Topology t = build_d2dmot(4, 4);
    MotShape sh = MotShape::of(4, 4);
    RoutingFunction r = d2dmot_router(t);

    auto len = [&](int r1, int c1, int r2, int c2) {
        return route_trace(t, r, sh.leaf(r1, c1), sh.leaf(r2, c2)).distance;
    };
    REQUIRE(len(0, 0, 1, 1) == 1); // module diagonal
    REQUIRE(len(1, 1, 2, 2) == 5); // across modules, no diagonal gain
    REQUIRE(len(0, 0, 3, 3) == 8);
    REQUIRE(len(0, 0, 0, 3) == 4); // same row stays in the row tree
    REQUIRE(len(0, 0, 2, 3) == 8);
    REQUIRE(len(0, 1, 3, 2) == 5); // column shortcut crossing
}

TEST_CASE("diametrical tree routing validates across sizes", "[routing]") {
    Topology t4 = build_d2dmot(4, 4);
    RoutingFunction r4 = d2dmot_router(t4);
    StretchReport rep4 = validate_routing(t4, r4);
    REQUIRE(rep4.pairs == 240);
    REQUIRE(rep4.delivery_rate == 1.0);
    REQUIRE(rep4.max_stretch == Catch::Approx(1.6));
    REQUIRE(rep4.mean_stretch == Catch::Approx(1.06516).margin(1e-4));

    Topology t8 = build_d2dmot(8, 8);
    RoutingFunction r8 = d2dmot_router(t8);
    StretchReport rep8 = validate_routing(t8, r8);
    REQUIRE(rep8.pairs == 4032);
    REQUIRE(rep8.delivery_rate == 1.0);
    REQUIRE(rep8.max_stretch == Catch::Approx(12.0 / 7.0));
    REQUIRE(rep8.mean_stretch == Catch::Approx(1.06122).margin(1e-4));

    Topology t2 = build_d2dmot(2, 2);
    REQUIRE(validate_routing(t2, d2dmot_router(t2)).max_stretch == 1.0);
}

TEST_CASE("diametrical tree routing never loses to the plain tree", "[routing]") {
    for (int n : {4, 8}) {
        Topology d2d = build_d2dmot(n, n);
        Topology mot = build_mot(n, n);
        RoutingFunction rd = d2dmot_router(d2d);
        RoutingFunction rm = mot_router(mot);
        MotShape sh = MotShape::of(n, n);
        for (int a = 0; a < n * n; ++a)
            for (int b = 0; b < n * n; ++b) {
                if (a == b) continue;
                REQUIRE(route_trace(d2d, rd, a, b).distance <=
                        route_trace(mot, rm, a, b).distance);
            }
        // Same-row and same-column pairs keep stretch one.
        auto dist = all_pairs_dist(d2d);
        for (int r = 0; r < n; ++r)
            for (int c1 = 0; c1 < n; ++c1)
                for (int c2 = 0; c2 < n; ++c2) {
                    if (c1 == c2) continue;
                    NodeId a = sh.leaf(r, c1), b = sh.leaf(r, c2);
                    REQUIRE(route_trace(d2d, rd, a, b).distance == dist[a][b]);
                    NodeId p = sh.leaf(c1, r), q = sh.leaf(c2, r);
                    REQUIRE(route_trace(d2d, rd, p, q).distance == dist[p][q]);
                }
    }
}

TEST_CASE("extended dimension order routing on the augmented mesh", "[routing]") {
    Topology t = build_d2dmesh(8, 8);
    RoutingFunction r = ext_xy_router(t);

    // A near-corner pair detours through the corner diagonal.
    PathResult pr = route_trace(t, r, 1, 62);
    REQUIRE(pr.path == std::vector<NodeId>{1, 0, 63, 62});

    // Same-column traffic stays on the plain dimension order path.
    REQUIRE(route_trace(t, r, 0, 56).path ==
            std::vector<NodeId>{0, 8, 16, 24, 32, 40, 48, 56});

    StretchReport rep = validate_routing(t, r);
    REQUIRE(rep.delivery_rate == 1.0);
    REQUIRE(rep.max_stretch == Catch::Approx(7.0));
    REQUIRE(rep.mean_stretch == Catch::Approx(1.13426).margin(1e-4));

    Topology t4 = build_d2dmesh(4, 4);
    StretchReport rep4 = validate_routing(t4, ext_xy_router(t4));
    REQUIRE(rep4.delivery_rate == 1.0);
    REQUIRE(rep4.max_stretch == Catch::Approx(3.0));
    REQUIRE(rep4.mean_stretch == Catch::Approx(1.125).margin(1e-4));
}

TEST_CASE("table routing is shortest everywhere", "[routing]") {
    std::vector<Topology> all;
    all.push_back(build_mesh(3, 3));
    all.push_back(build_torus(4, 4));
    all.push_back(build_binary_tree(8));
    all.push_back(build_mot(4, 4));
    all.push_back(build_d2dmot(4, 4));
    all.push_back(build_d2dmesh(4, 4));
    for (const Topology& t : all) {
        StretchReport r = validate_routing(t, table_router(t));
        REQUIRE(r.delivery_rate == 1.0);
        REQUIRE(r.max_stretch == 1.0);
    }

    Topology m = build_mesh(3, 3);
    RoutingFunction tab = table_router(m);
    RoutingFunction xy = xy_router(m);
    for (NodeId a = 0; a < 9; ++a)
        for (NodeId b = 0; b < 9; ++b)
            REQUIRE(route_trace(m, tab, a, b).distance ==
                    route_trace(m, xy, a, b).distance);
}

TEST_CASE("naive wrap routing delivers but spins one way", "[routing]") {
    Topology t = build_torus(3, 3);
    RoutingFunction r = naive_wrap_router(t);
    StretchReport rep = validate_routing(t, r);
    REQUIRE(rep.delivery_rate == 1.0);
    REQUIRE(rep.max_stretch == Catch::Approx(2.0));
    REQUIRE_THROWS_AS(naive_wrap_router(build_mesh(3, 3)), FamilyUnsupported);
}

TEST_CASE("channel dependency graphs of the shipped routers", "[routing]") {
    Topology mesh = build_mesh(4, 4);
    REQUIRE(is_deadlock_free(build_cdg(mesh, xy_router(mesh))));

    Topology mot = build_mot(4, 4);
    REQUIRE(is_deadlock_free(build_cdg(mot, mot_router(mot))));

    Topology d2d = build_d2dmot(4, 4);
    REQUIRE(is_deadlock_free(build_cdg(d2d, d2dmot_router(d2d))));

    Topology t33 = build_torus(3, 3);
    REQUIRE_FALSE(is_deadlock_free(build_cdg(t33, naive_wrap_router(t33))));
    Topology t44 = build_torus(4, 4);
    REQUIRE_FALSE(is_deadlock_free(build_cdg(t44, naive_wrap_router(t44))));

    // The diameter channels feed back into the grid: the extended router is
    // measurably not deadlock free and is reported as such.
    Topology dm = build_d2dmesh(4, 4);
    REQUIRE_FALSE(is_deadlock_free(build_cdg(dm, ext_xy_router(dm))));
}

TEST_CASE("validation reports are deterministic", "[routing]") {
    Topology t = build_d2dmot(4, 4);
    RoutingFunction r = d2dmot_router(t);
    StretchReport a = validate_routing(t, r);
    StretchReport b = validate_routing(t, r);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        REQUIRE(a.rows[i].src == b.rows[i].src);
        REQUIRE(a.rows[i].dst == b.rows[i].dst);
        REQUIRE(a.rows[i].routed == b.rows[i].routed);
        REQUIRE(a.rows[i].shortest == b.rows[i].shortest);
    }
}
