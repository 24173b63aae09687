#include <catch2/catch_amalgamated.hpp>

#include "nockit/analysis.hpp"
#include "nockit/build.hpp"
#include "nockit/params.hpp"

using namespace nockit;

TEST_CASE("grid family formulas", "[params]") {
    TopoParams mesh = params_for(Family::Mesh, 4, 4);
    REQUIRE(mesh.routers == 16);
    REQUIRE(mesh.links == 24);
    REQUIRE(mesh.diameter == 6);
    REQUIRE(mesh.bisection == 4);
    REQUIRE(mesh.ips == 16);
    REQUIRE(mesh.degrees ==
            std::vector<std::pair<std::string, long long>>{
                {"corner", 3}, {"boundary", 4}, {"central", 5}});

    TopoParams wide = params_for(Family::Mesh, 2, 8);
    REQUIRE(wide.routers == 16);
    REQUIRE(wide.links == 22);
    REQUIRE(wide.diameter == 8);
    REQUIRE(wide.bisection == 2);

    for (Family f : {Family::Torus, Family::FoldedTorus}) {
        TopoParams p = params_for(f, 4, 4);
        REQUIRE(p.routers == 16);
        REQUIRE(p.links == 32);
        REQUIRE(p.diameter == 4);
        REQUIRE(p.bisection == 8);
        REQUIRE(p.ips == 16);
        REQUIRE(p.degrees ==
                std::vector<std::pair<std::string, long long>>{{"all", 5}});
    }
}

TEST_CASE("tree family formulas", "[params]") {
    TopoParams bt4 = params_for(Family::BinaryTree, 4);
    REQUIRE(bt4.routers == 7);
    REQUIRE(bt4.links == 6);
    REQUIRE(bt4.diameter == 4);
    REQUIRE(bt4.bisection == 1);
    REQUIRE(bt4.ips == 16);

    TopoParams bt8 = params_for(Family::BinaryTree, 8);
    REQUIRE(bt8.routers == 15);
    REQUIRE(bt8.links == 14);
    REQUIRE(bt8.diameter == 6);
    REQUIRE(bt8.ips == 32);

    TopoParams mot = params_for(Family::MoT, 4, 4);
    REQUIRE(mot.routers == 40);
    REQUIRE(mot.links == 48);
    REQUIRE(mot.diameter == 8);
    REQUIRE(mot.bisection == 4);
    REQUIRE(mot.ips == 16);
    REQUIRE(mot.degrees ==
            std::vector<std::pair<std::string, long long>>{
                {"leaf", 2}, {"stem", 3}, {"root", 2}});
    REQUIRE(params_for(Family::MoT, 2, 4).diameter == 6);

    TopoParams d2d = params_for(Family::D2DMoT, 4, 4);
    REQUIRE(d2d.routers == 40);
    REQUIRE(d2d.links == 58);
    REQUIRE(d2d.ips == 32);
    REQUIRE_FALSE(d2d.diameter.has_value());
    REQUIRE_FALSE(d2d.bisection.has_value());
    REQUIRE(d2d.degrees ==
            std::vector<std::pair<std::string, long long>>{{"leaf", 5},
                                                           {"stem", 3},
                                                           {"internal_root", 3},
                                                           {"external_root", 2}});
    REQUIRE(params_for(Family::D2DMoT, 8, 8).links == 258);
}

TEST_CASE("irregular family formulas", "[params]") {
    TopoParams oct8 = params_for(Family::Octagon, 8);
    REQUIRE(oct8.routers == 8);
    REQUIRE(oct8.diameter == 2);
    REQUIRE(oct8.bisection == 6);
    REQUIRE_FALSE(oct8.links.has_value());

    TopoParams oct16 = params_for(Family::Octagon, 16);
    REQUIRE(oct16.routers == 22);
    REQUIRE(oct16.diameter == 4);
    REQUIRE(oct16.bisection == 18);

    TopoParams spin8 = params_for(Family::Spin, 8);
    REQUIRE(spin8.routers == 0); // published scaling term vanishes at 8 blocks
    REQUIRE(spin8.diameter == 3);
    REQUIRE(spin8.bisection == 4);

    TopoParams spin16 = params_for(Family::Spin, 16);
    REQUIRE(spin16.routers == 16);
    REQUIRE(spin16.diameter == 4);
    REQUIRE(spin16.bisection == 8);

    TopoParams bft16 = params_for(Family::Bft, 16);
    REQUIRE(bft16.routers == 8);
    REQUIRE(bft16.diameter == 4);
    REQUIRE(bft16.bisection == 4);

    TopoParams bft64 = params_for(Family::Bft, 64);
    REQUIRE(bft64.routers == 32);
    REQUIRE(bft64.diameter == 6);
    REQUIRE(bft64.bisection == 8);
}

TEST_CASE("parameter errors", "[params]") {
    REQUIRE_THROWS_AS(params_for(Family::Mesh, 0, 4), SizeUnsupported);
    REQUIRE_THROWS_AS(params_for(Family::Spin, 12), SizeUnsupported);
    REQUIRE_THROWS_AS(params_for(Family::Spin, 4), SizeUnsupported);
    REQUIRE_THROWS_AS(params_for(Family::Bft, 6), SizeUnsupported);
    REQUIRE_THROWS_AS(params_for(Family::Octagon, 4), SizeUnsupported);
    REQUIRE_THROWS_AS(params_for(Family::MoT, 6, 6), SizeUnsupported);
    REQUIRE_THROWS_AS(params_for(Family::D2DMoT, 4, 3), SizeUnsupported);
    REQUIRE_THROWS_AS(params_for(Family::D2DMesh, 4, 4), FamilyUnsupported);
    REQUIRE_THROWS_AS(params_for(Family::Custom, 4, 4), FamilyUnsupported);
}

TEST_CASE("formulas agree with built topologies", "[params]") {
    for (int m : {2, 4, 8}) {
        for (Family f : {Family::Mesh, Family::Torus, Family::MoT}) {
            TopoParams p = params_for(f, m, m);
            Topology t = build_topology(f, m, m);
            REQUIRE(t.node_count() == p.routers);
            REQUIRE(t.total_ips() == p.ips);
            REQUIRE(all_pairs_metrics(t).diameter == *p.diameter);
            // The wrap suppression on two-wide rings removes duplicate links.
            if (f != Family::Torus || m > 2) REQUIRE(t.link_count() == *p.links);
        }
        TopoParams p = params_for(Family::BinaryTree, m);
        Topology t = build_binary_tree(m);
        REQUIRE(t.node_count() == p.routers);
        REQUIRE(t.link_count() == *p.links);
        REQUIRE(t.total_ips() == p.ips);
        REQUIRE(all_pairs_metrics(t).diameter == *p.diameter);
    }

    TopoParams d2d = params_for(Family::D2DMoT, 4, 4);
    Topology t = build_d2dmot(4, 4);
    REQUIRE(t.node_count() == d2d.routers);
    REQUIRE(t.link_count() == *d2d.links);
    REQUIRE(t.total_ips() == d2d.ips);
}
