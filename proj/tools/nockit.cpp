#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "nockit/io.hpp"
#include "nockit/params.hpp"
#include "nockit/serialize.hpp"
#include "nockit/sim.hpp"

namespace {

using namespace nockit;

RoutingFunction make_router(const Topology& t, const std::string& name) {
    if (name == "xy") return xy_router(t);
    if (name == "extxy") return ext_xy_router(t);
    if (name == "mot") return mot_router(t);
    if (name == "d2dmot") return d2dmot_router(t);
    if (name == "table") return table_router(t);
    if (name == "naivewrap") return naive_wrap_router(t);
    throw Error("unknown routing function: " + name);
}

std::string canonical_routing(Family f) {
    switch (f) {
        case Family::Mesh: return "xy";
        case Family::MoT: return "mot";
        case Family::D2DMesh: return "extxy";
        case Family::D2DMoT: return "d2dmot";
        default: return "table";
    }
}

TrafficPattern make_traffic(const std::string& name, NodeId hotspot, double weight) {
    TrafficPattern t;
    if (name == "uniform") {
        t.kind = TrafficPattern::Kind::UniformRandom;
    } else if (name == "transpose") {
        t.kind = TrafficPattern::Kind::Transpose;
    } else if (name == "hotspot") {
        t.kind = TrafficPattern::Kind::Hotspot;
        t.hotspot_node = hotspot;
        t.hotspot_weight = weight;
    } else {
        throw Error("unknown traffic pattern: " + name);
    }
    return t;
}

Topology build_from_flags(const std::string& family, int rows, int cols, bool no_ips) {
    Family f = family_from_name(family);
    BuildConfig cfg;
    cfg.attach_ips = !no_ips;
    if (f == Family::BinaryTree) return build_topology(f, rows, 0, cfg);
    return build_topology(f, rows, cols, cfg);
}

bool report_deadlock_free(const Topology& t, const RoutingFunction& r) {
    if (t.ip_nodes().size() < 2) return true;
    return is_deadlock_free(build_cdg(t, r));
}

int cmd_build(const std::string& family, int rows, int cols, bool no_ips,
              const std::string& out) {
    Topology t = build_from_flags(family, rows, cols, no_ips);
    std::string text = to_json(t).dump(2);
    if (out.empty()) {
        std::cout << text << '\n';
    } else {
        std::ofstream os(out);
        if (!os) throw Error("cannot open output file: " + out);
        os << text << '\n';
    }
    return 0;
}

int cmd_analyze(const std::string& family, int rows, int cols,
                const std::string& in, const std::string& format) {
    Topology t;
    if (!in.empty()) {
        std::ifstream is(in);
        if (!is) throw Error("cannot open topology file: " + in);
        json j;
        try {
            j = json::parse(is);
        } catch (const std::exception& e) {
            throw Error(std::string("invalid topology JSON: ") + e.what());
        }
        t = from_json(j);
    } else {
        t = build_from_flags(family, rows, cols, false);
    }
    GraphMetrics m = all_pairs_metrics(t);
    std::string formula;
    try {
        TopoParams p = params_for(t.family, t.rows, t.cols);
        if (p.diameter) formula = std::to_string(*p.diameter);
    } catch (const Error&) {
    }
    bool df = report_deadlock_free(t, make_router(t, canonical_routing(t.family)));
    if (format == "json") {
        json j;
        j["family"] = family_name(t.family);
        j["rows"] = t.rows;
        j["cols"] = t.cols;
        j["nodes"] = t.node_count();
        j["links"] = t.link_count();
        j["ips"] = t.total_ips();
        if (!formula.empty()) j["diameter_formula"] = std::stoll(formula);
        j["diameter_measured"] = m.diameter;
        j["avg_hops"] = m.avg_hops;
        j["deadlock_free"] = df;
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << metrics_csv_header() << '\n'
                  << family_name(t.family) << ',' << t.rows << ',' << t.cols << ','
                  << t.node_count() << ',' << t.link_count() << ',' << t.total_ips()
                  << ',' << formula << ',' << m.diameter << ',' << fixed4(m.avg_hops)
                  << ',' << (df ? "true" : "false") << '\n';
    }
    return 0;
}

int cmd_shortest_path(const std::string& matrix, int src, int dst) {
    std::ifstream is(matrix);
    if (!is) throw Error("cannot open matrix file: " + matrix);
    MatrixParse m = parse_adjacency_matrix(is);
    for (NodeId v : m.self_loops)
        std::cerr << "warning: self-loop at node " << v << " ignored\n";
    if (src < 0 || src >= m.n || dst < 0 || dst >= m.n)
        throw Error("path endpoints must be inside the matrix");
    std::cout << format_ones_line(m.ones) << '\n'
              << format_links_line(m.link_count) << '\n';
    std::optional<PathResult> r = bfs_shortest_path(m.graph, src, dst);
    if (!r) {
        std::cout << "No path from " << src << " to " << dst << " exists\n";
        return 3;
    }
    std::cout << format_path_line(r->path) << '\n'
              << format_distance_line(r->distance) << '\n';
    return 0;
}

int cmd_validate(const std::string& family, int rows, int cols,
                 std::string routing, const std::string& csv) {
    Topology t = build_from_flags(family, rows, cols, false);
    if (routing.empty()) routing = canonical_routing(t.family);
    RoutingFunction r = make_router(t, routing);
    StretchReport rep = validate_routing(t, r);
    bool df = rep.failures.empty() && report_deadlock_free(t, r);
    if (!csv.empty()) {
        std::ofstream os(csv);
        if (!os) throw Error("cannot open output file: " + csv);
        os << stretch_csv_header() << '\n';
        for (const StretchRow& row : rep.rows)
            os << row.src << ',' << row.dst << ',' << row.routed << ','
               << row.shortest << ','
               << fixed4(static_cast<double>(row.routed) / row.shortest) << '\n';
    }
    json j;
    j["routing"] = rep.routing;
    j["pairs"] = rep.pairs;
    j["delivered"] = rep.delivered;
    j["delivery_rate"] = rep.delivery_rate;
    j["max_stretch"] = rep.max_stretch;
    j["mean_stretch"] = rep.mean_stretch;
    j["deadlock_free"] = df;
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_simulate(const std::string& family, int rows, int cols, std::string routing,
                 const std::string& traffic, NodeId hotspot, double hotspot_weight,
                 const SimConfig& cfg) {
    Topology t = build_from_flags(family, rows, cols, false);
    if (routing.empty()) routing = canonical_routing(t.family);
    RoutingFunction r = make_router(t, routing);
    TrafficPattern tp = make_traffic(traffic, hotspot, hotspot_weight);
    SimStats s = simulate(t, r, tp, cfg);
    std::cout << results_csv_header() << '\n'
              << family_name(t.family) << ',' << t.rows << ',' << t.cols << ','
              << routing << ',' << traffic << ','
              << (cfg.switching == Switching::StoreAndForward ? "snf" : "wormhole")
              << ',' << fixed4(cfg.injection) << ',' << cfg.seed << ','
              << cfg.flits_per_packet << ',' << s.measured_packets << ','
              << fixed4(s.avg_latency) << ',' << s.p99_latency << ','
              << fixed4(s.throughput) << ',' << s.total_transfer_time << ','
              << (s.saturated ? "true" : "false") << '\n';
    return 0;
}

int cmd_compare(const std::vector<int>& sizes, const std::string& traffic,
                NodeId hotspot, double hotspot_weight, const SimConfig& cfg) {
    TrafficPattern tp = make_traffic(traffic, hotspot, hotspot_weight);
    std::vector<ComparisonRow> rows = compare_families(sizes, tp, cfg);
    std::cout << comparison_csv_header() << '\n';
    for (const ComparisonRow& r : rows)
        std::cout << r.ip_blocks << ',' << r.t_d2dmot << ',' << r.t_mot << ','
                  << r.t_mesh << ',' << fixed2(r.speedup_pct) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Network-on-chip topology, routing and simulation toolkit"};
    app.require_subcommand(1);

    std::string family, routing, traffic = "uniform", format = "csv";
    std::string out, in, matrix, csv;
    int rows = 0, cols = 0, src = 0, dst = 0;
    bool no_ips = false;
    nockit::NodeId hotspot = -1;
    double hotspot_weight = 50.0;
    std::vector<int> sizes{4, 8, 16};
    nockit::SimConfig cfg;
    std::string switching = "snf";

    CLI::App* b = app.add_subcommand("build", "Build a topology and emit JSON");
    b->add_option("--family", family)->required();
    b->add_option("--rows", rows)->required();
    b->add_option("--cols", cols);
    b->add_flag("--no-ips", no_ips, "skip IP core attachment");
    b->add_option("--out", out);

    CLI::App* a = app.add_subcommand("analyze", "Graph metrics for a topology");
    a->add_option("--family", family);
    a->add_option("--rows", rows);
    a->add_option("--cols", cols);
    a->add_option("--in", in, "topology JSON produced by build");
    a->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

    CLI::App* sp = app.add_subcommand("shortest-path",
                                      "Breadth-first path through an adjacency matrix");
    sp->add_option("--matrix", matrix)->required();
    sp->add_option("--src", src)->required();
    sp->add_option("--dst", dst)->required();

    CLI::App* v = app.add_subcommand("validate", "Route every endpoint pair");
    v->add_option("--family", family)->required();
    v->add_option("--rows", rows)->required();
    v->add_option("--cols", cols);
    v->add_option("--routing", routing);
    v->add_option("--csv", csv, "write per-pair rows to this file");

    CLI::App* s = app.add_subcommand("simulate", "Flit-level simulation");
    s->add_option("--family", family)->required();
    s->add_option("--rows", rows)->required();
    s->add_option("--cols", cols);
    s->add_option("--routing", routing);
    s->add_option("--traffic", traffic)
        ->check(CLI::IsMember({"uniform", "transpose", "hotspot"}));
    s->add_option("--injection", cfg.injection, "packets per IP per 100 cycles");
    s->add_option("--seed", cfg.seed);
    s->add_option("--flits", cfg.flits_per_packet);
    s->add_option("--switching", switching)->check(CLI::IsMember({"snf", "wormhole"}));
    s->add_option("--cycles", cfg.measure_cycles);
    s->add_option("--warmup", cfg.warmup_cycles);
    s->add_option("--buffer", cfg.buffer_depth);
    s->add_option("--hotspot", hotspot);
    s->add_option("--hotspot-weight", hotspot_weight);

    CLI::App* c = app.add_subcommand("compare", "Equal-workload family comparison");
    c->add_option("--sizes", sizes)->delimiter(',');
    c->add_option("--traffic", traffic)
        ->check(CLI::IsMember({"uniform", "transpose", "hotspot"}));
    c->add_option("--injection", cfg.injection);
    c->add_option("--seed", cfg.seed);
    c->add_option("--flits", cfg.flits_per_packet);
    c->add_option("--switching", switching)->check(CLI::IsMember({"snf", "wormhole"}));
    c->add_option("--cycles", cfg.measure_cycles);
    c->add_option("--hotspot", hotspot);
    c->add_option("--hotspot-weight", hotspot_weight);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    cfg.switching = switching == "wormhole" ? nockit::Switching::Wormhole
                                            : nockit::Switching::StoreAndForward;

    try {
        if (b->parsed()) return cmd_build(family, rows, cols, no_ips, out);
        if (a->parsed()) return cmd_analyze(family, rows, cols, in, format);
        if (sp->parsed()) return cmd_shortest_path(matrix, src, dst);
        if (v->parsed()) return cmd_validate(family, rows, cols, routing, csv);
        if (s->parsed())
            return cmd_simulate(family, rows, cols, routing, traffic, hotspot,
                                hotspot_weight, cfg);
        if (c->parsed())
            return cmd_compare(sizes, traffic, hotspot, hotspot_weight, cfg);
    } catch (const nockit::MalformedMatrix& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const nockit::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
