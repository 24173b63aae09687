#pragma once

#include <cstdio>
#include <istream>
#include <sstream>

#include "analysis.hpp"

namespace nockit {

// Parsed adjacency matrix. The raw one-count and the halved link count match
// the legacy report format; diagonal entries are dropped from the graph and
// listed so callers can warn about them.
struct MatrixParse {
    int n = 0;
    long long ones = 0;
    long long link_count = 0;
    std::vector<NodeId> self_loops;
    Digraph graph;
};

// Input: node count followed by n*n whitespace-separated 0/1 entries,
// row-major; entry (i,j) = 1 means a directed edge i -> j.
inline MatrixParse parse_adjacency_matrix(std::istream& in) {
    MatrixParse m;
    if (!(in >> m.n)) throw MalformedMatrix("missing node count");
    if (m.n <= 0) throw MalformedMatrix("node count must be positive");
    m.graph.n = m.n;
    m.graph.out.resize(m.n);
    m.graph.in.resize(m.n);
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) {
            std::string tok;
            if (!(in >> tok))
                throw MalformedMatrix("matrix ends early at row " + std::to_string(i));
            if (tok == "0") continue;
            if (tok != "1")
                throw MalformedMatrix("matrix entries must be 0 or 1, got " + tok);
            ++m.ones;
            if (i == j) {
                m.self_loops.push_back(i);
                continue;
            }
            m.graph.add_edge(i, j);
        }
    std::string extra;
    if (in >> extra) throw MalformedMatrix("trailing data after the matrix");
    m.link_count = m.ones / 2;
    m.graph.sort_edges();
    return m;
}

inline MatrixParse parse_adjacency_matrix(const std::string& text) {
    std::istringstream is(text);
    return parse_adjacency_matrix(is);
}

inline std::string format_path(const std::vector<NodeId>& path) {
    std::ostringstream os;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) os << " => ";
        os << path[i];
    }
    return os.str();
}

inline std::string format_ones_line(long long ones) {
    return "No of 1 in the Matrix = " + std::to_string(ones);
}

inline std::string format_links_line(long long links) {
    return "No of link is = " + std::to_string(links);
}

inline std::string format_path_line(const std::vector<NodeId>& path) {
    return "Shortest path = " + format_path(path);
}

inline std::string format_distance_line(int distance) {
    return "Minimum distance = " + std::to_string(distance);
}

namespace detail {

inline std::string fmt(double v, const char* format) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

} // namespace detail

inline std::string fixed4(double v) { return detail::fmt(v, "%.4f"); }
inline std::string fixed2(double v) { return detail::fmt(v, "%.2f"); }

inline std::string metrics_csv_header() {
    return "family,rows,cols,nodes,links,ips,diameter_formula,diameter_measured,"
           "avg_hops,deadlock_free";
}

inline std::string stretch_csv_header() { return "src,dst,routed,shortest,stretch"; }

inline std::string results_csv_header() {
    return "family,rows,cols,routing,traffic,switching,injection,seed,flits,"
           "measured_packets,avg_latency,p99_latency,throughput,"
           "total_transfer_time,saturated";
}

inline std::string comparison_csv_header() {
    return "ip_blocks,t_d2dmot,t_mot,t_mesh,speedup_pct";
}

} // namespace nockit
