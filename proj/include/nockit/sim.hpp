#pragma once

#include <cmath>
#include <queue>

#include "routing.hpp"

namespace nockit {

enum class Switching { StoreAndForward, Wormhole };

struct TrafficPattern {
    enum class Kind { UniformRandom, Transpose, Hotspot };
    Kind kind = Kind::UniformRandom;
    NodeId hotspot_node = -1;
    double hotspot_weight = 50.0; // percent of packets aimed at the hotspot
};

struct SimConfig {
    int flits_per_packet = 4;
    int cycles_per_hop = 1;
    double injection = 1.0; // packets per IP per 100 cycles
    long long warmup_cycles = 0;
    long long measure_cycles = 1000;
    std::uint64_t seed = 1;
    Switching switching = Switching::StoreAndForward;
    int buffer_depth = 8;
    long long saturation_limit = 1000000; // undelivered packets before abort
};

struct SimStats {
    long long packets_injected = 0;
    long long packets_delivered = 0;
    long long measured_packets = 0;
    double avg_latency = 0.0;
    long long p99_latency = 0;
    double throughput = 0.0;           // measured flits per cycle
    long long total_transfer_time = 0; // measurement start to last delivery
    long long sum_latency = 0;         // summed per-packet transfer times
    long long flits_injected = 0;
    long long flits_delivered = 0;
    long long flits_in_flight = 0;
    bool saturated = false;
};

// Explicit workload entry; simulate() generates these from the traffic
// pattern, compare_families() builds equal-count workloads directly.
struct PacketSpec {
    long long time = 0;
    NodeId src = -1;
    NodeId dst = -1;
    bool measured = true;
};

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t draw64(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                            std::uint64_t c) {
    return mix64(seed ^ mix64(a ^ mix64(b ^ mix64(c))));
}

// Flattened IP endpoint space: index -> carrying node.
struct IpSpace {
    std::vector<NodeId> node;       // per IP index
    std::vector<long long> prefix;  // first IP index per node
    const Topology* topo = nullptr;

    static IpSpace of(const Topology& t) {
        IpSpace s;
        s.topo = &t;
        s.prefix.assign(t.node_count() + 1, 0);
        for (NodeId v = 0; v < t.node_count(); ++v) {
            s.prefix[v + 1] = s.prefix[v] + t.ips[v];
            for (int k = 0; k < t.ips[v]; ++k) s.node.push_back(v);
        }
        return s;
    }

    long long count() const { return static_cast<long long>(node.size()); }
};

namespace detail {

inline long long transpose_target(const IpSpace& sp, long long src_ip) {
    const Topology& t = *sp.topo;
    NodeId v = sp.node[src_ip];
    long long k = src_ip - sp.prefix[v];
    const Node& n = t.nodes[v];
    bool grid_like = t.family == Family::Mesh || t.family == Family::Torus ||
                     t.family == Family::D2DMesh;
    bool tree_grid = (t.family == Family::MoT || t.family == Family::D2DMoT) &&
                     n.kind == NodeKind::Leaf;
    if ((grid_like || tree_grid) && t.rows == t.cols) {
        NodeId w;
        if (grid_like)
            w = n.col * t.cols + n.row;
        else
            w = MotShape::of(t.rows, t.cols).leaf(n.col, n.row);
        return sp.prefix[w] + k;
    }
    return sp.count() - 1 - src_ip;
}

// Returns the destination IP index, or -1 when the pattern maps the source
// onto itself and no packet is sent.
inline long long draw_destination(const IpSpace& sp, const TrafficPattern& traffic,
                                  std::uint64_t seed, long long src_ip,
                                  long long k) {
    const long long n = sp.count();
    auto uniform_other = [&](std::uint64_t salt) {
        std::uint64_t r = draw64(seed, static_cast<std::uint64_t>(src_ip),
                                 static_cast<std::uint64_t>(k), salt);
        long long d = static_cast<long long>(r % static_cast<std::uint64_t>(n - 1));
        return d >= src_ip ? d + 1 : d;
    };
    switch (traffic.kind) {
        case TrafficPattern::Kind::UniformRandom:
            return uniform_other(1);
        case TrafficPattern::Kind::Transpose: {
            long long d = transpose_target(sp, src_ip);
            return d == src_ip ? -1 : d;
        }
        case TrafficPattern::Kind::Hotspot: {
            long long target = sp.prefix[traffic.hotspot_node];
            std::uint64_t r = draw64(seed, static_cast<std::uint64_t>(src_ip),
                                     static_cast<std::uint64_t>(k), 2);
            double u = static_cast<double>(r >> 11) * 0x1.0p-53;
            if (u * 100.0 < traffic.hotspot_weight && target != src_ip) return target;
            return uniform_other(3);
        }
    }
    return -1;
}

inline void check_config(const Topology& t, const SimConfig& cfg) {
    if (cfg.flits_per_packet < 1) throw ConfigInvalid("flits_per_packet must be >= 1");
    if (cfg.cycles_per_hop < 1) throw ConfigInvalid("cycles_per_hop must be >= 1");
    if (cfg.measure_cycles < 1) throw ConfigInvalid("measure_cycles must be >= 1");
    if (cfg.warmup_cycles < 0) throw ConfigInvalid("warmup_cycles must be >= 0");
    if (cfg.saturation_limit < 1) throw ConfigInvalid("saturation_limit must be >= 1");
    if (cfg.switching == Switching::StoreAndForward &&
        cfg.buffer_depth < cfg.flits_per_packet)
        throw ConfigInvalid(
            "store-and-forward needs buffer_depth >= flits_per_packet");
    if (cfg.buffer_depth < 1) throw ConfigInvalid("buffer_depth must be >= 1");
    (void)t;
}

inline void check_traffic(const Topology& t, const IpSpace& sp,
                          const TrafficPattern& traffic) {
    if (sp.count() < 2) throw ConfigInvalid("traffic needs at least two IP cores");
    if (traffic.kind == TrafficPattern::Kind::Hotspot) {
        if (traffic.hotspot_node < 0 || traffic.hotspot_node >= t.node_count() ||
            t.ips[traffic.hotspot_node] == 0)
            throw ConfigInvalid("hotspot node must carry an IP core");
        if (traffic.hotspot_weight < 0.0 || traffic.hotspot_weight > 100.0)
            throw ConfigInvalid("hotspot weight must be a percentage");
    }
}

} // namespace detail

// Discrete-event engine shared by both switching modes. A packet occupies
// each channel on its path for flits*cycles_per_hop cycles; store-and-forward
// requests the next channel only once the whole packet arrived, the wormhole
// (cut-through) pipeline requests it as soon as the head arrives. Contending
// requests are granted in (request_time, packet_id) order.
inline SimStats run_workload(const Topology& t, const RoutingFunction& routing,
                             const std::vector<PacketSpec>& workload,
                             const SimConfig& cfg) {
    detail::check_config(t, cfg);
    const long long f = cfg.flits_per_packet;
    const long long c = cfg.cycles_per_hop;
    const long long occupancy = f * c;
    const long long step_delay = cfg.switching == Switching::StoreAndForward ? f * c : c;
    const long long delivery_extra =
        cfg.switching == Switching::StoreAndForward ? 0 : (f - 1) * c;

    std::map<std::pair<NodeId, NodeId>, int> channel_index;
    for (const Link& l : t.links) {
        int base = static_cast<int>(channel_index.size());
        channel_index[{l.a, l.b}] = base;
        channel_index[{l.b, l.a}] = base + 1;
    }
    std::vector<long long> busy_until(channel_index.size(), 0);
    using Waiter = std::pair<long long, long long>; // (request_time, packet)
    std::vector<std::priority_queue<Waiter, std::vector<Waiter>, std::greater<>>>
        waiting(channel_index.size());

    struct Packet {
        std::vector<NodeId> path;
        long long inject = 0;
        long long delivered = -1;
        int hop = 0;
        bool measured = true;
    };
    std::vector<Packet> pkts(workload.size());
    for (std::size_t i = 0; i < workload.size(); ++i) {
        pkts[i].path = route_trace(t, routing, workload[i].src, workload[i].dst).path;
        pkts[i].inject = workload[i].time;
        pkts[i].measured = workload[i].measured;
    }

    // type 0 = channel release (id = channel), 1 = packet arrival (id = packet)
    struct Ev {
        long long time;
        int type;
        long long id;
        bool operator>(const Ev& o) const {
            if (time != o.time) return time > o.time;
            if (type != o.type) return type > o.type;
            return id > o.id;
        }
    };
    std::priority_queue<Ev, std::vector<Ev>, std::greater<>> events;
    for (std::size_t i = 0; i < pkts.size(); ++i)
        events.push({pkts[i].inject, 1, static_cast<long long>(i)});

    SimStats stats;
    long long started = 0, finished = 0;

    auto grant = [&](int ch, long long pid, long long start) {
        busy_until[ch] = start + occupancy;
        events.push({busy_until[ch], 0, ch});
        events.push({start + step_delay, 1, pid});
        pkts[pid].hop += 1;
    };

    auto arrive = [&](long long pid, long long now) {
        Packet& p = pkts[pid];
        if (p.hop == 0) {
            ++started;
            if (started - finished > cfg.saturation_limit) {
                stats.saturated = true;
                return;
            }
        }
        if (p.hop + 1 == static_cast<int>(p.path.size()) || p.path.size() == 1) {
            p.delivered = now + (p.path.size() == 1 ? 0 : delivery_extra);
            ++finished;
            return;
        }
        int ch = channel_index.at({p.path[p.hop], p.path[p.hop + 1]});
        if (busy_until[ch] <= now && waiting[ch].empty())
            grant(ch, pid, now);
        else
            waiting[ch].push({now, pid});
    };

    while (!events.empty() && !stats.saturated) {
        Ev ev = events.top();
        events.pop();
        if (ev.type == 1) {
            arrive(ev.id, ev.time);
        } else {
            int ch = static_cast<int>(ev.id);
            if (busy_until[ch] == ev.time && !waiting[ch].empty()) {
                auto [req, pid] = waiting[ch].top();
                waiting[ch].pop();
                grant(ch, pid, ev.time);
            }
        }
    }

    stats.packets_injected = started;
    stats.packets_delivered = finished;
    stats.flits_injected = started * f;
    stats.flits_delivered = finished * f;
    stats.flits_in_flight = (started - finished) * f;
    if (!stats.saturated && finished != static_cast<long long>(pkts.size()))
        throw Error("flit conservation violated: packets lost in flight");

    std::vector<long long> latencies;
    long long last_delivery = -1;
    for (const Packet& p : pkts) {
        if (p.delivered < 0 || !p.measured) continue;
        long long lat = p.delivered - p.inject;
        latencies.push_back(lat);
        stats.sum_latency += lat;
        last_delivery = std::max(last_delivery, p.delivered);
    }
    stats.measured_packets = static_cast<long long>(latencies.size());
    if (!latencies.empty()) {
        stats.avg_latency =
            static_cast<double>(stats.sum_latency) / stats.measured_packets;
        std::sort(latencies.begin(), latencies.end());
        std::size_t idx = static_cast<std::size_t>(
            std::ceil(0.99 * static_cast<double>(latencies.size())));
        stats.p99_latency = latencies[idx == 0 ? 0 : idx - 1];
        stats.total_transfer_time = std::max(0LL, last_delivery - cfg.warmup_cycles);
        if (stats.total_transfer_time > 0)
            stats.throughput = static_cast<double>(stats.measured_packets * f) /
                               static_cast<double>(stats.total_transfer_time);
    }
    return stats;
}

inline SimStats simulate(const Topology& t, const RoutingFunction& routing,
                         const TrafficPattern& traffic, const SimConfig& cfg) {
    detail::check_config(t, cfg);
    if (cfg.injection <= 0.0) throw ConfigInvalid("injection rate must be > 0");
    IpSpace sp = IpSpace::of(t);
    detail::check_traffic(t, sp, traffic);

    // Integer accumulator per IP keeps the schedule exact for fractional
    // rates; one step adds injection/100 packets worth of credit per cycle.
    const long long scale = 1000000;
    const long long credit = std::llround(cfg.injection * scale);
    const long long threshold = 100 * scale;
    const long long horizon = cfg.warmup_cycles + cfg.measure_cycles;

    struct Draft {
        long long time;
        long long ip;
        long long seq;
    };
    std::vector<Draft> drafts;
    for (long long ip = 0; ip < sp.count(); ++ip) {
        long long acc = 0, seq = 0;
        for (long long cyc = 0; cyc < horizon; ++cyc) {
            acc += credit;
            while (acc >= threshold) {
                acc -= threshold;
                drafts.push_back({cyc, ip, seq++});
            }
        }
    }
    std::sort(drafts.begin(), drafts.end(), [](const Draft& a, const Draft& b) {
        if (a.time != b.time) return a.time < b.time;
        if (a.ip != b.ip) return a.ip < b.ip;
        return a.seq < b.seq;
    });

    std::vector<PacketSpec> workload;
    workload.reserve(drafts.size());
    for (const Draft& d : drafts) {
        long long dst_ip = detail::draw_destination(sp, traffic, cfg.seed, d.ip, d.seq);
        if (dst_ip < 0) continue;
        workload.push_back({d.time, sp.node[d.ip], sp.node[dst_ip],
                            d.time >= cfg.warmup_cycles});
    }
    return run_workload(t, routing, workload, cfg);
}

struct ComparisonRow {
    int size = 0;
    long long ip_blocks = 0;
    long long t_d2dmot = 0;
    long long t_mot = 0;
    long long t_mesh = 0;
    double speedup_pct = 0.0;
};

inline double speedup_pct(long long t_base, long long t_new) {
    if (t_base == 0) return 0.0;
    return 100.0 * static_cast<double>(t_base - t_new) / static_cast<double>(t_base);
}

// Equal-packet-count comparison: for each size n the diametrical tree fabric,
// the plain tree fabric, and a mesh with at least as many IP blocks carry the
// same number of seeded random packets; reported times are the summed
// per-packet transfer times.
inline std::vector<ComparisonRow> compare_families(const std::vector<int>& sizes,
                                                   const TrafficPattern& traffic,
                                                   const SimConfig& cfg) {
    if (cfg.injection < 0.0) throw ConfigInvalid("injection rate must be >= 0");
    std::vector<ComparisonRow> rows;
    for (int n : sizes) {
        Topology d2d = build_d2dmot(n, n);
        Topology mot = build_mot(n, n);
        int m = static_cast<int>(std::ceil(std::sqrt(2.0 * n * n)));
        Topology mesh = build_mesh(m, m);

        long long packets = std::llround(cfg.injection / 100.0 *
                                         static_cast<double>(cfg.measure_cycles) *
                                         static_cast<double>(d2d.total_ips()));
        auto workload_for = [&](const Topology& t) {
            IpSpace sp = IpSpace::of(t);
            std::vector<PacketSpec> w;
            w.reserve(packets);
            for (long long k = 0; k < packets; ++k) {
                long long src = static_cast<long long>(
                    draw64(cfg.seed, 11, static_cast<std::uint64_t>(k), 4) %
                    static_cast<std::uint64_t>(sp.count()));
                long long dst = detail::draw_destination(sp, traffic, cfg.seed, src, k);
                if (dst < 0) continue;
                long long time = k * cfg.measure_cycles / std::max(packets, 1LL);
                w.push_back({time, sp.node[src], sp.node[dst], true});
            }
            return w;
        };
        SimConfig run_cfg = cfg;
        run_cfg.warmup_cycles = 0;

        ComparisonRow row;
        row.size = n;
        row.ip_blocks = d2d.total_ips();
        row.t_d2dmot =
            run_workload(d2d, d2dmot_router(d2d), workload_for(d2d), run_cfg).sum_latency;
        row.t_mot =
            run_workload(mot, mot_router(mot), workload_for(mot), run_cfg).sum_latency;
        row.t_mesh =
            run_workload(mesh, xy_router(mesh), workload_for(mesh), run_cfg).sum_latency;
        row.speedup_pct = speedup_pct(row.t_mesh, row.t_d2dmot);
        rows.push_back(row);
    }
    return rows;
}

} // namespace nockit
