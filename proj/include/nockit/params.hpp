#pragma once

#include <cmath>
#include <optional>

#include "core.hpp"

namespace nockit {

// Closed-form parameters per family. Fields without a published closed form
// for a family stay empty rather than being invented.
struct TopoParams {
    Family family = Family::Custom;
    int m = 0;
    int n = 0; // 0 for single-size families
    long long routers = 0;
    long long ips = 0;
    std::optional<long long> links;
    std::optional<long long> diameter;
    std::optional<long long> bisection;
    std::vector<std::pair<std::string, long long>> degrees; // role -> degree
};

namespace detail {

inline void need_pow2(long long v, const char* what) {
    if (!is_power_of_two(v))
        throw SizeUnsupported(std::string(what) + " must be a power of two, got " +
                              std::to_string(v));
}

} // namespace detail

// For grid families m,n are the grid sides; for the others m is the size
// argument (IP count or leaf count) and n is ignored.
inline TopoParams params_for(Family fam, int m, int n = 0) {
    TopoParams p;
    p.family = fam;
    p.m = m;
    p.n = n;
    switch (fam) {
        case Family::Mesh: {
            if (m < 1 || n < 1) throw SizeUnsupported("mesh sizes must be >= 1");
            p.routers = 1LL * m * n;
            p.links = 2LL * m * n - m - n;
            p.diameter = m + n - 2;
            p.bisection = std::min(m, n);
            p.ips = 1LL * m * n;
            p.degrees = {{"corner", 3}, {"boundary", 4}, {"central", 5}};
            break;
        }
        case Family::Torus:
        case Family::FoldedTorus: {
            if (m < 1 || n < 1) throw SizeUnsupported("torus sizes must be >= 1");
            p.routers = 1LL * m * n;
            p.links = 2LL * m * n;
            p.diameter = m / 2 + n / 2;
            p.bisection = 2LL * std::min(m, n);
            p.ips = 1LL * m * n;
            p.degrees = {{"all", 5}};
            break;
        }
        case Family::BinaryTree: {
            // m = leaf-router count; each leaf router carries 4 IP cores.
            detail::need_pow2(m, "binary tree leaf count");
            if (m < 2) throw SizeUnsupported("binary tree needs >= 2 leaves");
            p.routers = 2LL * m - 1;
            p.links = 2LL * m - 2;
            p.diameter = 2LL * ilog2(m);
            p.bisection = 1;
            p.ips = 4LL * m;
            p.degrees = {{"leaf", 5}, {"stem", 3}, {"root", 2}};
            break;
        }
        case Family::Octagon: {
            if (m < 8) throw SizeUnsupported("octagon needs >= 8 IP blocks");
            long long k = m / 8;
            p.diameter = 2 * k;
            p.bisection = m <= 8 ? 6 : 6 * (1 + k);
            p.routers = m <= 8 ? 8 : 8 * (1 + k) - k;
            p.ips = m;
            p.degrees = {{"member", 4}, {"bridge", 7}};
            break;
        }
        case Family::Spin: {
            detail::need_pow2(m, "SPIN IP count");
            if (m < 8) throw SizeUnsupported("SPIN needs >= 8 IP blocks");
            p.diameter = ilog2(m);
            p.bisection = m / 2;
            p.routers = 1LL * m * ilog2(m / 8);
            p.ips = m;
            p.degrees = {{"non_root", 8}, {"root", 4}};
            break;
        }
        case Family::Bft: {
            detail::need_pow2(m, "butterfly fat tree IP count");
            if (m < 4) throw SizeUnsupported("butterfly fat tree needs >= 4 IP blocks");
            p.diameter = ilog2(m);
            p.bisection = static_cast<long long>(std::sqrt(static_cast<double>(m)));
            p.routers = m / 2;
            p.ips = m;
            p.degrees = {{"non_root", 6}, {"root", 4}};
            break;
        }
        case Family::MoT: {
            detail::need_pow2(m, "mesh-of-trees rows");
            detail::need_pow2(n, "mesh-of-trees cols");
            if (m < 2 || n < 2) throw SizeUnsupported("mesh-of-trees needs >= 2x2");
            p.routers = 3LL * m * n - m - n;
            p.links = 4LL * m * n - 2LL * (m + n);
            p.diameter = 2LL * (ilog2(m) + ilog2(n));
            p.bisection = std::min(m, n);
            p.ips = 1LL * m * n;
            p.degrees = {{"leaf", 2}, {"stem", 3}, {"root", 2}};
            break;
        }
        case Family::D2DMoT: {
            detail::need_pow2(m, "diametrical mesh-of-trees rows");
            detail::need_pow2(n, "diametrical mesh-of-trees cols");
            if (m < 2 || n < 2)
                throw SizeUnsupported("diametrical mesh-of-trees needs >= 2x2");
            p.routers = 3LL * m * n - m - n;
            p.links = 4LL * m * n - 2LL * (m + n) + 1LL * m * n / 2 + 2;
            p.ips = 2LL * m * n;
            p.degrees = {{"leaf", 5},
                         {"stem", 3},
                         {"internal_root", 3},
                         {"external_root", 2}};
            break;
        }
        default:
            throw FamilyUnsupported(
                std::string("no parameter formulas for family ") + family_name(fam));
    }
    return p;
}

} // namespace nockit
