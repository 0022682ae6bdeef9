#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <utility>

namespace qproc {

// Vertices of Q^d are the integers [0, 2^d); bit i of a vertex is its i-th
// coordinate.
using VertexId = std::uint32_t;

// Canonical edge index in [0, d*2^(d-1)). An edge {u, u^2^i} with bit i of u
// clear is encoded as e = i*2^(d-1) + r, where r is u with bit i deleted
// (bits above i shifted down by one). The layout is fixed: golden files and
// seeded runs depend on it.
using EdgeId = std::uint64_t;

// Dimension and derived vertex/edge counts of the binary hypercube Q^d.
struct CubeSpec {
    int d = 0;
    std::uint64_t n = 0;  // 2^d
    std::uint64_t m = 0;  // d * 2^(d-1)
};

inline CubeSpec make_cube(int d) {
    if (d < 1 || d > 30)
        throw std::invalid_argument("make_cube: dimension must be in [1, 30]");
    return CubeSpec{d, std::uint64_t{1} << d,
                    static_cast<std::uint64_t>(d) << (d - 1)};
}

// Vertex adjacent to v across direction i (flip coordinate i).
inline VertexId neighbor(const CubeSpec& spec, VertexId v, int direction) {
    if (direction < 0 || direction >= spec.d)
        throw std::invalid_argument("neighbor: direction out of range");
    return v ^ (VertexId{1} << direction);
}

// Graph distance in Q^d equals Hamming distance of the coordinate words.
inline int hamming_distance(VertexId u, VertexId v) noexcept {
    return std::popcount(u ^ v);
}

inline EdgeId edge_encode(const CubeSpec& spec, VertexId lower, int direction) {
    if (direction < 0 || direction >= spec.d)
        throw std::invalid_argument("edge_encode: direction out of range");
    if ((lower >> direction) & 1u)
        throw std::invalid_argument("edge_encode: bit `direction` of the lower endpoint must be clear");
    const VertexId low_bits = lower & ((VertexId{1} << direction) - 1);
    const VertexId reduced = low_bits | ((lower >> (direction + 1)) << direction);
    return (static_cast<EdgeId>(direction) << (spec.d - 1)) + reduced;
}

struct DecodedEdge {
    VertexId lower;  // endpoint with bit `direction` clear
    int direction;
};

inline DecodedEdge edge_decode(const CubeSpec& spec, EdgeId e) {
    if (e >= spec.m) throw std::invalid_argument("edge_decode: edge id out of range");
    const int direction = static_cast<int>(e >> (spec.d - 1));
    const VertexId reduced =
        static_cast<VertexId>(e & ((EdgeId{1} << (spec.d - 1)) - 1));
    const VertexId low_bits = reduced & ((VertexId{1} << direction) - 1);
    const VertexId lower = low_bits | ((reduced >> direction) << (direction + 1));
    return DecodedEdge{lower, direction};
}

inline std::pair<VertexId, VertexId> edge_endpoints(const CubeSpec& spec, EdgeId e) {
    const DecodedEdge de = edge_decode(spec, e);
    return {de.lower, de.lower | (VertexId{1} << de.direction)};
}

// Exact edge boundary e(S, S^C): edges of Q^d with exactly one endpoint in S.
// S is a vertex bitmask, so this is limited to d <= 6 (n <= 64); only the
// exhaustive small-d sweeps use it. Counts by scanning every edge directly
// (the identity d|S| - 2e(S) is checked against it in tests, not assumed).
inline std::uint64_t boundary_size(const CubeSpec& spec, std::uint64_t vertex_mask) {
    if (spec.d > 6)
        throw std::invalid_argument("boundary_size: vertex bitmask form requires d <= 6");
    std::uint64_t count = 0;
    for (int i = 0; i < spec.d; ++i) {
        const VertexId bit = VertexId{1} << i;
        for (VertexId u = 0; u < spec.n; ++u) {
            if (u & bit) continue;  // enumerate each edge once from its lower endpoint
            const bool in_u = (vertex_mask >> u) & 1u;
            const bool in_v = (vertex_mask >> (u | bit)) & 1u;
            count += in_u != in_v;
        }
    }
    return count;
}

}  // namespace qproc
