#pragma once

// Independent reference implementations used only as test oracles. These
// deliberately take different algorithmic routes from the library code they
// check, so agreement is evidence rather than tautology.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stack>
#include <vector>

#include "qproc/census.hpp"
#include "qproc/cube.hpp"
#include "qproc/sampler.hpp"

namespace testutil {

// Depth-first census: explicit-stack DFS over an adjacency list built up
// front, unlike the library's on-the-fly BFS.
inline qproc::ComponentCensus dfs_census(const qproc::CubeSpec& spec,
                                         const qproc::SubgraphSample& sample) {
    std::vector<std::vector<qproc::VertexId>> adj(spec.n);
    for (qproc::EdgeId e = 0; e < spec.m; ++e) {
        if (!sample.edges.test(e)) continue;
        const auto [u, v] = qproc::edge_endpoints(spec, e);
        adj[u].push_back(v);
        adj[v].push_back(u);
    }

    qproc::ComponentCensus census;
    census.spec = spec;
    std::vector<bool> visited(spec.n, false);
    for (qproc::VertexId start = 0; start < spec.n; ++start) {
        if (visited[start]) continue;
        std::uint64_t size = 0;
        std::stack<qproc::VertexId> stack;
        stack.push(start);
        visited[start] = true;
        while (!stack.empty()) {
            const qproc::VertexId v = stack.top();
            stack.pop();
            ++size;
            for (qproc::VertexId w : adj[v])
                if (!visited[w]) {
                    visited[w] = true;
                    stack.push(w);
                }
        }
        census.sizes.push_back(size);
        if (size == 1) census.isolated.push_back(start);
    }
    std::sort(census.sizes.begin(), census.sizes.end(), std::greater<>());
    census.giant_size = census.sizes.front();

    const std::uint64_t mid_upper = qproc::ceil_cbrt(spec.n);
    bool giant_seen = false;
    for (std::uint64_t size : census.sizes) {
        if (size >= 2 && size <= mid_upper) ++census.mid_components;
        if (size == census.giant_size && !giant_seen) {
            giant_seen = true;
            continue;
        }
        if (size >= 2) ++census.non_giant_non_isolated;
    }
    if (census.isolated.size() >= 2) {
        int best = 32;
        for (std::size_t a = 0; a + 1 < census.isolated.size(); ++a)
            for (std::size_t b = a + 1; b < census.isolated.size(); ++b)
                best = std::min(best, qproc::hamming_distance(census.isolated[a],
                                                              census.isolated[b]));
        census.min_isolated_hamming = best;
    }
    return census;
}

inline bool census_equal(const qproc::ComponentCensus& a, const qproc::ComponentCensus& b) {
    return a.sizes == b.sizes && a.giant_size == b.giant_size &&
           a.isolated == b.isolated && a.mid_components == b.mid_components &&
           a.non_giant_non_isolated == b.non_giant_non_isolated &&
           a.min_isolated_hamming == b.min_isolated_hamming;
}

// Induced edge count e(S) from per-vertex neighbour membership; used to
// check the boundary identity e(S, S^C) = d|S| - 2e(S).
inline std::uint64_t induced_edge_count(const qproc::CubeSpec& spec,
                                        std::uint64_t vertex_mask) {
    std::uint64_t twice = 0;
    for (qproc::VertexId v = 0; v < spec.n; ++v) {
        if (!((vertex_mask >> v) & 1u)) continue;
        for (int i = 0; i < spec.d; ++i) {
            const qproc::VertexId w = v ^ (qproc::VertexId{1} << i);
            twice += (vertex_mask >> w) & 1u;
        }
    }
    return twice / 2;
}

// Sample with exactly the given edge ids present.
inline qproc::SubgraphSample sample_with_edges(const qproc::CubeSpec& spec,
                                               const std::vector<qproc::EdgeId>& edges) {
    qproc::SubgraphSample sample{spec, qproc::BitVec(spec.m)};
    for (qproc::EdgeId e : edges) sample.edges.set(e);
    return sample;
}

}  // namespace testutil
