#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qproc/bitvec.hpp"
#include "qproc/cube.hpp"
#include "qproc/sampler.hpp"

namespace qproc {

namespace detail {

// Edge id of {v, v^2^i} without the validation of edge_encode; BFS hot path.
inline EdgeId incident_edge_id(const CubeSpec& spec, VertexId v, int i) noexcept {
    const VertexId lower = v & ~(VertexId{1} << i);
    const VertexId reduced =
        (lower & ((VertexId{1} << i) - 1)) | ((lower >> (i + 1)) << i);
    return (static_cast<EdgeId>(i) << (spec.d - 1)) | reduced;
}

}  // namespace detail

// Largest r with r^3 <= n.
inline std::uint64_t floor_cbrt(std::uint64_t n) {
    auto cube = [](std::uint64_t r) { return r * r * r; };
    std::uint64_t r = static_cast<std::uint64_t>(std::cbrt(static_cast<double>(n)));
    while (r > 0 && cube(r) > n) --r;
    while (cube(r + 1) <= n) ++r;
    return r;
}

// Smallest r with r^3 >= n.
inline std::uint64_t ceil_cbrt(std::uint64_t n) {
    const std::uint64_t r = floor_cbrt(n);
    return r * r * r == n ? r : r + 1;
}

// Full component statistics of one percolation sample. The mid-size window
// is [2, ceil(n^(1/3))], boundary inclusive.
struct ComponentCensus {
    CubeSpec spec;
    std::vector<std::uint64_t> sizes;  // descending
    std::uint64_t giant_size = 0;
    std::vector<VertexId> isolated;
    std::uint64_t mid_components = 0;
    std::uint64_t non_giant_non_isolated = 0;
    std::optional<int> min_isolated_hamming;  // absent when fewer than 2 isolated
};

namespace detail {

inline std::optional<int> min_pairwise_hamming(const std::vector<VertexId>& vs) {
    if (vs.size() < 2) return std::nullopt;
    int best = 32;
    for (std::size_t a = 0; a + 1 < vs.size(); ++a)
        for (std::size_t b = a + 1; b < vs.size(); ++b)
            best = std::min(best, hamming_distance(vs[a], vs[b]));
    return best;
}

}  // namespace detail

// Breadth-first sweep over the present edges.
inline ComponentCensus components(const CubeSpec& spec, const SubgraphSample& sample) {
    if (sample.spec.d != spec.d)
        throw std::invalid_argument("components: sample was drawn from a different cube");

    ComponentCensus census;
    census.spec = spec;

    BitVec visited(spec.n);
    std::vector<VertexId> queue;
    queue.reserve(64);

    for (VertexId start = 0; start < spec.n; ++start) {
        if (visited.test(start)) continue;
        visited.set(start);
        queue.clear();
        queue.push_back(start);
        std::uint64_t size = 0;
        while (!queue.empty()) {
            const VertexId v = queue.back();
            queue.pop_back();
            ++size;
            for (int i = 0; i < spec.d; ++i) {
                if (!sample.edges.test(detail::incident_edge_id(spec, v, i))) continue;
                const VertexId w = v ^ (VertexId{1} << i);
                if (!visited.test(w)) {
                    visited.set(w);
                    queue.push_back(w);
                }
            }
        }
        census.sizes.push_back(size);
        if (size == 1) census.isolated.push_back(start);
    }

    std::sort(census.sizes.begin(), census.sizes.end(), std::greater<>());
    census.giant_size = census.sizes.front();

    const std::uint64_t mid_upper = ceil_cbrt(spec.n);
    bool giant_slot_taken = false;
    for (std::uint64_t size : census.sizes) {
        if (size >= 2 && size <= mid_upper) ++census.mid_components;
        if (size == census.giant_size && !giant_slot_taken) {
            giant_slot_taken = true;  // exactly one component is "the" giant
            continue;
        }
        if (size >= 2) ++census.non_giant_non_isolated;
    }

    census.min_isolated_hamming = detail::min_pairwise_hamming(census.isolated);
    return census;
}

// Minimum pairwise Hamming distance among degree-0 vertices, computed from
// the sample directly (no traversal).
inline std::optional<int> min_isolated_distance(const CubeSpec& spec,
                                                const SubgraphSample& sample) {
    std::vector<VertexId> isolated;
    for (VertexId v = 0; v < spec.n; ++v) {
        bool has_edge = false;
        for (int i = 0; i < spec.d && !has_edge; ++i)
            has_edge = sample.edges.test(detail::incident_edge_id(spec, v, i));
        if (!has_edge) isolated.push_back(v);
    }
    return detail::min_pairwise_hamming(isolated);
}

// Single-traversal connectivity check with early exit.
inline bool is_connected(const CubeSpec& spec, const SubgraphSample& sample) {
    BitVec visited(spec.n);
    std::vector<VertexId> queue;
    queue.reserve(256);
    visited.set(0);
    queue.push_back(0);
    std::uint64_t reached = 0;
    while (!queue.empty()) {
        const VertexId v = queue.back();
        queue.pop_back();
        ++reached;
        for (int i = 0; i < spec.d; ++i) {
            if (!sample.edges.test(detail::incident_edge_id(spec, v, i))) continue;
            const VertexId w = v ^ (VertexId{1} << i);
            if (!visited.test(w)) {
                visited.set(w);
                queue.push_back(w);
            }
        }
    }
    return reached == spec.n;
}

// The finite-d reading of the unique-component claim: one component holds at
// least `threshold` of the vertices, everything else is an isolated vertex,
// and isolated vertices are pairwise at Hamming distance >= 2.
struct PropositionVerdict {
    double giant_fraction = 0.0;
    bool others_all_isolated = false;
    bool isolated_pairwise_far = false;
    double threshold = 0.0;

    bool holds() const noexcept {
        return giant_fraction >= threshold && others_all_isolated && isolated_pairwise_far;
    }
};

inline PropositionVerdict proposition_verdict(const ComponentCensus& census,
                                              double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw std::invalid_argument("proposition_verdict: threshold must be in (0, 1]");
    PropositionVerdict verdict;
    verdict.threshold = threshold;
    verdict.giant_fraction =
        static_cast<double>(census.giant_size) / static_cast<double>(census.spec.n);
    verdict.others_all_isolated = census.non_giant_non_isolated == 0;
    verdict.isolated_pairwise_far =
        !census.min_isolated_hamming.has_value() || *census.min_isolated_hamming >= 2;
    return verdict;
}

}  // namespace qproc
