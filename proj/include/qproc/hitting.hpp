#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qproc/bitvec.hpp"
#include "qproc/cube.hpp"
#include "qproc/rng.hpp"
#include "qproc/sampler.hpp"
#include "qproc/union_find.hpp"

namespace qproc {

// Outcome of one replay of the edge process: tau_d is the first (1-based)
// step with minimum degree >= 1, tau_c the first step at which the graph is
// connected. Both exist because Q^d itself is connected, and
// tau_d <= tau_c always. The full order is not retained, only an FNV-1a
// digest of the edge ids, so traces stay small across millions of trials.
struct ProcessTrace {
    CubeSpec spec;
    std::uint64_t tau_d = 0;
    std::uint64_t tau_c = 0;
    std::uint64_t master_seed = 0;
    std::string label;
    std::uint64_t index = 0;
    std::uint64_t order_digest = 0;
};

struct StreamProvenance {
    std::uint64_t master_seed = 0;
    std::string label;
    std::uint64_t index = 0;
};

inline std::uint64_t order_digest(const std::vector<EdgeId>& order) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (EdgeId e : order) {
        unsigned char bytes[8];
        for (int b = 0; b < 8; ++b) bytes[b] = static_cast<unsigned char>(e >> (8 * b));
        h = fnv1a64(bytes, 8, h);
    }
    return h;
}

// Replay an edge order, tracking the isolated-vertex count (for tau_d) and
// the disjoint-set component count (for tau_c). Stops as soon as both
// hitting times are known; later edges are never touched.
inline ProcessTrace run_process(const CubeSpec& spec, const ProcessOrder& order,
                                const StreamProvenance& provenance = {}) {
    if (order.order.size() != spec.m)
        throw std::invalid_argument("run_process: order length differs from edge count");
    BitVec seen(spec.m);
    for (EdgeId e : order.order) {
        if (e >= spec.m || seen.test(e))
            throw std::invalid_argument("run_process: order is not a permutation of the edge ids");
        seen.set(e);
    }

    std::vector<std::uint32_t> degree(spec.n, 0);
    DisjointSet dsu(static_cast<std::uint32_t>(spec.n));
    std::uint64_t isolated = spec.n;

    ProcessTrace trace{spec, 0, 0, provenance.master_seed, provenance.label,
                       provenance.index, order_digest(order.order)};

    for (std::uint64_t step = 1; step <= spec.m; ++step) {
        const auto [u, v] = edge_endpoints(spec, order.order[step - 1]);
        if (degree[u]++ == 0) --isolated;
        if (degree[v]++ == 0) --isolated;
        dsu.unite(u, v);
        if (trace.tau_d == 0 && isolated == 0) trace.tau_d = step;
        if (trace.tau_c == 0 && dsu.component_count() == 1) trace.tau_c = step;
        if (trace.tau_d != 0 && trace.tau_c != 0) break;
    }
    return trace;
}

// One Monte Carlo trial for the hitting-time equality: sample an order from
// the stream, replay it, report whether tau_d == tau_c.
inline bool hitting_equality_trial(const CubeSpec& spec, RngStream& rng) {
    const ProcessOrder order = process_order(spec, rng);
    const ProcessTrace trace = run_process(
        spec, order, StreamProvenance{rng.master_seed(), rng.label(), rng.index()});
    return trace.tau_d == trace.tau_c;
}

}  // namespace qproc
