#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "qproc/bitvec.hpp"
#include "qproc/cube.hpp"
#include "qproc/rng.hpp"

namespace qproc {

// A bond-percolation sample of Q^d: bit e is set iff edge e is present.
struct SubgraphSample {
    CubeSpec spec;
    BitVec edges;
};

// A uniformly random linear order on all m edges (the edge process).
struct ProcessOrder {
    CubeSpec spec;
    std::vector<EdgeId> order;
};

inline void validate_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument(std::string(what) + ": probability outside [0, 1]");
}

// Keep each edge independently with probability p, consuming exactly one
// uniform draw per edge in EdgeId order. The draw order is normative.
inline SubgraphSample bernoulli_subgraph(const CubeSpec& spec, double p, RngStream& rng) {
    validate_probability(p, "bernoulli_subgraph");
    SubgraphSample sample{spec, BitVec(spec.m)};
    for (EdgeId e = 0; e < spec.m; ++e)
        if (rng.next_bernoulli(p)) sample.edges.set(e);
    return sample;
}

// Fisher-Yates from the top index downward with rejection-sampled bounded
// draws; both choices are normative so seeded orders replay exactly.
inline ProcessOrder process_order(const CubeSpec& spec, RngStream& rng) {
    ProcessOrder po{spec, std::vector<EdgeId>(spec.m)};
    std::iota(po.order.begin(), po.order.end(), EdgeId{0});
    for (std::uint64_t i = spec.m - 1; i >= 1; --i) {
        const std::uint64_t j = rng.next_bounded(i + 1);
        std::swap(po.order[i], po.order[j]);
    }
    return po;
}

struct SplitProbabilities {
    double p1;
    double p2;
};

// Two-round exposure split: p2 = eps and (1-p1)(1-p2) = 1-p, so the union of
// independent rounds at p1 and p2 matches a single round at p.
inline SplitProbabilities split_probabilities(double p, double eps) {
    validate_probability(p, "split_probabilities");
    validate_probability(eps, "split_probabilities");
    if (eps > p)
        throw std::invalid_argument("split_probabilities: eps must not exceed p");
    if (eps == 1.0 && p < 1.0)
        throw std::invalid_argument("split_probabilities: eps = 1 only valid with p = 1");
    if (p == 1.0) return {1.0, eps};
    if (eps == 0.0) return {p, 0.0};
    return {1.0 - (1.0 - p) / (1.0 - eps), eps};
}

struct TwoRoundSample {
    SubgraphSample round1;
    SubgraphSample round2;
    SubgraphSample combined;  // bitwise OR of the rounds
};

// Round 1 consumes the first m draws, round 2 the next m, on the one stream.
inline TwoRoundSample two_round_union(const CubeSpec& spec, double p, double eps,
                                      RngStream& rng) {
    const SplitProbabilities split = split_probabilities(p, eps);
    TwoRoundSample out{bernoulli_subgraph(spec, split.p1, rng),
                       bernoulli_subgraph(spec, split.p2, rng),
                       SubgraphSample{}};
    out.combined = out.round1;
    out.combined.edges.or_with(out.round2.edges);
    return out;
}

}  // namespace qproc
