#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qproc/cube.hpp"
#include "qproc/hitting.hpp"
#include "qproc/sampler.hpp"

namespace qproc {

// Result of one exhaustive subset sweep. `violations` empty means the
// inequality held for every subset checked at this dimension.
struct SweepViolation {
    std::uint64_t subset_mask;
    double claimed_bound;
    double actual_value;
};

struct SweepReport {
    std::string name;
    int d = 0;
    std::uint64_t subsets_checked = 0;
    std::vector<SweepViolation> violations;
    std::uint64_t tight_witnesses = 0;
};

namespace detail {

constexpr double kSweepTolerance = 1e-9;

// Per-vertex neighbourhood bitmasks of Q^d for n <= 64.
inline std::vector<std::uint64_t> neighbor_masks(const CubeSpec& spec) {
    if (spec.d > 6)
        throw std::invalid_argument("neighbor_masks: requires d <= 6");
    std::vector<std::uint64_t> masks(spec.n, 0);
    for (VertexId v = 0; v < spec.n; ++v)
        for (int i = 0; i < spec.d; ++i)
            masks[v] |= std::uint64_t{1} << (v ^ (VertexId{1} << i));
    return masks;
}

inline void require_sweep_dim(int d) {
    if (d < 1 || d > 4)
        throw std::invalid_argument(
            "subset sweep: refused for d > 4 (2^(2^d) subsets infeasible)");
}

}  // namespace detail

// Exhaustive check of the small-set edge-isoperimetric bound
// e(S, S^C) >= |S| * (d - 2*log2|S|) over every nonempty subset, with a
// negative right-hand side treated as 0 (the bound is vacuous there).
inline SweepReport verify_harper_small(int d) {
    detail::require_sweep_dim(d);
    const CubeSpec spec = make_cube(d);
    SweepReport report{"harper_small", d, 0, {}, 0};
    const std::uint64_t full = (std::uint64_t{1} << spec.n) - 1;
    for (std::uint64_t s = 1; s <= full; ++s) {
        ++report.subsets_checked;
        const std::uint64_t boundary = boundary_size(spec, s);
        const double size = static_cast<double>(std::popcount(s));
        const double rhs = std::max(size * (spec.d - 2.0 * std::log2(size)), 0.0);
        const double lhs = static_cast<double>(boundary);
        if (lhs < rhs - detail::kSweepTolerance)
            report.violations.push_back({s, rhs, lhs});
        else if (std::abs(lhs - rhs) < detail::kSweepTolerance)
            ++report.tight_witnesses;
    }
    return report;
}

// Exhaustive check of e(S, S^C) >= |S| for every subset with |S| <= 2^(d-1).
inline SweepReport verify_harper_big(int d) {
    detail::require_sweep_dim(d);
    const CubeSpec spec = make_cube(d);
    SweepReport report{"harper_big", d, 0, {}, 0};
    const std::uint64_t full = (std::uint64_t{1} << spec.n) - 1;
    const int half = static_cast<int>(spec.n / 2);
    for (std::uint64_t s = 1; s <= full; ++s) {
        const int size = std::popcount(s);
        if (size > half) continue;
        ++report.subsets_checked;
        const std::uint64_t boundary = boundary_size(spec, s);
        if (boundary < static_cast<std::uint64_t>(size))
            report.violations.push_back(
                {s, static_cast<double>(size), static_cast<double>(boundary)});
        else if (boundary == static_cast<std::uint64_t>(size))
            ++report.tight_witnesses;
    }
    return report;
}

// Exhaustive check of the inner claim of the small-set proof: if the induced
// subgraph Q^d[S] has minimum degree delta then |S| >= 2^delta, together with
// its corollary e(S) <= |S| * log2|S|. Tightness is counted on the first
// inequality (subcubes achieve it).
inline SweepReport verify_min_degree_size(int d) {
    detail::require_sweep_dim(d);
    const CubeSpec spec = make_cube(d);
    const auto masks = detail::neighbor_masks(spec);
    SweepReport report{"min_degree_size", d, 0, {}, 0};
    const std::uint64_t full = (std::uint64_t{1} << spec.n) - 1;
    for (std::uint64_t s = 1; s <= full; ++s) {
        ++report.subsets_checked;
        int min_degree = spec.d + 1;
        std::uint64_t inside_twice = 0;
        std::uint64_t rest = s;
        while (rest) {
            const int v = std::countr_zero(rest);
            rest &= rest - 1;
            const int deg = std::popcount(masks[v] & s);
            inside_twice += static_cast<std::uint64_t>(deg);
            min_degree = std::min(min_degree, deg);
        }
        const std::uint64_t size = static_cast<std::uint64_t>(std::popcount(s));
        const std::uint64_t size_floor = std::uint64_t{1} << min_degree;
        if (size < size_floor)
            report.violations.push_back({s, static_cast<double>(size_floor),
                                         static_cast<double>(size)});
        else if (size == size_floor)
            ++report.tight_witnesses;
        const double edges = static_cast<double>(inside_twice) / 2.0;
        const double cap = static_cast<double>(size) * std::log2(static_cast<double>(size));
        if (edges > cap + detail::kSweepTolerance)
            report.violations.push_back({s, cap, edges});
    }
    return report;
}

// Small general graph for the degeneracy-peeling oracle.
struct SmallGraph {
    std::uint32_t vertex_count = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
};

// Iteratively delete vertices of degree below half the average degree of the
// *input* graph. The survivors are nonempty and induce minimum degree at
// least avg/2 (the standard existence argument, made constructive).
inline std::vector<std::uint32_t> degeneracy_core(const SmallGraph& graph) {
    if (graph.vertex_count == 0 || graph.edges.empty())
        throw std::invalid_argument("degeneracy_core: graph must have at least one edge");
    const double half_avg =
        static_cast<double>(graph.edges.size()) / static_cast<double>(graph.vertex_count);

    std::vector<std::vector<std::uint32_t>> adj(graph.vertex_count);
    for (const auto& [a, b] : graph.edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<std::uint32_t> degree(graph.vertex_count);
    std::vector<bool> alive(graph.vertex_count, true);
    for (std::uint32_t v = 0; v < graph.vertex_count; ++v)
        degree[v] = static_cast<std::uint32_t>(adj[v].size());

    std::vector<std::uint32_t> stack;
    for (std::uint32_t v = 0; v < graph.vertex_count; ++v)
        if (degree[v] < half_avg) stack.push_back(v);
    std::vector<bool> queued(graph.vertex_count, false);
    for (std::uint32_t v : stack) queued[v] = true;

    while (!stack.empty()) {
        const std::uint32_t v = stack.back();
        stack.pop_back();
        if (!alive[v]) continue;
        alive[v] = false;
        for (std::uint32_t w : adj[v]) {
            if (!alive[w]) continue;
            if (--degree[w] < half_avg && !queued[w]) {
                queued[w] = true;
                stack.push_back(w);
            }
        }
    }

    std::vector<std::uint32_t> core;
    for (std::uint32_t v = 0; v < graph.vertex_count; ++v)
        if (alive[v]) core.push_back(v);
    return core;
}

namespace detail {

// Integer determinant by Bareiss fraction-free elimination; entries stay
// small for the k <= 8 Laplacian minors used here.
inline std::int64_t integer_determinant(std::vector<std::vector<std::int64_t>> a) {
    const std::size_t s = a.size();
    if (s == 0) return 1;
    std::int64_t prev = 1;
    std::int64_t sign = 1;
    for (std::size_t k = 0; k + 1 < s; ++k) {
        if (a[k][k] == 0) {
            std::size_t swap_row = k + 1;
            while (swap_row < s && a[swap_row][k] == 0) ++swap_row;
            if (swap_row == s) return 0;
            std::swap(a[k], a[swap_row]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < s; ++i) {
            for (std::size_t j = k + 1; j < s; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    return sign * a[s - 1][s - 1];
}

// Spanning trees of the induced subgraph on `members` by the matrix-tree
// theorem: any cofactor of the Laplacian, evaluated exactly.
inline std::int64_t spanning_tree_count(const CubeSpec& spec,
                                        const std::vector<VertexId>& members) {
    const std::size_t k = members.size();
    if (k == 1) return 1;
    std::vector<std::vector<std::int64_t>> lap(k, std::vector<std::int64_t>(k, 0));
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b)
            if (hamming_distance(members[a], members[b]) == 1) {
                lap[a][b] -= 1;
                lap[b][a] -= 1;
                lap[a][a] += 1;
                lap[b][b] += 1;
            }
    std::vector<std::vector<std::int64_t>> minor(k - 1,
                                                 std::vector<std::int64_t>(k - 1));
    for (std::size_t i = 0; i + 1 < k; ++i)
        for (std::size_t j = 0; j + 1 < k; ++j) minor[i][j] = lap[i][j];
    return integer_determinant(std::move(minor));
}

// Enumerate every connected vertex set of size exactly k containing `root`
// once: binary branching on the smallest-indexed boundary vertex, carrying
// an exclusion set.
template <typename Emit>
inline void enumerate_connected_sets(const std::vector<std::uint64_t>& masks,
                                     std::uint64_t members, std::uint64_t excluded,
                                     std::uint64_t boundary_union, int size, int k,
                                     const Emit& emit) {
    if (size == k) {
        emit(members);
        return;
    }
    const std::uint64_t boundary = boundary_union & ~members & ~excluded;
    if (boundary == 0) return;
    const int u = std::countr_zero(boundary);
    const std::uint64_t bit = std::uint64_t{1} << u;
    enumerate_connected_sets(masks, members | bit, excluded,
                             boundary_union | masks[u], size + 1, k, emit);
    enumerate_connected_sets(masks, members, excluded | bit, boundary_union, size, k,
                             emit);
}

}  // namespace detail

// Exact number of k-vertex trees of Q^d rooted at v: enumerate the connected
// vertex sets through v and add up their spanning-tree counts.
inline std::uint64_t count_rooted_trees(const CubeSpec& spec, VertexId v, int k) {
    if (k < 1) throw std::invalid_argument("count_rooted_trees: k must be positive");
    if (spec.d > 6 || k > 8)
        throw std::invalid_argument(
            "count_rooted_trees: refused beyond d <= 6, k <= 8 (enumeration budget)");
    const auto masks = detail::neighbor_masks(spec);
    std::uint64_t total = 0;
    detail::enumerate_connected_sets(
        masks, std::uint64_t{1} << v, 0, masks[v], 1, k,
        [&](std::uint64_t member_mask) {
            std::vector<VertexId> members;
            members.reserve(k);
            std::uint64_t rest = member_mask;
            while (rest) {
                members.push_back(static_cast<VertexId>(std::countr_zero(rest)));
                rest &= rest - 1;
            }
            total += static_cast<std::uint64_t>(detail::spanning_tree_count(spec, members));
        });
    return total;
}

// Rooted-tree counts t(v, k) for k = 1..k_max, checked to be identical
// across every root (Q^d is vertex-transitive), against the (e*d)^(k-1)
// bound, and -- recorded, never asserted -- against the sharper expression
// k^(k-2)/(k-1)! * d^(k-1) that the counting argument suggests.
struct TreeCountRow {
    int k = 0;
    std::uint64_t count = 0;
    double ed_bound = 0.0;
    bool ed_bound_holds = false;
    double cayley_expression = 0.0;
    bool below_cayley_expression = false;
};

struct TreeCountReport {
    int d = 0;
    int k_max = 0;
    bool root_independent = false;
    std::vector<TreeCountRow> rows;

    bool all_bounds_hold() const {
        for (const TreeCountRow& row : rows)
            if (!row.ed_bound_holds) return false;
        return root_independent;
    }
};

inline TreeCountReport tree_count_report(int d, int k_max) {
    const CubeSpec spec = make_cube(d);
    if (spec.n > 64)
        throw std::invalid_argument("tree_count_report: requires d <= 6");
    TreeCountReport report{d, k_max, true, {}};
    for (int k = 1; k <= k_max; ++k) {
        const std::uint64_t reference = count_rooted_trees(spec, 0, k);
        for (VertexId v = 1; v < spec.n; ++v)
            if (count_rooted_trees(spec, v, k) != reference) report.root_independent = false;
        TreeCountRow row;
        row.k = k;
        row.count = reference;
        row.ed_bound = std::pow(std::exp(1.0) * d, k - 1);
        row.ed_bound_holds = static_cast<double>(reference) <= row.ed_bound;
        double cayley = std::pow(static_cast<double>(d), k - 1);
        // k^(k-2) / (k-1)!
        double ratio = (k == 1) ? 1.0 : std::pow(static_cast<double>(k), k - 2);
        for (int j = 2; j < k; ++j) ratio /= static_cast<double>(j);
        row.cayley_expression = cayley * ratio;
        row.below_cayley_expression = static_cast<double>(reference) <= row.cayley_expression;
        report.rows.push_back(row);
    }
    return report;
}

// Exact probability that Q^d_p is connected (spanning all n vertices),
// summed over all 2^m edge subsets. Feasible only for d <= 3.
inline double exact_connectivity_probability(int d, double p) {
    if (d < 1 || d > 3)
        throw std::invalid_argument(
            "exact_connectivity_probability: refused for d > 3 (2^m subsets infeasible)");
    validate_probability(p, "exact_connectivity_probability");
    const CubeSpec spec = make_cube(d);

    // Distinct connected-subset counts by edge count.
    std::vector<std::uint64_t> connected_by_edges(spec.m + 1, 0);
    std::vector<std::pair<VertexId, VertexId>> endpoints;
    for (EdgeId e = 0; e < spec.m; ++e) endpoints.push_back(edge_endpoints(spec, e));

    const std::uint64_t subset_count = std::uint64_t{1} << spec.m;
    for (std::uint64_t subset = 0; subset < subset_count; ++subset) {
        // Union-find over the present edges.
        std::array<std::uint8_t, 8> parent{};
        for (std::uint8_t v = 0; v < spec.n; ++v) parent[v] = v;
        auto find = [&](std::uint8_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        std::uint32_t merges = 0;
        std::uint64_t rest = subset;
        while (rest) {
            const int e = std::countr_zero(rest);
            rest &= rest - 1;
            const auto [a, b] = endpoints[static_cast<std::size_t>(e)];
            const std::uint8_t ra = find(static_cast<std::uint8_t>(a));
            const std::uint8_t rb = find(static_cast<std::uint8_t>(b));
            if (ra != rb) {
                parent[ra] = rb;
                ++merges;
            }
        }
        if (merges == spec.n - 1)
            ++connected_by_edges[static_cast<std::size_t>(std::popcount(subset))];
    }

    double probability = 0.0;
    for (std::size_t j = 0; j <= spec.m; ++j) {
        if (connected_by_edges[j] == 0) continue;
        probability += static_cast<double>(connected_by_edges[j]) *
                       std::pow(p, static_cast<double>(j)) *
                       std::pow(1.0 - p, static_cast<double>(spec.m - j));
    }
    return probability;
}

struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    static Rational reduced(std::uint64_t num, std::uint64_t den) {
        const std::uint64_t g = std::gcd(num, den);
        return Rational{num / g, den / g};
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Exact joint distribution of (tau_d, tau_c) from enumerating all m! edge
// orders; only d <= 2 keeps the factorial in range.
struct HittingEnumeration {
    std::uint64_t orders = 0;
    std::uint64_t equal_count = 0;
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> joint;

    Rational equality_probability() const {
        return Rational::reduced(equal_count, orders);
    }
};

inline HittingEnumeration exact_hitting_enumeration(int d) {
    if (d < 1 || d > 2)
        throw std::invalid_argument(
            "exact_hitting_enumeration: refused for d > 2 (m! orders infeasible)");
    const CubeSpec spec = make_cube(d);
    std::vector<EdgeId> perm(spec.m);
    std::iota(perm.begin(), perm.end(), EdgeId{0});
    HittingEnumeration result;
    do {
        const ProcessTrace trace = run_process(spec, ProcessOrder{spec, perm});
        ++result.orders;
        if (trace.tau_d == trace.tau_c) ++result.equal_count;
        ++result.joint[{trace.tau_d, trace.tau_c}];
    } while (std::next_permutation(perm.begin(), perm.end()));
    return result;
}

inline Rational exact_hitting_equality_probability(int d) {
    return exact_hitting_enumeration(d).equality_probability();
}

}  // namespace qproc
