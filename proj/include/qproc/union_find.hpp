#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace qproc {

// Disjoint-set forest with union by size and path compression, plus a live
// component counter. This is the incremental-connectivity core of the
// process engine.
class DisjointSet {
public:
    explicit DisjointSet(std::uint32_t n)
        : parent_(n), size_(n, 1), components_(n) {
        std::iota(parent_.begin(), parent_.end(), 0u);
    }

    std::uint32_t find(std::uint32_t x) {
        std::uint32_t root = x;
        while (parent_[root] != root) root = parent_[root];
        while (parent_[x] != root) {
            const std::uint32_t next = parent_[x];
            parent_[x] = root;
            x = next;
        }
        return root;
    }

    // Returns true when the union merged two distinct components.
    bool unite(std::uint32_t a, std::uint32_t b) {
        std::uint32_t ra = find(a);
        std::uint32_t rb = find(b);
        if (ra == rb) return false;
        if (size_[ra] < size_[rb]) std::swap(ra, rb);
        parent_[rb] = ra;
        size_[ra] += size_[rb];
        --components_;
        return true;
    }

    std::uint32_t component_count() const noexcept { return components_; }

    std::uint32_t component_size(std::uint32_t x) { return size_[find(x)]; }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> size_;
    std::uint32_t components_;
};

}  // namespace qproc
