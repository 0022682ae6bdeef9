#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace qproc {

// Fixed-length bit array packed into 64-bit words. Used for edge sets
// (one bit per EdgeId) and visited marks; sized at construction.
class BitVec {
public:
    BitVec() = default;

    explicit BitVec(std::uint64_t nbits)
        : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

    std::uint64_t size() const noexcept { return nbits_; }

    bool test(std::uint64_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    void set(std::uint64_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }

    void reset(std::uint64_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    void set(std::uint64_t i, bool value) {
        if (value) set(i); else reset(i);
    }

    void clear() { words_.assign(words_.size(), 0); }

    // Number of set bits.
    std::uint64_t count() const noexcept {
        std::uint64_t c = 0;
        for (std::uint64_t w : words_) c += std::popcount(w);
        return c;
    }

    bool none() const noexcept {
        for (std::uint64_t w : words_)
            if (w != 0) return false;
        return true;
    }

    // Bitwise OR with another vector of the same length.
    void or_with(const BitVec& other) {
        if (other.nbits_ != nbits_)
            throw std::invalid_argument("BitVec::or_with: length mismatch");
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    }

    friend bool operator==(const BitVec& a, const BitVec& b) = default;

    const std::vector<std::uint64_t>& words() const noexcept { return words_; }

private:
    std::uint64_t nbits_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace qproc
