#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace qproc {

// One SplitMix64 step. The exact constants are normative: seeded experiments
// must replay bit-identically on every platform.
inline std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// FNV-1a over raw bytes, 64-bit variant.
inline std::uint64_t fnv1a64(const void* data, std::size_t len,
                             std::uint64_t h = 0xCBF29CE484222325ull) noexcept {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x00000100000001B3ull;
    }
    return h;
}

inline std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    return fnv1a64(bytes.data(), bytes.size());
}

// Deterministic, seedable random stream: xoshiro256** seeded through
// SplitMix64 from (master_seed, label, trial index). The state is a pure
// function of those three values, so trial i can be replayed in isolation
// and distributed across any number of workers.
class RngStream {
public:
    RngStream() = default;

    static RngStream derive(std::uint64_t master_seed, std::string_view label,
                            std::uint64_t index) {
        RngStream rs;
        rs.master_seed_ = master_seed;
        rs.label_.assign(label);
        rs.index_ = index;
        std::uint64_t seed = master_seed ^ fnv1a64(label) ^ (index * kIndexStride);
        for (auto& word : rs.s_) word = splitmix64_next(seed);
        return rs;
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform double in [0, 1): top 53 bits over 2^53.
    double next_double() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // One draw per call; returns true with probability p.
    bool next_bernoulli(double p) noexcept { return next_double() < p; }

    // Unbiased integer in [0, bound) by rejection: draw a 64-bit word,
    // discard the low partial span of size 2^64 mod bound, reduce modulo.
    std::uint64_t next_bounded(std::uint64_t bound) noexcept {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t x = next_u64();
            if (x >= threshold) return x % bound;
        }
    }

    std::uint64_t master_seed() const noexcept { return master_seed_; }
    const std::string& label() const noexcept { return label_; }
    std::uint64_t index() const noexcept { return index_; }

    const std::uint64_t* state() const noexcept { return s_; }

private:
    static constexpr std::uint64_t kIndexStride = 0xDA942042E4DD58B5ull;

    static std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4] = {0, 0, 0, 0};
    std::uint64_t master_seed_ = 0;
    std::string label_;
    std::uint64_t index_ = 0;
};

inline RngStream derive_stream(std::uint64_t master_seed, std::string_view label,
                               std::uint64_t index) {
    return RngStream::derive(master_seed, label, index);
}

}  // namespace qproc
