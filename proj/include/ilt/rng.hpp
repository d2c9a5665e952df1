#pragma once

#include <cstdint>
#include <random>

namespace ilt {

// Deterministic per-replica random stream: the pair (seed, stream) fully
// determines the sequence, independent of the degree of parallelism.
class StreamRng {
public:
    StreamRng(std::uint64_t seed, std::uint64_t stream) {
        std::seed_seq seq{
            std::uint32_t(seed), std::uint32_t(seed >> 32),
            std::uint32_t(stream), std::uint32_t(stream >> 32),
            std::uint32_t(0x9e3779b9)};
        gen_.seed(seq);
    }

    std::uint64_t next() { return gen_(); }

    // Uniform in [0, n) by masked rejection; exact and portable.
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        std::uint64_t mask = ~std::uint64_t(0) >> __builtin_clzll(n - 1);
        for (;;) {
            std::uint64_t v = gen_() & mask;
            if (v < n) return v;
        }
    }

    double unit() { return (gen_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 gen_;
};

} // namespace ilt
