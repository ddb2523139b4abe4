#pragma once

#include <cstdint>

namespace qlin {

// splitmix64. Fixed algorithm so seeded streams are identical on every
// platform and standard library (std distributions are not portable).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [lo, hi]; modulo bias is irrelevant at test-data scale.
    long long next_int(long long lo, long long hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long long>(next_u64() % span);
    }

    bool next_bool() { return (next_u64() & 1ULL) != 0; }

private:
    std::uint64_t state_;
};

}
