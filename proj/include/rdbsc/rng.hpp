#pragma once

#include <cstdint>
#include <random>

namespace rdbsc {

// splitmix64 step; used to derive independent stream seeds from (seed, index)
// so results do not depend on thread count or evaluation order.
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline uint64_t mix_seed(uint64_t seed, uint64_t stream) {
    return mix64(seed ^ mix64(stream + 0x243f6a8885a308d3ull));
}

inline std::mt19937_64 make_rng(uint64_t seed, uint64_t stream = 0) {
    return std::mt19937_64(mix_seed(seed, stream));
}

}  // namespace rdbsc
