#pragma once

#include <cstdint>
#include <random>

namespace fara {

// One RNG stream per role per trial. Streams are decorrelated by hashing
// (base_seed, trial, role) through the SplitMix64 finalizer; the radar and
// jammer streams of a trial never share state, and trial seeds do not depend
// on execution order, so parallel layouts reproduce bit-identical runs.
enum class StreamRole : std::uint64_t { Radar = 0, Jammer = 1 };

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_stream_seed(std::uint64_t base_seed,
                                        std::uint64_t trial,
                                        StreamRole role) {
    std::uint64_t h = splitmix64(base_seed);
    h = splitmix64(h ^ splitmix64(trial * 2 + static_cast<std::uint64_t>(role)));
    return h;
}

inline std::mt19937_64 make_stream(std::uint64_t base_seed,
                                   std::uint64_t trial,
                                   StreamRole role) {
    return std::mt19937_64(derive_stream_seed(base_seed, trial, role));
}

// Uniform double in [0, 1) with exactly 53 random bits. Avoids
// std::uniform_real_distribution, whose output is implementation-defined.
inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace fara
