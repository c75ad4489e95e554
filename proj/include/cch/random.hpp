#pragma once

#include <cstdint>
#include <random>

namespace cch {

// Seedable deterministic generator; identical seeds give identical streams.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

// Independent stream per worker, derived from (base seed, worker id).
inline Rng make_worker_rng(std::uint64_t base_seed, std::uint64_t worker_id) {
    std::seed_seq sequence{base_seed, worker_id};
    return Rng(sequence);
}

// Uniform draw from {0, ..., bound_exclusive - 1}.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t bound_exclusive) {
    return std::uniform_int_distribution<std::uint64_t>(0, bound_exclusive - 1)(rng);
}

inline double uniform_unit(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace cch
