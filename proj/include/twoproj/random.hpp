#pragma once

#include <cstdint>

#include "twoproj/core.hpp"

namespace twoproj {

/// Counter-based SplitMix64 stream.
///
/// Output k of stream (seed, stream_id) is mix(base + (k+1)*0x9E3779B97F4A7C15)
/// with base = seed ^ (stream_id * 0xD1B54A32D192ED03) and mix the SplitMix64
/// finalizer. Uniforms take the top 53 bits; normals use Box-Muller on two
/// consecutive uniforms. The definition is small enough to reproduce in any
/// language, which keeps randomized fixtures identical across bindings.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream_id = 0)
        : base_(seed ^ (stream_id * 0xD1B54A32D192ED03ULL)) {}

    std::uint64_t next_u64();
    double uniform();                          ///< [0, 1)
    double uniform(double lo, double hi);      ///< [lo, hi)
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);  ///< inclusive bounds
    double normal();
    Complex complex_normal();                  ///< (N(0,1) + i N(0,1)) / sqrt(2)
    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

/// Haar-like random unitary: QR of a complex Gaussian matrix with R's diagonal phases removed.
CMatrix random_unitary(Index dim, CounterRng& rng);

/// Projection onto a random `rank`-dimensional subspace.
CMatrix random_projection(Index dim, Index rank, CounterRng& rng);

struct PlantedBlocks {
    Index d0 = 0, d1 = 0, d2 = 0, d3 = 0;
    std::vector<double> s;  ///< generic spectrum, each in (0,1)
    Index dim() const { return d0 + d1 + d2 + d3 + 2 * static_cast<Index>(s.size()); }
};

/// Canonical block-model pair (P, Q) for the given blocks, before any rotation.
void model_pair(const PlantedBlocks& blocks, CMatrix& p, CMatrix& q);

/// Random block structure with total dimension `dim`; generic values in [s_lo, s_hi].
PlantedBlocks random_blocks(Index dim, CounterRng& rng, double s_lo = 0.02, double s_hi = 0.98);

}  // namespace twoproj
