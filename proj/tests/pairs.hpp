#pragma once

// Seeded pair fixtures shared by the unit and acceptance tests.

#include "twoproj/halmos.hpp"
#include "twoproj/random.hpp"

namespace fixtures {

using namespace twoproj;

/// Pair number `k` of the seeded zoo: even k are independent random
/// projections, odd k plant all six blocks and hide them under a random unitary.
inline ProjectionPair random_pair(std::uint64_t seed, std::uint64_t k, Index dim) {
    CounterRng rng(seed, k);
    if (k % 2 == 0) {
        const Index rp = rng.uniform_int(0, dim);
        const Index rq = rng.uniform_int(0, dim);
        return {random_projection(dim, rp, rng), random_projection(dim, rq, rng)};
    }
    const PlantedBlocks blocks = random_blocks(dim, rng);
    CMatrix p, q;
    model_pair(blocks, p, q);
    const CMatrix w = random_unitary(dim, rng);
    CMatrix wp = w * p * w.adjoint(), wq = w * q * w.adjoint();
    return {0.5 * (wp + wp.adjoint()), 0.5 * (wq + wq.adjoint())};
}

/// Dimension of pair k in the 200-pair suite: cycles through 2..50.
inline Index suite_dim(std::uint64_t k) { return 2 + static_cast<Index>(k % 49); }

/// A pair with d0 = d1 = d2 = d3 = 0 and dg = dim / 2 generic angles.
inline ProjectionPair generic_pair(std::uint64_t seed, std::uint64_t k, Index dg) {
    CounterRng rng(seed, k);
    PlantedBlocks blocks;
    for (Index i = 0; i < dg; ++i) blocks.s.push_back(rng.uniform(0.05, 0.95));
    CMatrix p, q;
    model_pair(blocks, p, q);
    const CMatrix w = random_unitary(2 * dg, rng);
    CMatrix wp = w * p * w.adjoint(), wq = w * q * w.adjoint();
    return {0.5 * (wp + wp.adjoint()), 0.5 * (wq + wq.adjoint())};
}

}  // namespace fixtures
