#include "twoproj/random.hpp"

#include <cmath>
#include <numbers>

namespace twoproj {

std::uint64_t CounterRng::next_u64() {
    ++counter_;
    std::uint64_t z = base_ + counter_ * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double CounterRng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::int64_t CounterRng::uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next_u64() % span);
}

double CounterRng::normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex CounterRng::complex_normal() {
    const double re = normal();
    const double im = normal();
    return Complex(re, im) / std::numbers::sqrt2;
}

CMatrix random_unitary(Index dim, CounterRng& rng) {
    CMatrix g(dim, dim);
    for (Index j = 0; j < dim; ++j)
        for (Index i = 0; i < dim; ++i) g(i, j) = rng.complex_normal();
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
    const CMatrix& r = qr.matrixQR();
    for (Index j = 0; j < dim; ++j) {
        const double m = std::abs(r(j, j));
        if (m > 0) q.col(j) *= r(j, j) / m;
    }
    return q;
}

CMatrix random_projection(Index dim, Index rank, CounterRng& rng) {
    const CMatrix u = random_unitary(dim, rng);
    const CMatrix b = u.leftCols(rank);
    return b * b.adjoint();
}

void model_pair(const PlantedBlocks& blocks, CMatrix& p, CMatrix& q) {
    const Index n = blocks.dim();
    const Index dg = static_cast<Index>(blocks.s.size());
    p = CMatrix::Zero(n, n);
    q = CMatrix::Zero(n, n);
    Index at = 0;
    for (Index i = 0; i < blocks.d0; ++i, ++at) p(at, at) = 1.0;
    for (Index i = 0; i < blocks.d1; ++i, ++at) p(at, at) = q(at, at) = 1.0;
    const Index gp = at;
    const Index gq = at + dg;
    for (Index i = 0; i < dg; ++i) {
        const double s = blocks.s[static_cast<std::size_t>(i)];
        const double x = std::sqrt(s * (1.0 - s));
        p(gp + i, gp + i) = 1.0;
        q(gp + i, gp + i) = s;
        q(gp + i, gq + i) = x;
        q(gq + i, gp + i) = x;
        q(gq + i, gq + i) = 1.0 - s;
    }
    at += 2 * dg;
    for (Index i = 0; i < blocks.d2; ++i, ++at) q(at, at) = 1.0;
}

PlantedBlocks random_blocks(Index dim, CounterRng& rng, double s_lo, double s_hi) {
    PlantedBlocks b;
    Index left = dim;
    const Index dg = static_cast<Index>(rng.uniform_int(0, dim / 2));
    left -= 2 * dg;
    for (Index i = 0; i < dg; ++i) b.s.push_back(rng.uniform(s_lo, s_hi));
    Index* slots[4] = {&b.d0, &b.d1, &b.d2, &b.d3};
    for (Index k = 0; k < 3; ++k) {
        const Index take = static_cast<Index>(rng.uniform_int(0, left));
        *slots[k] = take;
        left -= take;
    }
    b.d3 = left;
    return b;
}

}  // namespace twoproj
