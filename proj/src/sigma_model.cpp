#include <algorithm>
#include <cmath>
#include <numbers>

#include "twoproj/locality.hpp"

namespace twoproj {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

const char* to_string(SpaceId s) {
    switch (s) {
        case SpaceId::circle: return "circle";
        case SpaceId::interval: return "interval";
        default: return "closed_disk_boundary";
    }
}

const char* to_string(ModelKind k) {
    switch (k) {
        case ModelKind::diagonal_multiplication: return "diagonal-multiplication";
        case ModelKind::truncated_toeplitz: return "truncated-toeplitz";
        default: return "bergman-toeplitz-disk";
    }
}

SigmaModel::SigmaModel(ModelKind kind, SpaceId space, Index grid_points, Index quadrature)
    : kind_(kind), space_(space), quadrature_(quadrature) {
    if (grid_points < 8) throw InvalidInput("sigma model: grid needs at least 8 points");
    if (kind != ModelKind::diagonal_multiplication && space == SpaceId::interval)
        throw InvalidInput("sigma model: Toeplitz models live on circle spaces");
    if (kind == ModelKind::bergman_toeplitz_disk && space != SpaceId::closed_disk_boundary)
        throw InvalidInput("sigma model: the Bergman model lives on the closed disk boundary");
    if (space == SpaceId::interval) {
        spacing_ = 1.0 / static_cast<double>(grid_points - 1);
        for (Index j = 0; j < grid_points; ++j) grid_.push_back(static_cast<double>(j) * spacing_);
    } else {
        spacing_ = two_pi / static_cast<double>(grid_points);
        for (Index j = 0; j < grid_points; ++j) grid_.push_back(static_cast<double>(j) * spacing_);
    }
}

SigmaModel SigmaModel::diagonal_interval(Index g) {
    return SigmaModel(ModelKind::diagonal_multiplication, SpaceId::interval, g);
}
SigmaModel SigmaModel::diagonal_circle(Index g) {
    return SigmaModel(ModelKind::diagonal_multiplication, SpaceId::circle, g);
}
SigmaModel SigmaModel::toeplitz(Index g) {
    return SigmaModel(ModelKind::truncated_toeplitz, SpaceId::circle, g);
}
SigmaModel SigmaModel::bergman_disk(Index g) {
    return SigmaModel(ModelKind::bergman_toeplitz_disk, SpaceId::closed_disk_boundary, g);
}

Embedding SigmaModel::embedding() const {
    return kind_ == ModelKind::diagonal_multiplication ? Embedding::retruncated : Embedding::nested;
}

double SigmaModel::distance(double a, double b) const {
    const double d = std::abs(a - b);
    if (space_ == SpaceId::interval) return d;
    const double m = std::fmod(d, two_pi);
    return std::min(m, two_pi - m);
}

SymbolFn SigmaModel::bump(Index grid_index) const {
    const double centre = grid_.at(static_cast<std::size_t>(grid_index));
    const double radius = 2.0 * spacing_;
    const SigmaModel self = *this;
    return [self, centre, radius](double t) -> Complex {
        return std::max(0.0, 1.0 - self.distance(t, centre) / radius);
    };
}

SymbolFn SigmaModel::coordinate() const {
    if (space_ == SpaceId::interval) return [](double x) -> Complex { return x; };
    return [](double t) -> Complex { return std::polar(1.0, t); };
}

CMatrix SigmaModel::apply(const SymbolFn& phi, Index dim) const {
    if (dim <= 0) throw InvalidInput("sigma model: dimension must be positive");
    if (kind_ == ModelKind::diagonal_multiplication) {
        CMatrix m = CMatrix::Zero(dim, dim);
        for (Index k = 0; k < dim; ++k) {
            const double t = space_ == SpaceId::interval
                                 ? (static_cast<double>(k) + 0.5) / static_cast<double>(dim)
                                 : two_pi * static_cast<double>(k) / static_cast<double>(dim);
            m(k, k) = phi(t);
        }
        return m;
    }

    // Fourier coefficients c_m, |m| < dim, by the trapezoid rule on nq points.
    const Index nq = std::max(quadrature_, 4 * dim);
    std::vector<Complex> roots(static_cast<std::size_t>(nq));
    for (Index j = 0; j < nq; ++j)
        roots[static_cast<std::size_t>(j)] =
            std::polar(1.0, -two_pi * static_cast<double>(j) / static_cast<double>(nq));
    std::vector<Complex> coeff(static_cast<std::size_t>(2 * dim - 1), Complex(0.0));
    for (Index j = 0; j < nq; ++j) {
        const Complex v = phi(two_pi * static_cast<double>(j) / static_cast<double>(nq));
        if (v == Complex(0.0)) continue;
        for (Index m = -(dim - 1); m <= dim - 1; ++m) {
            Index idx = (m * j) % nq;
            if (idx < 0) idx += nq;
            coeff[static_cast<std::size_t>(m + dim - 1)] += v * roots[static_cast<std::size_t>(idx)];
        }
    }
    for (auto& c : coeff) c /= static_cast<double>(nq);

    CMatrix t(dim, dim);
    for (Index a = 0; a < dim; ++a)
        for (Index b = 0; b < dim; ++b) {
            Complex c = coeff[static_cast<std::size_t>(a - b + dim - 1)];
            if (kind_ == ModelKind::bergman_toeplitz_disk)
                c *= std::sqrt(static_cast<double>(std::min(a, b) + 1) /
                               static_cast<double>(std::max(a, b) + 1));
            t(a, b) = c;
        }
    return t;
}

TruncFamily SigmaModel::family(const SymbolFn& phi, std::vector<Index> dims, std::string name) const {
    const SigmaModel self = *this;
    return TruncFamily(std::move(name), std::move(dims),
                       [self, phi](Index n) { return self.apply(phi, n); }, embedding());
}

}  // namespace twoproj
