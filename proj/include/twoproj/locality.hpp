#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twoproj/trunclab.hpp"

namespace twoproj {

enum class SpaceId { circle, interval, closed_disk_boundary };
enum class ModelKind { diagonal_multiplication, truncated_toeplitz, bergman_toeplitz_disk };

const char* to_string(SpaceId s);
const char* to_string(ModelKind k);

/// Continuous function on M. The argument is x in [0, 1] on the interval and
/// the angle theta in [0, 2 pi) on the circle and the disk boundary.
using SymbolFn = std::function<Complex(double)>;

/// Finite-section model of a *-homomorphism sigma: C(M) -> L(H).
///
///  - diagonal-multiplication: sigma(phi)_n = diag(phi(x_k)) on n equally spaced
///    points (midpoints on the interval, 2 pi k / n on the circle); exactly
///    multiplicative, re-gridded at each n.
///  - truncated-toeplitz: Hardy-space Toeplitz matrices [c_{a-b}(phi)], nested.
///  - bergman-toeplitz-disk: Bergman-space Toeplitz matrices of the harmonic
///    extension of phi in the basis e_a = sqrt(a+1) z^a, entries
///    c_{a-b} sqrt((min(a,b)+1)/(max(a,b)+1)); phi = z gives the weighted shift.
///
/// Fourier coefficients come from a `quadrature`-point trapezoid rule
/// (at least 4n points).
class SigmaModel {
public:
    SigmaModel(ModelKind kind, SpaceId space, Index grid_points = 64, Index quadrature = 8192);

    static SigmaModel diagonal_interval(Index grid_points = 64);
    static SigmaModel diagonal_circle(Index grid_points = 64);
    static SigmaModel toeplitz(Index grid_points = 64);
    static SigmaModel bergman_disk(Index grid_points = 64);

    ModelKind kind() const { return kind_; }
    SpaceId space() const { return space_; }
    Embedding embedding() const;

    /// Sample grid of M used by the bump dictionary.
    const std::vector<double>& grid() const { return grid_; }
    double grid_spacing() const { return spacing_; }

    /// Distance on M (angular distance on circle spaces).
    double distance(double a, double b) const;

    /// Piecewise-linear hat of height 1 centred at grid point i, total width 4 cells.
    SymbolFn bump(Index grid_index) const;

    /// The coordinate function: x on the interval, e^{i theta} on circle spaces.
    SymbolFn coordinate() const;

    CMatrix apply(const SymbolFn& phi, Index dim) const;

    /// sigma(phi) as a family over `dims`.
    TruncFamily family(const SymbolFn& phi, std::vector<Index> dims, std::string name = "sigma") const;

private:
    ModelKind kind_;
    SpaceId space_;
    std::vector<double> grid_;
    double spacing_ = 0.0;
    Index quadrature_;
};

struct LocalSupportOptions {
    double tol = 1e-3;     ///< witness threshold on ||P sigma(bump) P||
    bool strict = false;   ///< escalate the essential-normality warning to an error
    Index normality_probes = 8;
    /// The normality defect of [sigma(bump), P_n] is its singular value at this
    /// index, so a fixed finite-rank part of the commutator does not count.
    Index normality_rank = 8;
    double normality_tol = 1e-2;
};

/// Estimated local support M_P on the model's grid.
struct LocalSupport {
    std::vector<bool> flagged;
    std::vector<double> witness;       ///< at the largest dim
    std::vector<double> witness_prev;  ///< at the second largest dim
    std::vector<std::string> warnings;
    Index count() const;
    /// Flagged measure: count * grid spacing.
    double measure(const SigmaModel& sigma) const;
};

/// Grid point x is flagged iff ||P_n sigma(phi_x)_n P_n|| >= tol at the two largest dims.
LocalSupport local_support(const TruncFamily& p_family, const SigmaModel& sigma,
                           const LocalSupportOptions& opts = {});

struct DisjointSupportReport {
    LocalSupport support_p;
    LocalSupport support_q;
    bool disjoint = false;
    std::string status;  ///< "confirmed", "violated" or "hypothesis not met"
    std::optional<CompactnessProfile> pq_profile;
    double pq_norm = 0.0;  ///< ||P_n Q_n|| at the largest dim
    Index pq_rank = 0;     ///< numerical rank of P_n Q_n at the largest dim
};

/// Disjoint supports should force P_n Q_n to be compact-like.
DisjointSupportReport disjoint_support_check(const TruncFamily& p_family, const TruncFamily& q_family,
                                             const SigmaModel& sigma,
                                             const LocalSupportOptions& opts = {});

// ---------------------------------------------------------------------------
// Bergman-disk polynomial ideals.

/// Polynomial in one complex variable, ascending coefficients.
using Polynomial = std::vector<Complex>;

Index degree(const Polynomial& p);  ///< -1 for the zero polynomial
Polynomial multiply(const Polynomial& a, const Polynomial& b);

/// Parse "c0,c1,..." with complex literals ("-1,1" is z - 1, "0,1i" is iz).
Polynomial parse_polynomial(std::string_view text);

/// Bergman shift T_z on polynomials of degree <= d, basis e_a = sqrt(a+1) z^a.
CMatrix bergman_shift(Index d);

/// Projection onto span{p, zp, ..., z^{d-deg p} p} in the orthonormal basis e_a.
/// Throws InvalidInput for the zero polynomial or deg p > d.
CMatrix ideal_projection(const Polynomial& p, Index d);

/// d -> ideal_projection(p, d) (or its complement when `quotient`), dims d + 1.
TruncFamily ideal_family(const Polynomial& p, const std::vector<Index>& degrees, bool quotient);

struct IdealProfileRow {
    Index d = 0;
    double tz_norm = 0.0;               ///< ||[T_z, Q_P]||
    std::vector<double> tz_schatten;
    std::optional<double> pq_norm;      ///< ||[Q_P, Q_Q]|| when a second ideal is given
    std::vector<double> pq_schatten;
};

/// With q: ideals P = [p r], Q = [q r] (r defaults to 1). Throws InvalidInput
/// when a degree exceeds min(d_list).
std::vector<IdealProfileRow> ideal_commutator_profile(const Polynomial& p,
                                                      const std::optional<Polynomial>& q,
                                                      const std::optional<Polynomial>& r,
                                                      const std::vector<Index>& d_list,
                                                      const std::vector<double>& p_list = {1.0, 2.0});

// ---------------------------------------------------------------------------
// Winding numbers.

struct WindingResult {
    long winding = 0;
    double raw = 0.0;       ///< unrounded sum of phase increments / 2 pi
    double max_step = 0.0;  ///< largest |phase increment|
};

/// Winding number of a closed sampled curve (the last sample connects to the first).
/// Throws NumericalError when |phi| < 1e-6 at a sample, when a phase step is
/// too large to unwrap (|step| > pi/2), or when the rounding residual exceeds 0.1.
WindingResult winding_number(std::span<const Complex> samples);
long winding_index(std::span<const Complex> samples);

/// Arithmetic expression in z: numbers, i, z, + - * / ^int, parentheses,
/// implicit multiplication ("(z-0.5)(z-2)", "2z^3").
class SymbolExpr {
public:
    static SymbolExpr parse(std::string_view text);
    Complex operator()(Complex z) const;
    /// phi(e^{2 pi i k / n}), k = 0..n-1.
    std::vector<Complex> sample_circle(Index n) const;

    struct Node;

private:
    std::shared_ptr<const Node> root_;
};

// ---------------------------------------------------------------------------
// K1 invariant.

/// Compressed symbol psi_P(x) = tr(P sigma(b_x) P sigma(phi)) / tr(P sigma(b_x))
/// at dimension `dim`; entries where tr(P sigma(b_x)) vanishes are 0.
std::vector<Complex> compressed_symbol(const CMatrix& p, const SigmaModel& sigma, const SymbolFn& phi,
                                       Index dim);

struct K1Report {
    bool hypothesis_ok = false;   ///< ran P ∩ ker Q = ker P ∩ ran Q = {0} at the largest dim
    Index d0 = 0, d2 = 0;
    LocalSupport support_p;
    LocalSupport support_q;
    bool supports_equal = false;
    long index_p = 0;
    long index_q = 0;
    bool indices_equal = false;
};

/// Winding index of the compressed symbol: the winding of psi over the grid
/// when the support is the whole circle, 0 otherwise (proper closed subsets
/// of the circle carry no K1 class).
long k1_index(const TruncFamily& p_family, const LocalSupport& support, const SigmaModel& sigma,
              const SymbolFn& phi);

/// Compare P with Q = U P U*, U = exp(iK) acting on the leading block of size K.rows().
K1Report k1_invariance_check(const TruncFamily& p_family, const CMatrix& k, const SigmaModel& sigma,
                             const SymbolFn& phi, const LocalSupportOptions& opts = {});

}  // namespace twoproj
