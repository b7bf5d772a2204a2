#pragma once

#include "twoproj/core.hpp"

namespace twoproj {

/// Eigenpairs of a Hermitian matrix: ascending values, orthonormal columns.
struct EigenSystem {
    RVector values;
    CMatrix vectors;
};

/// Eigendecomposition of a Hermitian matrix.
///
/// Throws InvalidInput for non-square or non-Hermitian input (relative
/// asymmetry above `tol.hermitian`) and NumericalError when the solver does
/// not converge. Equal eigenvalues keep the solver's order, which is
/// deterministic for a given input.
EigenSystem hermitian_eig(const CMatrix& a, const Tolerances& tol = default_tolerances());

/// Spectral projection 1_[lo,hi](A).
///
/// Throws SpectralCutAmbiguous when an eigenvalue lies within
/// tol.spectral_cut * ||A|| of either endpoint; the caller must move the cut.
CMatrix spectral_projection(const CMatrix& a, double lo, double hi,
                            const Tolerances& tol = default_tolerances());

/// Same as above on an already computed eigensystem (`norm` scales the cut test).
CMatrix spectral_projection(const EigenSystem& eig, double lo, double hi, double norm,
                            const Tolerances& tol = default_tolerances());

/// Hermitian PSD square root; eigenvalues down to -tol.psd*||A|| are clamped to 0.
CMatrix sqrt_psd(const CMatrix& a, const Tolerances& tol = default_tolerances());

/// Apply a real- or complex-valued function to the spectrum of a Hermitian matrix.
template <typename F>
CMatrix functional_calculus(const EigenSystem& eig, F&& f) {
    CVector fv(eig.values.size());
    for (Index i = 0; i < fv.size(); ++i) fv(i) = Complex(f(eig.values(i)));
    return eig.vectors * fv.asDiagonal() * eig.vectors.adjoint();
}

struct ProjectionCheck {
    bool ok = false;
    double hermitian_residual = 0.0;   ///< ||A - A*||_max
    double idempotent_residual = 0.0;  ///< ||A^2 - A||_max
    double worst_eigenvalue = 0.0;     ///< eigenvalue of (A+A*)/2 farthest from {0,1}
};

ProjectionCheck validate_projection(const CMatrix& a, double tol);

/// Orthogonal projection onto the column span of `basis` (columns need not be orthonormal).
CMatrix basis_projection(const CMatrix& basis);

/// Orthonormal basis for the range of a projection (eigenvalues above 1/2).
CMatrix range_basis(const CMatrix& projection);

/// Orthonormal basis for the kernel of a projection (eigenvalues below 1/2).
CMatrix kernel_basis(const CMatrix& projection);

/// Rank of a projection, read from its trace.
Index projection_rank(const CMatrix& projection);

/// Spectral norm (largest singular value).
double operator_norm(const CMatrix& a);

/// Singular values in descending order.
RVector singular_values(const CMatrix& a);

/// Schatten p-norm (p >= 1) from descending singular values.
double schatten_norm(const RVector& singular, double p);

}  // namespace twoproj
