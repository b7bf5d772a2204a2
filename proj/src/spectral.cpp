#include "twoproj/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace twoproj {

namespace {

void require_square(const CMatrix& a, const char* op) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        std::ostringstream os;
        os << op << ": expected a non-empty square matrix, got " << a.rows() << "x" << a.cols();
        throw InvalidInput(os.str());
    }
}

double spectral_radius(const RVector& values) {
    return values.size() == 0 ? 0.0 : values.cwiseAbs().maxCoeff();
}

}  // namespace

EigenSystem hermitian_eig(const CMatrix& a, const Tolerances& tol) {
    require_square(a, "hermitian_eig");
    if (!a.allFinite()) throw InvalidInput("hermitian_eig: matrix has non-finite entries");
    const double scale = max_abs(a);
    const double asym = max_abs(a - a.adjoint());
    if (asym > tol.hermitian * std::max(scale, 1e-300)) {
        std::ostringstream os;
        os << "hermitian_eig: matrix is not Hermitian (||A-A*||_max = " << asym << ")";
        throw InvalidInput(os.str());
    }
    // Symmetrize so that the solver sees an exactly Hermitian input.
    const CMatrix h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
    if (solver.info() != Eigen::Success) {
        const double resid =
            max_abs(h * solver.eigenvectors() -
                    solver.eigenvectors() * solver.eigenvalues().cast<Complex>().asDiagonal());
        throw NumericalError("hermitian_eig: eigensolver did not converge", resid);
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

CMatrix spectral_projection(const EigenSystem& eig, double lo, double hi, double norm,
                            const Tolerances& tol) {
    if (!(lo < hi)) throw InvalidInput("spectral_projection: empty window (lo >= hi)");
    const double margin = tol.spectral_cut * std::max(norm, 1.0);
    const Index n = eig.vectors.rows();
    std::vector<Index> keep;
    for (Index i = 0; i < eig.values.size(); ++i) {
        const double v = eig.values(i);
        const double edge = std::min(std::abs(v - lo), std::abs(v - hi));
        if (edge <= margin) {
            std::ostringstream os;
            os << "spectral cut ambiguous: eigenvalue " << v << " within " << margin
               << " of window [" << lo << ", " << hi << "]";
            throw SpectralCutAmbiguous(os.str(), edge);
        }
        if (v >= lo && v <= hi) keep.push_back(i);
    }
    CMatrix basis(n, static_cast<Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) basis.col(static_cast<Index>(k)) = eig.vectors.col(keep[k]);
    return basis * basis.adjoint();
}

CMatrix spectral_projection(const CMatrix& a, double lo, double hi, const Tolerances& tol) {
    const EigenSystem eig = hermitian_eig(a, tol);
    return spectral_projection(eig, lo, hi, spectral_radius(eig.values), tol);
}

CMatrix sqrt_psd(const CMatrix& a, const Tolerances& tol) {
    const EigenSystem eig = hermitian_eig(a, tol);
    const double norm = spectral_radius(eig.values);
    const double floor = -tol.psd * std::max(norm, 1e-300);
    if (eig.values.size() > 0 && eig.values(0) < floor) {
        std::ostringstream os;
        os << "sqrt_psd: matrix is not PSD (eigenvalue " << eig.values(0) << ")";
        throw NumericalError(os.str(), eig.values(0));
    }
    return functional_calculus(eig, [](double v) { return std::sqrt(std::max(v, 0.0)); });
}

ProjectionCheck validate_projection(const CMatrix& a, double tol) {
    ProjectionCheck out;
    if (a.rows() != a.cols() || a.rows() == 0) return out;
    out.hermitian_residual = max_abs(a - a.adjoint());
    out.idempotent_residual = max_abs(a * a - a);
    if (a.allFinite()) {
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
        double worst = -1.0;
        for (Index i = 0; i < solver.eigenvalues().size(); ++i) {
            const double v = solver.eigenvalues()(i);
            const double d = std::min(std::abs(v), std::abs(v - 1.0));
            if (d > worst) {
                worst = d;
                out.worst_eigenvalue = v;
            }
        }
        out.ok = out.hermitian_residual <= tol && out.idempotent_residual <= tol;
    }
    return out;
}

CMatrix basis_projection(const CMatrix& basis) {
    if (basis.cols() == 0) return CMatrix::Zero(basis.rows(), basis.rows());
    Eigen::ColPivHouseholderQR<CMatrix> qr(basis);
    const Index r = qr.rank();
    const CMatrix q = qr.householderQ() * CMatrix::Identity(basis.rows(), r);
    return q * q.adjoint();
}

namespace {

CMatrix split_basis(const CMatrix& projection, bool want_range) {
    const EigenSystem eig = hermitian_eig(projection);
    std::vector<Index> keep;
    for (Index i = 0; i < eig.values.size(); ++i)
        if ((eig.values(i) > 0.5) == want_range) keep.push_back(i);
    CMatrix basis(projection.rows(), static_cast<Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) basis.col(static_cast<Index>(k)) = eig.vectors.col(keep[k]);
    return basis;
}

}  // namespace

CMatrix range_basis(const CMatrix& projection) { return split_basis(projection, true); }

CMatrix kernel_basis(const CMatrix& projection) { return split_basis(projection, false); }

Index projection_rank(const CMatrix& projection) {
    return static_cast<Index>(std::llround(projection.trace().real()));
}

RVector singular_values(const CMatrix& a) {
    if (a.size() == 0) return RVector();
    Eigen::BDCSVD<CMatrix> svd(a);
    return svd.singularValues();
}

double operator_norm(const CMatrix& a) {
    const RVector sv = singular_values(a);
    return sv.size() == 0 ? 0.0 : sv(0);
}

double schatten_norm(const RVector& singular, double p) {
    if (!(p >= 1.0)) throw InvalidInput("schatten_norm: p must be >= 1");
    const double top = singular.size() == 0 ? 0.0 : singular.maxCoeff();
    if (top == 0.0) return 0.0;
    double acc = 0.0;
    for (Index i = 0; i < singular.size(); ++i) acc += std::pow(singular(i) / top, p);
    return top * std::pow(acc, 1.0 / p);
}

}  // namespace twoproj
