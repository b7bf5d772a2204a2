#include "twoproj/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "twoproj/spectral.hpp"

namespace twoproj {

CMatrix meet(const HalmosForm& form) {
    const CMatrix b = form.U.middleCols(form.off_h1(), form.d1);
    return b * b.adjoint();
}

CMatrix meet(const ProjectionPair& pair, double tol_cluster) {
    return meet(decompose(pair, tol_cluster));
}

namespace {

/// 1_[eps, +inf) on an eigensystem whose spectrum lies in [0, top].
CMatrix above_zero_cluster(const EigenSystem& eig, double zero_tol, std::optional<double> epsilon,
                           double top) {
    double eps = 0.0;
    if (epsilon) {
        eps = *epsilon;
    } else {
        double smallest = std::numeric_limits<double>::infinity();
        for (Index i = 0; i < eig.values.size(); ++i)
            if (eig.values(i) > zero_tol) smallest = std::min(smallest, eig.values(i));
        if (!std::isfinite(smallest)) return CMatrix::Zero(eig.vectors.rows(), eig.vectors.rows());
        eps = 0.5 * smallest;
    }
    // The upper edge sits well above the spectrum so only the lower cut can be ambiguous.
    return spectral_projection(eig, eps, top + 0.5, top);
}

}  // namespace

CMatrix join(const ProjectionPair& pair, std::optional<double> zero_tol, double tol_cluster) {
    const EigenSystem eig = hermitian_eig(pair.P + pair.Q);
    return above_zero_cluster(eig, zero_tol.value_or(0.5 * tol_cluster), std::nullopt, 2.0);
}

CMatrix span_projection_algebraic(const ProjectionPair& pair, std::optional<double> epsilon,
                                  double tol_cluster) {
    const Index n = pair.dim();
    const CMatrix comp = CMatrix::Identity(n, n) - pair.P;
    const EigenSystem eig = hermitian_eig(pair.P + comp * pair.Q * comp);
    return above_zero_cluster(eig, tol_cluster, epsilon, 1.0);
}

double gap_to_one(const ProjectionPair& pair, double tol_cluster) {
    const CMatrix pqp = pair.P * pair.Q * pair.P;
    const EigenSystem eig = hermitian_eig(0.5 * (pqp + pqp.adjoint()));
    bool any = false;
    double top = 0.0;
    for (Index i = 0; i < eig.values.size(); ++i) {
        const double v = eig.values(i);
        if (v <= 1.0 - tol_cluster) {
            top = any ? std::max(top, v) : v;
            any = true;
        }
    }
    return any ? 1.0 - top : 1.0;
}

SpanCertificate span_certificate(const ProjectionPair& pair, const HalmosForm& form) {
    SpanCertificate cert;
    cert.rank_R = form.d0 + form.d1 + 2 * form.dg + form.d2;
    cert.window_hi = 1.0 - form.tol_used;
    cert.gap_to_one = gap_to_one(pair, form.tol_used);
    cert.epsilon = std::max(1.0 - cert.gap_to_one, 0.0);
    cert.closed = true;
    return cert;
}

SpanCertificate span_certificate(const ProjectionPair& pair, double tol_cluster) {
    return span_certificate(pair, decompose(pair, tol_cluster));
}

ProjectionPair reduce_by_common_subspace(const ProjectionPair& pair, const CMatrix& r_sharp,
                                         double tol) {
    if (r_sharp.rows() != pair.dim() || r_sharp.cols() != pair.dim())
        throw InvalidInput("reduce_by_common_subspace: R# has the wrong shape");
    const double rp = max_abs(pair.P * r_sharp - r_sharp);
    const double rq = max_abs(pair.Q * r_sharp - r_sharp);
    const double resid = std::max(rp, rq);
    if (resid > tol) {
        std::ostringstream os;
        os << "reduce_by_common_subspace: ran R# is not contained in ran P ∩ ran Q (||PR#-R#|| = "
           << rp << ", ||QR#-R#|| = " << rq << ")";
        throw InvalidInput(os.str());
    }
    const CMatrix c = kernel_basis(r_sharp);
    const CMatrix p = c.adjoint() * (pair.P - r_sharp) * c;
    const CMatrix q = c.adjoint() * (pair.Q - r_sharp) * c;
    return {0.5 * (p + p.adjoint()), 0.5 * (q + q.adjoint())};
}

}  // namespace twoproj
