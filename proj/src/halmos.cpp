#include "twoproj/halmos.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "twoproj/matrix_io.hpp"
#include "twoproj/spectral.hpp"

namespace twoproj {

ProjectionPair projection_pair(CMatrix p, CMatrix q, double tol) {
    if (p.rows() != q.rows() || p.cols() != q.cols())
        throw InvalidInput("projection pair: P and Q have different shapes");
    const auto cp = validate_projection(p, tol);
    const auto cq = validate_projection(q, tol);
    if (!cp.ok || !cq.ok) {
        std::ostringstream os;
        os << "projection pair: not a projection (P: herm " << cp.hermitian_residual << ", idem "
           << cp.idempotent_residual << "; Q: herm " << cq.hermitian_residual << ", idem "
           << cq.idempotent_residual << ")";
        throw InvalidInput(os.str());
    }
    return {std::move(p), std::move(q)};
}

namespace {

EigenSystem compress_eig(const CMatrix& basis, const CMatrix& op) {
    if (basis.cols() == 0) return {RVector(), CMatrix(basis.rows(), 0)};
    const CMatrix c = basis.adjoint() * op * basis;
    EigenSystem eig = hermitian_eig(0.5 * (c + c.adjoint()));
    eig.vectors = basis * eig.vectors;
    return eig;
}

CMatrix gather(const CMatrix& vectors, const std::vector<Index>& cols) {
    CMatrix out(vectors.rows(), static_cast<Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Index>(k)) = vectors.col(cols[k]);
    return out;
}

}  // namespace

HalmosForm decompose(const ProjectionPair& pair, double tol_cluster) {
    if (!(tol_cluster > 0.0 && tol_cluster < 0.25))
        throw InvalidInput("decompose: tol_cluster must lie in (0, 1/4)");
    const CMatrix& P = pair.P;
    const CMatrix& Q = pair.Q;
    const Index n = pair.dim();

    // ran P side: PQP compressed to ran P.
    const EigenSystem top = compress_eig(range_basis(P), Q);
    std::vector<Index> h0, h1, gen;
    for (Index i = 0; i < top.values.size(); ++i) {
        const double v = top.values(i);
        if (v <= tol_cluster)
            h0.push_back(i);
        else if (v >= 1.0 - tol_cluster)
            h1.push_back(i);
    }
    for (Index i = top.values.size() - 1; i >= 0; --i) {
        const double v = top.values(i);
        if (v > tol_cluster && v < 1.0 - tol_cluster) gen.push_back(i);
    }

    HalmosForm form;
    form.tol_used = tol_cluster;
    form.d0 = static_cast<Index>(h0.size());
    form.d1 = static_cast<Index>(h1.size());
    form.dg = static_cast<Index>(gen.size());

    const CMatrix gp = gather(top.vectors, gen);
    CMatrix gq(n, form.dg);
    for (Index k = 0; k < form.dg; ++k) {
        const double s = top.values(gen[static_cast<std::size_t>(k)]);
        form.s.push_back(s);
        const CVector qp = Q * gp.col(k);
        gq.col(k) = (qp - P * qp) / std::sqrt(s * (1.0 - s));
    }

    // ker P side: (I-P)Q(I-P) compressed to ker P.
    const EigenSystem bottom = compress_eig(kernel_basis(P), Q);
    std::vector<Index> h2, h3, gen2;
    for (Index i = 0; i < bottom.values.size(); ++i) {
        const double v = bottom.values(i);
        if (v >= 1.0 - tol_cluster)
            h2.push_back(i);
        else if (v <= tol_cluster)
            h3.push_back(i);
        else
            gen2.push_back(i);
    }
    if (static_cast<Index>(gen2.size()) != form.dg) {
        std::ostringstream os;
        os << "inconsistent generic part: " << form.dg << " generic directions in ran P but "
           << gen2.size() << " in ker P (adjust tol_cluster)";
        throw NumericalError(os.str(), std::abs(static_cast<double>(gen2.size()) - form.dg));
    }
    if (form.dg > 0) {
        const CMatrix g2 = gather(bottom.vectors, gen2);
        const double resid = max_abs(g2 * g2.adjoint() - gq * gq.adjoint());
        if (resid > 1e-8) {
            std::ostringstream os;
            os << "inconsistent generic part: pairing span residual " << resid
               << " (adjust tol_cluster)";
            throw NumericalError(os.str(), resid);
        }
    }
    form.d2 = static_cast<Index>(h2.size());
    form.d3 = static_cast<Index>(h3.size());

    form.U.resize(n, n);
    form.U << gather(top.vectors, h0), gather(top.vectors, h1), gp, gq, gather(bottom.vectors, h2),
        gather(bottom.vectors, h3);
    return form;
}

ProjectionPair model_blocks(const HalmosForm& form) {
    const Index n = form.dim();
    CMatrix p = CMatrix::Zero(n, n);
    CMatrix q = CMatrix::Zero(n, n);
    for (Index i = 0; i < form.d0; ++i) p(i, i) = 1.0;
    for (Index i = form.off_h1(); i < form.off_gp(); ++i) p(i, i) = q(i, i) = 1.0;
    for (Index k = 0; k < form.dg; ++k) {
        const double s = form.s[static_cast<std::size_t>(k)];
        const double x = std::sqrt(s * (1.0 - s));
        const Index a = form.off_gp() + k;
        const Index b = form.off_gq() + k;
        p(a, a) = 1.0;
        q(a, a) = s;
        q(a, b) = q(b, a) = x;
        q(b, b) = 1.0 - s;
    }
    for (Index i = form.off_h2(); i < form.off_h3(); ++i) q(i, i) = 1.0;
    return {p, q};
}

ProjectionPair reconstruct(const HalmosForm& form) {
    const ProjectionPair m = model_blocks(form);
    return {form.U * m.P * form.U.adjoint(), form.U * m.Q * form.U.adjoint()};
}

PrincipalAngles principal_angles(const ProjectionPair& pair, double angle_tol) {
    PrincipalAngles out;
    const CMatrix bp = range_basis(pair.P);
    const CMatrix bq = range_basis(pair.Q);
    const Index m = std::min(bp.cols(), bq.cols());
    if (m == 0) return out;

    const CMatrix cross = bp.adjoint() * bq;
    const RVector cosines = singular_values(cross);  // descending
    // Sines from the smaller side so that exactly m of them are meaningful.
    const RVector sines = bq.cols() <= bp.cols() ? singular_values(bq - bp * cross)
                                                 : singular_values(bp - bq * cross.adjoint());
    const Index ns = sines.size();
    for (Index i = 0; i < m; ++i) {
        const double c = std::clamp(cosines(i), 0.0, 1.0);
        const double s = std::clamp(sines(ns - 1 - i), 0.0, 1.0);  // ascending
        out.angles.push_back(c * c >= 0.5 ? std::asin(s) : std::acos(c));
    }
    std::sort(out.angles.begin(), out.angles.end());
    for (double a : out.angles) {
        if (a <= angle_tol) ++out.zero_count;
        if (a >= std::numbers::pi / 2 - angle_tol) ++out.right_count;
    }
    return out;
}

Fingerprint unitary_equivalence_fingerprint(const ProjectionPair& pair, double tol_cluster) {
    const HalmosForm form = decompose(pair, tol_cluster);
    Fingerprint fp;
    fp.d = {form.d0, form.d1, form.d2, form.d3};
    for (double s : form.s) fp.s_micro.push_back(std::llround(s * 1e6));
    std::sort(fp.s_micro.rbegin(), fp.s_micro.rend());
    return fp;
}

nlohmann::json to_json(const HalmosForm& form) {
    return {{"d", {form.d0, form.d1, form.d2, form.d3}},
            {"dg", form.dg},
            {"s", form.s},
            {"U", matrix_to_json(form.U)},
            {"tol", form.tol_used}};
}

HalmosForm halmos_from_json(const nlohmann::json& j) {
    HalmosForm form;
    try {
        const auto d = j.at("d").get<std::vector<Index>>();
        if (d.size() != 4) throw ParseError("halmos form: \"d\" must have 4 entries", 0);
        form.d0 = d[0];
        form.d1 = d[1];
        form.d2 = d[2];
        form.d3 = d[3];
        form.dg = j.at("dg").get<Index>();
        form.s = j.at("s").get<std::vector<double>>();
        form.tol_used = j.at("tol").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("halmos form: ") + e.what(), 0);
    }
    form.U = matrix_from_json(j.at("U"));
    if (static_cast<Index>(form.s.size()) != form.dg || form.U.rows() != form.dim() ||
        form.U.cols() != form.dim())
        throw ParseError("halmos form: inconsistent dimensions", 0);
    return form;
}

}  // namespace twoproj
