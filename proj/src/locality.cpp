#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "twoproj/locality.hpp"
#include "twoproj/spectral.hpp"

namespace twoproj {

Index LocalSupport::count() const {
    return static_cast<Index>(std::count(flagged.begin(), flagged.end(), true));
}

double LocalSupport::measure(const SigmaModel& sigma) const {
    return static_cast<double>(count()) * sigma.grid_spacing();
}

namespace {

std::pair<Index, Index> two_largest(const TruncFamily& f, const char* what) {
    std::vector<Index> dims = f.dims();
    std::sort(dims.begin(), dims.end());
    if (dims.size() < 2) throw InvalidInput(std::string(what) + ": family needs at least two dims");
    return {dims[dims.size() - 2], dims.back()};
}

double hermitian_norm(const CMatrix& a) {
    if (a.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

// ||P B P|| through the range basis of P.
double compressed_norm(const CMatrix& basis, const CMatrix& b) {
    if (basis.cols() == 0) return 0.0;
    return hermitian_norm(basis.adjoint() * b * basis);
}

double normality_defect(const CMatrix& p, const CMatrix& b, Index rank) {
    const RVector sv = singular_values(b * p - p * b);
    return rank < sv.size() ? sv(rank) : 0.0;
}

}  // namespace

LocalSupport local_support(const TruncFamily& p_family, const SigmaModel& sigma,
                           const LocalSupportOptions& opts) {
    const auto [prev, last] = two_largest(p_family, "local_support");
    const CMatrix& p_last = p_family.at(last);
    const CMatrix& p_prev = p_family.at(prev);
    const CMatrix v_last = range_basis(p_last);
    const CMatrix v_prev = range_basis(p_prev);
    const Index g = static_cast<Index>(sigma.grid().size());

    LocalSupport out;
    out.flagged.assign(static_cast<std::size_t>(g), false);
    out.witness.assign(static_cast<std::size_t>(g), 0.0);
    out.witness_prev.assign(static_cast<std::size_t>(g), 0.0);
    for (Index i = 0; i < g; ++i) {
        const SymbolFn b = sigma.bump(i);
        const auto k = static_cast<std::size_t>(i);
        out.witness[k] = compressed_norm(v_last, sigma.apply(b, last));
        out.witness_prev[k] = compressed_norm(v_prev, sigma.apply(b, prev));
        out.flagged[k] = out.witness[k] >= opts.tol && out.witness_prev[k] >= opts.tol;
    }

    // Essential normality on a fixed subset of the dictionary.
    const Index probes = std::clamp<Index>(opts.normality_probes, 1, g);
    double worst_last = 0.0, worst_prev = 0.0;
    for (Index j = 0; j < probes; ++j) {
        const SymbolFn b = sigma.bump(j * g / probes);
        worst_last = std::max(worst_last, normality_defect(p_last, sigma.apply(b, last), opts.normality_rank));
        worst_prev = std::max(worst_prev, normality_defect(p_prev, sigma.apply(b, prev), opts.normality_rank));
    }
    if (worst_last > opts.normality_tol && worst_last >= 0.9 * worst_prev) {
        std::ostringstream os;
        os << "family does not look essentially normal for this model: commutator defect " << worst_last
           << " at dim " << last << " (" << worst_prev << " at dim " << prev << ")";
        if (opts.strict) throw NumericalError(os.str(), worst_last);
        out.warnings.push_back(os.str());
    }
    return out;
}

DisjointSupportReport disjoint_support_check(const TruncFamily& p_family, const TruncFamily& q_family,
                                             const SigmaModel& sigma, const LocalSupportOptions& opts) {
    DisjointSupportReport rep;
    rep.support_p = local_support(p_family, sigma, opts);
    rep.support_q = local_support(q_family, sigma, opts);
    rep.disjoint = true;
    for (std::size_t i = 0; i < rep.support_p.flagged.size(); ++i)
        if (rep.support_p.flagged[i] && rep.support_q.flagged[i]) rep.disjoint = false;

    const TruncFamily pq = product_family(p_family, q_family);
    const Index last = *std::max_element(pq.dims().begin(), pq.dims().end());
    const RVector sv = singular_values(pq.at(last));
    rep.pq_norm = sv.size() ? sv(0) : 0.0;
    rep.pq_rank = static_cast<Index>((sv.array() > 1e-9).count());

    if (!rep.disjoint) {
        rep.status = "hypothesis not met";
        return rep;
    }
    rep.pq_profile = compactness_indicator(pq);
    rep.status = rep.pq_profile->verdict == Verdict::compact_like ? "confirmed" : "violated";
    return rep;
}

std::vector<Complex> compressed_symbol(const CMatrix& p, const SigmaModel& sigma, const SymbolFn& phi,
                                       Index dim) {
    if (p.rows() != dim || p.cols() != dim) throw InvalidInput("compressed_symbol: projection size mismatch");
    const CMatrix phi_p = sigma.apply(phi, dim) * p;  // sigma(phi) P
    const Index g = static_cast<Index>(sigma.grid().size());
    std::vector<Complex> out(static_cast<std::size_t>(g), Complex(0.0));
    for (Index i = 0; i < g; ++i) {
        const CMatrix pb = p * sigma.apply(sigma.bump(i), dim);  // P sigma(b)
        const Complex den = pb.trace();
        if (std::abs(den) < 1e-12 * static_cast<double>(dim)) continue;
        // tr(P B P Phi) = tr((P B) (Phi P)) since P^2 = P.
        const Complex num = (pb.transpose().cwiseProduct(phi_p)).sum();
        out[static_cast<std::size_t>(i)] = num / den;
    }
    return out;
}

long k1_index(const TruncFamily& p_family, const LocalSupport& support, const SigmaModel& sigma,
              const SymbolFn& phi) {
    if (sigma.space() == SpaceId::interval) return 0;
    const Index g = static_cast<Index>(sigma.grid().size());
    if (support.count() < g) return 0;
    const Index last = *std::max_element(p_family.dims().begin(), p_family.dims().end());
    const std::vector<Complex> psi = compressed_symbol(p_family.at(last), sigma, phi, last);
    return winding_number(psi).winding;
}

K1Report k1_invariance_check(const TruncFamily& p_family, const CMatrix& k, const SigmaModel& sigma,
                             const SymbolFn& phi, const LocalSupportOptions& opts) {
    if (k.rows() != k.cols()) throw InvalidInput("k1_invariance_check: K must be square");
    if ((k - k.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw InvalidInput("k1_invariance_check: K must be Hermitian");
    const Index r = k.rows();
    for (Index d : p_family.dims())
        if (d < r) throw InvalidInput("k1_invariance_check: perturbation larger than a family dim");

    const EigenSystem ek = hermitian_eig(k);
    const CMatrix u_block = functional_calculus(ek, [](double x) { return std::polar(1.0, x); });
    const TruncFamily q_family(
        "UPU*", p_family.dims(),
        [p_family, u_block, r](Index n) -> CMatrix {
            CMatrix u = CMatrix::Identity(n, n);
            u.topLeftCorner(r, r) = u_block;
            const CMatrix q = u * p_family.at(n) * u.adjoint();
            return 0.5 * (q + q.adjoint());
        },
        p_family.embedding());

    K1Report rep;
    const Index last = *std::max_element(p_family.dims().begin(), p_family.dims().end());
    const CMatrix& p = p_family.at(last);
    const CMatrix& q = q_family.at(last);
    const CMatrix vp = range_basis(p);
    const CMatrix wp = kernel_basis(p);
    const double cut = 1e-8;
    if (vp.cols() > 0) {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(vp.adjoint() * q * vp, Eigen::EigenvaluesOnly);
        rep.d0 = static_cast<Index>((es.eigenvalues().array() <= cut).count());
    }
    if (wp.cols() > 0) {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(wp.adjoint() * q * wp, Eigen::EigenvaluesOnly);
        rep.d2 = static_cast<Index>((es.eigenvalues().array() >= 1.0 - cut).count());
    }
    rep.hypothesis_ok = rep.d0 == 0 && rep.d2 == 0;
    rep.support_p = local_support(p_family, sigma, opts);
    rep.support_q = local_support(q_family, sigma, opts);
    rep.supports_equal = rep.support_p.flagged == rep.support_q.flagged;
    rep.index_p = k1_index(p_family, rep.support_p, sigma, phi);
    rep.index_q = k1_index(q_family, rep.support_q, sigma, phi);
    rep.indices_equal = rep.index_p == rep.index_q;
    return rep;
}

}  // namespace twoproj
