#include <algorithm>
#include <cmath>
#include <sstream>

#include "twoproj/locality.hpp"
#include "twoproj/spectral.hpp"

namespace twoproj {

Index degree(const Polynomial& p) {
    for (Index k = static_cast<Index>(p.size()) - 1; k >= 0; --k)
        if (p[static_cast<std::size_t>(k)] != Complex(0.0)) return k;
    return -1;
}

Polynomial multiply(const Polynomial& a, const Polynomial& b) {
    if (a.empty() || b.empty()) return {};
    Polynomial out(a.size() + b.size() - 1, Complex(0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

Polynomial parse_polynomial(std::string_view text) {
    Polynomial p;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
        const std::string_view piece = text.substr(start, end - start);
        try {
            p.push_back(SymbolExpr::parse(piece)(Complex(0.0)));
        } catch (const ParseError& e) {
            throw ParseError(std::string("polynomial coefficient ") + std::to_string(p.size()) + ": " +
                                 e.message(),
                             start + e.position());
        }
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return p;
}

CMatrix bergman_shift(Index d) {
    CMatrix t = CMatrix::Zero(d + 1, d + 1);
    for (Index a = 0; a < d; ++a)
        t(a + 1, a) = std::sqrt(static_cast<double>(a + 1) / static_cast<double>(a + 2));
    return t;
}

CMatrix ideal_projection(const Polynomial& p, Index d) {
    const Index dp = degree(p);
    if (dp < 0) throw InvalidInput("ideal_projection: zero polynomial");
    if (dp > d) {
        std::ostringstream os;
        os << "ideal_projection: degree " << dp << " exceeds truncation degree " << d;
        throw InvalidInput(os.str());
    }
    const Index cols = d + 1 - dp;
    CMatrix v = CMatrix::Zero(d + 1, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index a = 0; a <= dp; ++a)
            v(a + j, j) = p[static_cast<std::size_t>(a)] / std::sqrt(static_cast<double>(a + j + 1));
    Eigen::HouseholderQR<CMatrix> qr(v);
    const CMatrix q = qr.householderQ() * CMatrix::Identity(d + 1, cols);
    const CMatrix proj = q * q.adjoint();
    return 0.5 * (proj + proj.adjoint());
}

TruncFamily ideal_family(const Polynomial& p, const std::vector<Index>& degrees, bool quotient) {
    std::vector<Index> dims;
    for (Index d : degrees) dims.push_back(d + 1);
    std::ostringstream name;
    name << (quotient ? "I-Q[" : "Q[") << degree(p) << "]";
    return TruncFamily(
        name.str(), dims,
        [p, quotient](Index n) -> CMatrix {
            const CMatrix q = ideal_projection(p, n - 1);
            return quotient ? CMatrix(CMatrix::Identity(n, n) - q) : q;
        },
        Embedding::retruncated);
}

std::vector<IdealProfileRow> ideal_commutator_profile(const Polynomial& p,
                                                      const std::optional<Polynomial>& q,
                                                      const std::optional<Polynomial>& r,
                                                      const std::vector<Index>& d_list,
                                                      const std::vector<double>& p_list) {
    if (d_list.empty()) throw InvalidInput("ideal_commutator_profile: empty degree list");
    const Polynomial one{Complex(1.0)};
    const Polynomial pr = multiply(p, r.value_or(one));
    const std::optional<Polynomial> qr = q ? std::optional(multiply(*q, r.value_or(one))) : std::nullopt;
    const Index dmin = *std::min_element(d_list.begin(), d_list.end());
    const Index need = std::max(degree(pr), qr ? degree(*qr) : Index{0});
    if (degree(pr) < 0 || (qr && degree(*qr) < 0))
        throw InvalidInput("ideal_commutator_profile: zero polynomial");
    if (need > dmin) {
        std::ostringstream os;
        os << "ideal_commutator_profile: degree overflow (degree " << need << " > d = " << dmin << ")";
        throw InvalidInput(os.str());
    }
    std::vector<IdealProfileRow> rows;
    for (Index d : d_list) {
        IdealProfileRow row;
        row.d = d;
        const CMatrix qp = ideal_projection(pr, d);
        const CMatrix tz = bergman_shift(d);
        const RVector sv = singular_values(tz * qp - qp * tz);
        row.tz_norm = sv(0);
        for (double e : p_list) row.tz_schatten.push_back(schatten_norm(sv, e));
        if (qr) {
            const CMatrix qq = ideal_projection(*qr, d);
            const RVector sv2 = singular_values(qp * qq - qq * qp);
            row.pq_norm = sv2(0);
            for (double e : p_list) row.pq_schatten.push_back(schatten_norm(sv2, e));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace twoproj
