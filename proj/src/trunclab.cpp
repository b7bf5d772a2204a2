#include "twoproj/trunclab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "twoproj/lattice.hpp"
#include "twoproj/spectral.hpp"

namespace twoproj {

TruncFamily::TruncFamily(std::string name, std::vector<Index> dims, Generator gen, Embedding embedding)
    : name_(std::move(name)), dims_(std::move(dims)), gen_(std::move(gen)), embedding_(embedding) {
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        if (dims_[i] <= 0) throw InvalidInput("truncation family: dimensions must be positive");
        if (i > 0 && dims_[i] <= dims_[i - 1])
            throw InvalidInput("truncation family: dimensions must be strictly increasing");
    }
}

const CMatrix& TruncFamily::at(Index dim) const {
    {
        std::lock_guard lock(cache_->mutex);
        auto it = cache_->items.find(dim);
        if (it != cache_->items.end()) return *it->second;
    }
    auto made = std::make_unique<const CMatrix>(gen_(dim));
    std::lock_guard lock(cache_->mutex);
    auto [it, inserted] = cache_->items.try_emplace(dim, std::move(made));
    return *it->second;
}

TruncFamily TruncFamily::with_dims(std::vector<Index> dims) const {
    return TruncFamily(name_, std::move(dims), gen_, embedding_);
}

bool check_nested(const TruncFamily& family) {
    if (family.dims().empty()) return true;
    const CMatrix& top = family.at(family.dims().back());
    for (Index n : family.dims()) {
        const CMatrix& m = family.at(n);
        if (m.rows() != n || m.cols() != n) return false;
        if (!(top.topLeftCorner(n, n).array() == m.array()).all()) return false;
    }
    return true;
}

namespace {

void require_shared_dims(const TruncFamily& a, const TruncFamily& b) {
    if (a.dims() != b.dims())
        throw InvalidInput("truncation families '" + a.name() + "' and '" + b.name() +
                           "' have different dimension lists");
}

Embedding combine(const TruncFamily& a, const TruncFamily& b) {
    return a.embedding() == Embedding::nested && b.embedding() == Embedding::nested
               ? Embedding::nested
               : Embedding::retruncated;
}

}  // namespace

TruncFamily sum_family(const TruncFamily& a, const TruncFamily& b) {
    require_shared_dims(a, b);
    return TruncFamily(a.name() + "+" + b.name(), a.dims(),
                       [a, b](Index n) -> CMatrix { return a.at(n) + b.at(n); }, combine(a, b));
}

TruncFamily product_family(const TruncFamily& a, const TruncFamily& b) {
    require_shared_dims(a, b);
    // Products of sections are not sections of products.
    return TruncFamily(a.name() + "*" + b.name(), a.dims(),
                       [a, b](Index n) -> CMatrix { return a.at(n) * b.at(n); }, Embedding::retruncated);
}

TruncFamily commutator_family(const TruncFamily& a, const TruncFamily& b) {
    require_shared_dims(a, b);
    return TruncFamily("[" + a.name() + "," + b.name() + "]", a.dims(),
                       [a, b](Index n) -> CMatrix {
                           const CMatrix& x = a.at(n);
                           const CMatrix& y = b.at(n);
                           return x * y - y * x;
                       },
                       Embedding::retruncated);
}

ProjectionPair paper_example_pair(Index n_blocks) {
    if (n_blocks < 1) throw InvalidInput("paper_example_pair: N must be >= 1");
    return builtin_pair_family("paper-l2", {n_blocks}).at(2 * n_blocks);
}

namespace {

struct Block {
    Eigen::Matrix2cd p;
    Eigen::Matrix2cd q;
};

Block generic_block(double s) {
    const double x = std::sqrt(s * (1.0 - s));
    Block b;
    b.p << 1.0, 0.0, 0.0, 0.0;
    b.q << s, x, x, 1.0 - s;
    return b;
}

Block fixed_block(double p00, double p11, double q00, double q11) {
    Block b;
    b.p << p00, 0.0, 0.0, p11;
    b.q << q00, 0.0, 0.0, q11;
    return b;
}

using BlockRule = std::function<Block(Index)>;  // n is 1-based

BlockRule block_rule(std::string_view name) {
    if (name == "paper-l2")
        return [](Index n) {
            const double nn = static_cast<double>(n);
            const double den = nn * nn + 1.0;
            Block b;
            b.p << 1.0, 0.0, 0.0, 0.0;
            b.q << nn * nn / den, nn / den, nn / den, 1.0 / den;
            return b;
        };
    if (name == "finite-quarter")
        return [](Index n) { return n <= 4 ? generic_block(0.25) : fixed_block(1, 0, 1, 0); };
    if (name == "constant-interior") return [](Index) { return generic_block(0.3); };
    if (name == "decaying")
        return [](Index n) { return generic_block(1.0 / (2.0 * static_cast<double>(n) + 1.0)); };
    if (name == "orthogonal") return [](Index) { return fixed_block(1, 0, 0, 1); };
    if (name == "aligned") return [](Index) { return fixed_block(1, 0, 1, 0); };
    throw InvalidInput("unknown pair family '" + std::string(name) + "'");
}

TruncFamily block_family(const std::string& name, std::vector<Index> dims, BlockRule rule, bool take_p) {
    return TruncFamily(
        name, std::move(dims),
        [rule, take_p](Index dim) -> CMatrix {
            CMatrix m = CMatrix::Zero(dim, dim);
            for (Index k = 0; 2 * k < dim; ++k) {
                const Block b = rule(k + 1);
                const auto& src = take_p ? b.p : b.q;
                const Index w = std::min<Index>(2, dim - 2 * k);
                m.block(2 * k, 2 * k, w, w) = src.topLeftCorner(w, w);
            }
            return m;
        },
        Embedding::nested);
}

}  // namespace

PairFamily builtin_pair_family(std::string_view name, const std::vector<Index>& block_counts) {
    const BlockRule rule = block_rule(name);
    std::vector<Index> dims;
    for (Index n : block_counts) dims.push_back(2 * n);
    const std::string base(name);
    return {block_family(base + ".P", dims, rule, true), block_family(base + ".Q", dims, rule, false)};
}

std::vector<std::string> builtin_pair_family_names() {
    return {"paper-l2", "finite-quarter", "constant-interior", "decaying", "orthogonal", "aligned"};
}

TruncFamily builtin_family(std::string_view name, const std::vector<Index>& dims) {
    if (name == "harmonic-diagonal")
        return TruncFamily(std::string(name), dims, [](Index n) -> CMatrix {
            CMatrix m = CMatrix::Zero(n, n);
            for (Index k = 0; k < n; ++k) m(k, k) = 1.0 / static_cast<double>(k + 1);
            return m;
        });
    if (name == "identity")
        return TruncFamily(std::string(name), dims,
                           [](Index n) -> CMatrix { return CMatrix::Identity(n, n); });
    throw InvalidInput("unknown family '" + std::string(name) + "'");
}

std::vector<CommutatorRow> commutator_norms(const TruncFamily& a, const TruncFamily& b,
                                            const std::vector<double>& p_list) {
    require_shared_dims(a, b);
    for (double p : p_list)
        if (!(p >= 1.0)) throw InvalidInput("commutator_norms: Schatten exponents must be >= 1");
    std::vector<CommutatorRow> rows;
    for (Index n : a.dims()) {
        const CMatrix& x = a.at(n);
        const CMatrix& y = b.at(n);
        const RVector sv = singular_values(x * y - y * x);
        CommutatorRow row;
        row.dim = n;
        row.op_norm = sv.size() ? sv(0) : 0.0;
        for (double p : p_list) row.schatten.push_back(schatten_norm(sv, p));
        rows.push_back(std::move(row));
    }
    return rows;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::compact_like: return "compact-like";
        case Verdict::non_compact_like: return "non-compact-like";
        default: return "inconclusive";
    }
}

const char* to_string(CellKind k) {
    switch (k) {
        case CellKind::essential: return "essential";
        case CellKind::discrete: return "discrete";
        default: return "inconclusive";
    }
}

const char* to_string(Trend t) {
    switch (t) {
        case Trend::bounded: return "bounded";
        case Trend::growing: return "growing";
        default: return "inconclusive";
    }
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    if (x.size() < 2) return 0.0;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx == 0.0 ? 0.0 : sxy / sxx;
}

CompactnessProfile compactness_indicator(const TruncFamily& family, const CompactnessOptions& opts) {
    if (family.dims().size() < 4)
        throw InvalidInput("insufficient family: compactness_indicator needs at least 4 dimensions");
    CompactnessProfile prof;
    prof.dims = family.dims();
    prof.probes = opts.probes;
    std::vector<double> logn, logg;
    for (Index n : family.dims()) {
        const RVector sv = singular_values(family.at(n));
        std::vector<double> row;
        for (Index k : opts.probes)
            row.push_back(k <= sv.size() ? sv(k - 1) : std::numeric_limits<double>::quiet_NaN());
        prof.fixed.push_back(std::move(row));
        const Index k = (n + 1) / 2;
        prof.growing_index.push_back(k);
        const double g = sv(k - 1);
        prof.growing.push_back(g);
        logn.push_back(std::log(static_cast<double>(n)));
        logg.push_back(std::log(std::max(g, 1e-300)));
    }
    prof.growing_slope = ls_slope(logn, logg);

    const std::size_t m = prof.growing.size();
    const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(std::max<Index>(opts.window, 2)), m);
    prof.tail_monotone = true;
    for (std::size_t i = m - w + 1; i < m; ++i)
        if (prof.growing[i] > prof.growing[i - 1] * (1.0 + 1e-9) + 1e-15) prof.tail_monotone = false;

    const double last = prof.growing.back();
    if (prof.tail_monotone && (last <= opts.floor || prof.growing_slope <= opts.decay_slope))
        prof.verdict = Verdict::compact_like;
    else if (last >= opts.plateau && std::abs(prof.growing_slope) < opts.flat_slope)
        prof.verdict = Verdict::non_compact_like;
    else
        prof.verdict = Verdict::inconclusive;
    return prof;
}

EssentialSpectrumEstimate essential_spectrum_estimate(const TruncFamily& family,
                                                      const EssentialSpectrumOptions& opts) {
    if (family.dims().size() < 4)
        throw InvalidInput("insufficient family: essential_spectrum_estimate needs at least 4 dimensions");
    if (opts.resolution < 1) throw InvalidInput("essential_spectrum_estimate: resolution must be >= 1");
    EssentialSpectrumEstimate est;
    est.dims = family.dims();
    std::vector<RVector> spectra;
    double top = 0.0;
    for (Index n : family.dims()) {
        spectra.push_back(hermitian_eig(family.at(n)).values);
        top = std::max(top, spectra.back().maxCoeff());
    }
    const double upper = opts.upper > 0.0 ? opts.upper : std::max(top, 1e-12);
    const Index cells = opts.resolution + 1;
    est.width = upper / static_cast<double>(opts.resolution);
    for (Index k = 0; k < cells; ++k) est.centers.push_back(static_cast<double>(k) * est.width);
    est.counts.assign(static_cast<std::size_t>(cells), std::vector<Index>(est.dims.size(), 0));
    est.near_zero_counts.assign(est.dims.size(), 0);
    for (std::size_t d = 0; d < spectra.size(); ++d) {
        for (Index i = 0; i < spectra[d].size(); ++i) {
            const double v = spectra[d](i);
            auto cell = static_cast<Index>(std::floor(v / est.width + 0.5));
            cell = std::clamp<Index>(cell, 0, cells - 1);
            ++est.counts[static_cast<std::size_t>(cell)][d];
            if (v > opts.zero_tol && v < 0.5 * est.width) ++est.near_zero_counts[d];
        }
    }
    std::vector<double> xs(est.dims.begin(), est.dims.end());
    const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(opts.window), xs.size());
    auto classify = [&](const std::vector<Index>& c) {
        std::vector<double> ys(c.begin(), c.end());
        if (ls_slope(xs, ys) > opts.slope) return CellKind::essential;
        const auto tail_begin = c.end() - static_cast<std::ptrdiff_t>(w);
        if (std::all_of(tail_begin, c.end(), [&](Index v) { return v == *tail_begin; }))
            return CellKind::discrete;
        return CellKind::inconclusive;
    };
    for (const auto& c : est.counts) est.kinds.push_back(classify(c));
    est.zero_isolated = classify(est.near_zero_counts) == CellKind::discrete;
    return est;
}

namespace {

Trend delta_trend(const std::vector<EssentialSpanRow>& rows, Index window = 3) {
    std::vector<double> xs, ys;
    for (const auto& r : rows) {
        xs.push_back(static_cast<double>(r.dim));
        ys.push_back(static_cast<double>(r.delta));
    }
    if (ls_slope(xs, ys) > 0.1) return Trend::growing;
    const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(window), ys.size());
    if (w >= 2 && std::all_of(ys.end() - static_cast<std::ptrdiff_t>(w), ys.end(),
                              [&](double v) { return v == ys.back(); }))
        return Trend::bounded;
    return Trend::inconclusive;
}

}  // namespace

EssentialSpanReport essential_span(const PairFamily& family, double epsilon, double tol_cluster) {
    if (!(epsilon > 0.0 && epsilon < 2.0)) throw InvalidInput("essential_span: epsilon must lie in (0, 2)");
    EssentialSpanReport rep;
    rep.epsilon = epsilon;
    const TruncFamily sum = sum_family(family.P, family.Q);
    std::vector<double> xs, inside;
    for (Index n : family.dims()) {
        const ProjectionPair pair = family.at(n);
        const EigenSystem eig = hermitian_eig(sum.at(n));
        const CMatrix ess = spectral_projection(eig, epsilon, 3.0, 2.0);
        const CMatrix j = join(pair, std::nullopt, tol_cluster);
        EssentialSpanRow row;
        row.dim = n;
        row.rank_join = projection_rank(j);
        row.rank_ess = projection_rank(ess);
        row.delta = row.rank_join - row.rank_ess;
        row.gap_to_one = gap_to_one(pair, tol_cluster);
        rep.rows.push_back(row);
        xs.push_back(static_cast<double>(n));
        inside.push_back(static_cast<double>(
            (eig.values.array() > 1e-9 && eig.values.array() < epsilon).count()));
    }
    rep.delta_trend = delta_trend(rep.rows);
    if (ls_slope(xs, inside) > 0.1) {
        std::ostringstream os;
        os << "(0, " << epsilon << ") carries growing spectrum of P+Q: the essential span is not "
           << "well defined at this epsilon";
        rep.warnings.push_back(os.str());
    }
    rep.projections = TruncFamily(
        family.P.name() + "|ess", family.dims(),
        [sum, epsilon](Index n) -> CMatrix { return spectral_projection(hermitian_eig(sum.at(n)), epsilon, 3.0, 2.0); },
        Embedding::retruncated);
    return rep;
}

std::vector<FamilyRow> family_table(const PairFamily& family, double epsilon,
                                    const std::vector<double>& p_list, double tol_cluster) {
    const auto comm = commutator_norms(family.P, family.Q, p_list);
    const EssentialSpanReport ess = essential_span(family, epsilon, tol_cluster);
    std::vector<FamilyRow> rows;
    for (std::size_t i = 0; i < comm.size(); ++i) {
        FamilyRow r;
        r.dim = comm[i].dim;
        r.comm_norm = comm[i].op_norm;
        r.schatten = comm[i].schatten;
        r.gap_to_one = ess.rows[i].gap_to_one;
        r.rank_join = ess.rows[i].rank_join;
        r.rank_ess_span = ess.rows[i].rank_ess;
        r.delta = ess.rows[i].delta;
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace twoproj
