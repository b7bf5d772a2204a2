#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "twoproj/halmos.hpp"

namespace twoproj {

/// How the realization at dimension n relates to the one at m > n.
enum class Embedding {
    nested,      ///< leading n x n compression of the m-realization, bit for bit
    retruncated  ///< rebuilt at each size (degree truncation, refined grids)
};

/// A sequence of finite sections T_n standing in for one operator.
///
/// Realizations are computed lazily and cached; copies share the cache.
/// Concurrent `at()` calls are safe: each key is written once under a lock
/// and then only read.
class TruncFamily {
public:
    using Generator = std::function<CMatrix(Index)>;

    TruncFamily() = default;
    TruncFamily(std::string name, std::vector<Index> dims, Generator gen,
                Embedding embedding = Embedding::nested);

    const std::string& name() const { return name_; }
    const std::vector<Index>& dims() const { return dims_; }
    Embedding embedding() const { return embedding_; }

    /// Realization at `dim` (need not be listed in dims()).
    const CMatrix& at(Index dim) const;

    /// Same generator on a different dimension list (fresh cache).
    TruncFamily with_dims(std::vector<Index> dims) const;

private:
    struct Cache {
        std::mutex mutex;
        std::map<Index, std::unique_ptr<const CMatrix>> items;
    };

    std::string name_;
    std::vector<Index> dims_;
    Generator gen_;
    Embedding embedding_ = Embedding::nested;
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

/// True when every listed realization is the exact leading compression of the largest one.
bool check_nested(const TruncFamily& family);

TruncFamily sum_family(const TruncFamily& a, const TruncFamily& b);
TruncFamily product_family(const TruncFamily& a, const TruncFamily& b);
TruncFamily commutator_family(const TruncFamily& a, const TruncFamily& b);

/// Two projection families on shared dimensions.
struct PairFamily {
    TruncFamily P;
    TruncFamily Q;
    ProjectionPair at(Index dim) const { return {P.at(dim), Q.at(dim)}; }
    const std::vector<Index>& dims() const { return P.dims(); }
};

/// P onto span{e_n ⊕ 0}, Q onto span{e_n ⊕ e_n/n}, n = 1..N, in interleaved
/// coordinates (e_1⊕0, 0⊕e_1, e_2⊕0, ...). Dimension 2N; s_n = n^2/(n^2+1).
ProjectionPair paper_example_pair(Index n_blocks);

/// Built-in block-diagonal pair families, indexed by block count N (matrix size 2N):
///   paper-l2          s_n = n^2/(n^2+1)          (gap -> 0, [P,Q] compact)
///   finite-quarter    s = 1/4 for n <= 4, then P = Q on the block
///   constant-interior s_n = 0.3                  ([P,Q] not compact)
///   decaying          s_n = 1/(2n+1)             (spectrum accumulates at 0)
///   orthogonal        P = e⊕0, Q = 0⊕e
///   aligned           P = Q = e⊕0
PairFamily builtin_pair_family(std::string_view name, const std::vector<Index>& block_counts);
std::vector<std::string> builtin_pair_family_names();

/// Built-in single families: "harmonic-diagonal" = diag(1, 1/2, ..., 1/n), "identity".
TruncFamily builtin_family(std::string_view name, const std::vector<Index>& dims);

struct CommutatorRow {
    Index dim = 0;
    double op_norm = 0.0;
    std::vector<double> schatten;  ///< aligned with the requested p list
};

/// ||[A_n, B_n]|| and Schatten p-norms per shared dimension.
std::vector<CommutatorRow> commutator_norms(const TruncFamily& a, const TruncFamily& b,
                                            const std::vector<double>& p_list);

enum class Verdict { compact_like, non_compact_like, inconclusive };
const char* to_string(Verdict v);

struct CompactnessOptions {
    std::vector<Index> probes{1, 4, 16};
    double floor = 1e-6;         ///< growing probe below this counts as vanished
    double plateau = 1e-3;       ///< growing probe stuck above this is non-compact evidence
    double decay_slope = -0.3;   ///< log-log slope of the growing probe that counts as decay
    double flat_slope = 0.1;     ///< |slope| below this counts as stabilized
    Index window = 3;            ///< tail length for the monotonicity test
};

/// Singular-value profile of a family. Fixed probes sigma_k converge to the
/// limit operator's sigma_k whether or not it is compact, so the verdict is
/// driven by the growing probe sigma_{ceil(n/2)}(T_n).
struct CompactnessProfile {
    std::vector<Index> dims;
    std::vector<Index> probes;
    std::vector<std::vector<double>> fixed;  ///< [dim][probe]; NaN when k > n
    std::vector<Index> growing_index;
    std::vector<double> growing;
    double growing_slope = 0.0;
    bool tail_monotone = false;
    Verdict verdict = Verdict::inconclusive;
};

/// Throws InvalidInput ("insufficient family") with fewer than 4 dims.
CompactnessProfile compactness_indicator(const TruncFamily& family,
                                         const CompactnessOptions& opts = {});

enum class CellKind { essential, discrete, inconclusive };
const char* to_string(CellKind k);

struct EssentialSpectrumOptions {
    Index resolution = 20;       ///< cells are centred at k*upper/resolution, k = 0..resolution
    double upper = 0.0;          ///< <= 0: use the largest eigenvalue seen
    double slope = 0.1;          ///< counts-vs-dim slope that marks a cell essential
    Index window = 3;            ///< constancy window for "discrete"
    double zero_tol = 1e-9;      ///< eigenvalues at or below this are exact zeros
};

struct EssentialSpectrumEstimate {
    std::vector<Index> dims;
    std::vector<double> centers;
    double width = 0.0;
    std::vector<std::vector<Index>> counts;  ///< [cell][dim]
    std::vector<CellKind> kinds;
    std::vector<Index> near_zero_counts;     ///< eigenvalues in (zero_tol, width/2) per dim
    bool zero_isolated = false;              ///< near-zero counts bounded over the tail
};

EssentialSpectrumEstimate essential_spectrum_estimate(const TruncFamily& family,
                                                      const EssentialSpectrumOptions& opts = {});

struct EssentialSpanRow {
    Index dim = 0;
    Index rank_join = 0;
    Index rank_ess = 0;
    Index delta = 0;
    double gap_to_one = 1.0;
};

enum class Trend { bounded, growing, inconclusive };
const char* to_string(Trend t);

struct EssentialSpanReport {
    double epsilon = 0.5;
    std::vector<EssentialSpanRow> rows;
    Trend delta_trend = Trend::inconclusive;
    std::vector<std::string> warnings;
    TruncFamily projections;  ///< 1_[epsilon, 2](P_n + Q_n)
};

/// Essential span versus join across a pair family. Throws
/// SpectralCutAmbiguous when epsilon touches sigma(P_n + Q_n).
EssentialSpanReport essential_span(const PairFamily& family, double epsilon,
                                   double tol_cluster = 1e-8);

/// One CSV row of the `family` report.
struct FamilyRow {
    Index dim = 0;
    double comm_norm = 0.0;
    std::vector<double> schatten;
    double gap_to_one = 1.0;
    Index rank_join = 0;
    Index rank_ess_span = 0;
    Index delta = 0;
};

std::vector<FamilyRow> family_table(const PairFamily& family, double epsilon,
                                    const std::vector<double>& p_list, double tol_cluster = 1e-8);

/// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace twoproj
