#include <atomic>
#include <cmath>
#include <thread>

#include "doctest.h"
#include "oracles/oracles.hpp"
#include "twoproj/lattice.hpp"
#include "twoproj/spectral.hpp"
#include "twoproj/trunclab.hpp"

using namespace twoproj;

TEST_CASE("family construction and caching") {
    CHECK_THROWS_AS(TruncFamily("bad", {4, 4}, [](Index n) -> CMatrix { return CMatrix::Zero(n, n); }),
                    InvalidInput);
    CHECK_THROWS_AS(TruncFamily("bad", {0, 4}, [](Index n) -> CMatrix { return CMatrix::Zero(n, n); }),
                    InvalidInput);
    auto calls = std::make_shared<std::atomic<int>>(0);
    const TruncFamily f("counted", {2, 4, 8}, [calls](Index n) -> CMatrix {
        ++*calls;
        return CMatrix::Identity(n, n);
    });
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t)
        threads.emplace_back([&f] {
            for (Index n : {2, 4, 8, 4, 2}) (void)f.at(n);
        });
    for (auto& t : threads) t.join();
    CHECK(*calls == 3);
    const TruncFamily copy = f;
    (void)copy.at(8);
    CHECK(*calls == 3);
    CHECK(f.with_dims({3, 5}).dims() == std::vector<Index>{3, 5});
}

TEST_CASE("built-in families are nested bit for bit") {
    for (const auto& name : builtin_pair_family_names()) {
        CAPTURE(name);
        const PairFamily f = builtin_pair_family(name, {1, 3, 5, 9, 16});
        CHECK(check_nested(f.P));
        CHECK(check_nested(f.Q));
        for (Index n : f.dims()) {
            CHECK(validate_projection(f.P.at(n), 1e-12).ok);
            CHECK(validate_projection(f.Q.at(n), 1e-12).ok);
        }
    }
    CHECK(check_nested(builtin_family("harmonic-diagonal", {1, 2, 7})));
    CHECK_THROWS_AS(builtin_pair_family("nope", {1}), InvalidInput);
    // a retruncated family is not nested
    const TruncFamily shifted("grid", {2, 4}, [](Index n) -> CMatrix {
        CMatrix m = CMatrix::Zero(n, n);
        for (Index k = 0; k < n; ++k) m(k, k) = static_cast<double>(k) / static_cast<double>(n);
        return m;
    });
    CHECK_FALSE(check_nested(shifted));
}

TEST_CASE("l2 example pair closed forms") {
    const ProjectionPair one = paper_example_pair(1);
    HalmosForm f = decompose(one);
    REQUIRE(f.s.size() == 1);
    CHECK(std::abs(f.s[0] - 0.5) < 1e-15);
    f = decompose(paper_example_pair(2));
    REQUIRE(f.s.size() == 2);
    CHECK(std::abs(f.s[0] - 0.8) < 1e-14);
    CHECK(std::abs(f.s[1] - 0.5) < 1e-14);
    for (Index n : {3, 10, 37}) {
        const ProjectionPair pair = paper_example_pair(n);
        f = decompose(pair);
        CHECK(f.d0 + f.d1 + f.d2 + f.d3 == 0);
        REQUIRE(f.dg == n);
        for (Index k = 0; k < n; ++k)  // descending: s[k] belongs to block n - k
            CHECK(std::abs(f.s[static_cast<std::size_t>(k)] - oracle::l2_s(n - k)) <= 1e-12);
        CHECK(std::abs(gap_to_one(pair) - 1.0 / static_cast<double>(n * n + 1)) <= 1e-12);
    }
    CHECK_THROWS_AS(paper_example_pair(0), InvalidInput);
}

TEST_CASE("commutator norms") {
    const TruncFamily d1 = builtin_family("harmonic-diagonal", {2, 4, 8});
    const TruncFamily d2 = builtin_family("identity", {2, 4, 8});
    for (const auto& r : commutator_norms(d1, d2, {1, 2})) {
        CHECK(r.op_norm == 0.0);
        CHECK(r.schatten[0] == 0.0);
    }
    // quarter pair padded by zeros
    auto [p2, q2] = oracle::quarter_pair();
    auto pad = [](CMatrix m) {
        return [m](Index n) -> CMatrix {
            CMatrix out = CMatrix::Zero(n, n);
            out.topLeftCorner(2, 2) = m;
            return out;
        };
    };
    const TruncFamily fp("P", {2, 5, 9}, pad(p2)), fq("Q", {2, 5, 9}, pad(q2));
    for (const auto& r : commutator_norms(fp, fq, {1, 2, 4})) {
        CHECK(std::abs(r.op_norm - std::sqrt(3.0) / 4.0) < 1e-14);
        CHECK(r.schatten[0] >= r.schatten[1] - 1e-15);
        CHECK(r.schatten[1] >= r.schatten[2] - 1e-15);
    }
    const PairFamily paper = builtin_pair_family("paper-l2", {5, 20, 60});
    for (const auto& r : commutator_norms(paper.P, paper.Q, {1, 2}))
        CHECK(std::abs(r.op_norm - 0.5) < 1e-12);
    CHECK_THROWS_AS(commutator_norms(d1, builtin_family("identity", {2, 4}), {1}), InvalidInput);
    CHECK_THROWS_AS(commutator_norms(d1, d2, {0.5}), InvalidInput);
}

TEST_CASE("compactness indicator basics") {
    const std::vector<Index> dims{8, 16, 32, 64, 128};
    CHECK(compactness_indicator(builtin_family("harmonic-diagonal", dims)).verdict == Verdict::compact_like);
    CHECK(compactness_indicator(builtin_family("identity", dims)).verdict == Verdict::non_compact_like);
    CHECK_THROWS_AS(compactness_indicator(builtin_family("identity", {1, 2, 3})), InvalidInput);
    const CompactnessProfile prof = compactness_indicator(builtin_family("harmonic-diagonal", dims));
    for (std::size_t i = 0; i < prof.fixed.size(); ++i) {
        const auto& row = prof.fixed[i];
        CHECK(row[0] >= row[1]);
        if (prof.dims[i] >= 16)
            CHECK(row[1] >= row[2]);
        else
            CHECK(std::isnan(row[2]));
    }
}

TEST_CASE("l2 pair commutator is compact through the growing probe") {
    const PairFamily f = builtin_pair_family("paper-l2", {16, 32, 64, 128, 256});
    const CompactnessProfile prof = compactness_indicator(commutator_family(f.P, f.Q));
    CHECK(prof.verdict == Verdict::compact_like);
    // fixed probes sit at sqrt(s_k (1 - s_k)) for the k-th block (each singular value is doubled)
    CHECK(std::abs(prof.fixed.back()[0] - 0.5) < 1e-12);
    for (std::size_t i = 0; i < prof.dims.size(); ++i) {
        const Index blocks = prof.dims[i] / 2;
        const Index k = (blocks + 1) / 2;  // sigma_{N} comes from block ceil(N/2)
        const double s = oracle::l2_s(k);
        CHECK(std::abs(prof.growing[i] - std::sqrt(s * (1 - s))) < 1e-12);
    }
}

TEST_CASE("compactness verdicts across the zoo") {
    const std::vector<Index> blocks{16, 32, 64, 128};
    auto verdict = [&](const char* name) {
        const PairFamily f = builtin_pair_family(name, blocks);
        return compactness_indicator(commutator_family(f.P, f.Q)).verdict;
    };
    CHECK(verdict("paper-l2") == Verdict::compact_like);
    CHECK(verdict("decaying") == Verdict::compact_like);
    CHECK(verdict("finite-quarter") == Verdict::compact_like);
    CHECK(verdict("orthogonal") == Verdict::compact_like);
    CHECK(verdict("constant-interior") == Verdict::non_compact_like);
}

TEST_CASE("essential spectrum estimates") {
    const std::vector<Index> dims{10, 20, 40, 80};
    EssentialSpectrumOptions opts;
    opts.upper = 2.0;
    EssentialSpectrumEstimate est = essential_spectrum_estimate(builtin_family("identity", dims), opts);
    for (std::size_t c = 0; c < est.centers.size(); ++c) {
        CAPTURE(est.centers[c]);
        if (std::abs(est.centers[c] - 1.0) < 1e-12)
            CHECK(est.kinds[c] == CellKind::essential);
        else
            CHECK(est.kinds[c] != CellKind::essential);
    }
    for (std::size_t d = 0; d < dims.size(); ++d) {
        Index total = 0;
        for (const auto& c : est.counts) total += c[d];
        CHECK(total == dims[d]);
    }

    const PairFamily paper = builtin_pair_family("paper-l2", {10, 20, 40, 80});
    est = essential_spectrum_estimate(sum_family(paper.P, paper.Q), opts);
    CHECK(est.kinds.front() == CellKind::essential);
    CHECK(est.kinds.back() == CellKind::essential);
    CHECK_FALSE(est.zero_isolated);

    const PairFamily quarter = builtin_pair_family("finite-quarter", {10, 20, 40, 80});
    est = essential_spectrum_estimate(sum_family(quarter.P, quarter.Q), opts);
    for (std::size_t c = 0; c < est.centers.size(); ++c) {
        CAPTURE(est.centers[c]);
        const double x = est.centers[c];
        if (est.kinds[c] == CellKind::essential)
            CHECK((std::abs(x) < 1e-12 || std::abs(x - 1) < 1e-12 || std::abs(x - 2) < 1e-12));
    }
    CHECK(est.zero_isolated);
}

TEST_CASE("essential span deficiency on the l2 pair") {
    const PairFamily f = builtin_pair_family("paper-l2", {50, 100, 200});
    const EssentialSpanReport rep = essential_span(f, 0.5);
    REQUIRE(rep.rows.size() == 3);
    for (const auto& r : rep.rows) {
        const long n = static_cast<long>(r.dim / 2);
        CHECK(r.rank_join == 2 * n);
        CHECK(r.delta == oracle::l2_delta(n, 0.5));
        CHECK(std::abs(r.gap_to_one - 1.0 / static_cast<double>(n * n + 1)) <= 1e-12);
    }
    CHECK(rep.delta_trend == Trend::growing);
    CHECK_FALSE(rep.warnings.empty());
    const EssentialSpanReport low = essential_span(f, 0.1);
    for (const auto& r : low.rows) CHECK(r.delta == oracle::l2_delta(r.dim / 2, 0.1));
    CHECK_THROWS_AS(essential_span(builtin_pair_family("finite-quarter", {5, 6}), 0.5), SpectralCutAmbiguous);
}

TEST_CASE("orthogonal ranges have no deficiency") {
    const PairFamily f = builtin_pair_family("orthogonal", {4, 8, 16});
    for (double eps : {0.1, 0.5, 0.9})
        for (const auto& r : essential_span(f, eps).rows) CHECK(r.delta == 0);
}

TEST_CASE("deficiency is bounded exactly when the gap stays open") {
    const std::vector<Index> blocks{20, 40, 80, 160};
    for (const auto& name : builtin_pair_family_names()) {
        CAPTURE(name);
        const EssentialSpanReport rep = essential_span(builtin_pair_family(name, blocks), 0.1);
        double min_gap = 1.0;
        for (const auto& r : rep.rows) min_gap = std::min(min_gap, r.gap_to_one);
        const bool gap_open = min_gap > 0.01;
        CHECK(gap_open == (rep.delta_trend == Trend::bounded));
        CHECK(!gap_open == (rep.delta_trend == Trend::growing));
    }
}

TEST_CASE("family table and Schatten ordering") {
    const PairFamily f = builtin_pair_family("paper-l2", {10, 20, 40});
    const auto rows = family_table(f, 0.5, {1, 2, 3});
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
        CHECK(std::abs(r.gap_to_one - 1.0 / static_cast<double>((r.dim / 2) * (r.dim / 2) + 1)) <= 1e-12);
        CHECK(r.schatten[0] >= r.schatten[1]);
        CHECK(r.schatten[1] >= r.schatten[2]);
        CHECK(r.delta == r.rank_join - r.rank_ess_span);
    }
}
