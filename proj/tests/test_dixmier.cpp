#include <cmath>

#include "doctest.h"
#include "oracles/oracles.hpp"
#include "pairs.hpp"
#include "twoproj/dixmier.hpp"
#include "twoproj/random.hpp"
#include "twoproj/spectral.hpp"

using namespace twoproj;

namespace {

ProjectionPair quarter() {
    auto [p, q] = oracle::quarter_pair();
    return projection_pair(p, q);
}

SymbolWord random_word(CounterRng& rng, std::size_t max_degree) {
    SymbolWord w;
    const auto terms = rng.uniform_int(1, 4);
    for (std::int64_t t = 0; t < terms; ++t) {
        const auto len = rng.uniform_int(0, static_cast<std::int64_t>(max_degree));
        std::string letters;
        for (std::int64_t i = 0; i < len; ++i) letters += rng.uniform() < 0.5 ? 'P' : 'Q';
        w.add_term(rng.complex_normal(), letters);
    }
    return w;
}

}  // namespace

TEST_CASE("word parsing") {
    SymbolWord w = SymbolWord::parse("P*Q*P - 0.25*I");
    CHECK(w.terms().size() == 2);
    CHECK(w.degree() == 3);
    CHECK(SymbolWord::parse("PP").to_string() == SymbolWord::parse("P").to_string());
    CHECK(SymbolWord::parse("(P+Q-I)^2").degree() == 2);
    CHECK(SymbolWord::parse("2i*PQ").terms()[0].coeff == Complex(0, 2));
    CHECK(SymbolWord::parse("P - P").terms().empty());
    CHECK(SymbolWord::parse("-Q").terms()[0].coeff == Complex(-1, 0));
    CHECK(SymbolWord::parse("PQ - QP").adjoint().to_string() == SymbolWord::parse("QP - PQ").to_string());
    for (const char* bad : {"P*", "P+*Q", "(P+Q", "X", "P^-1", "(PQ)^40", "P $ Q"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(SymbolWord::parse(bad), ParseError);
    }
    try {
        SymbolWord::parse("P + (Q");
    } catch (const ParseError& e) {
        CHECK(e.position() == 6);
    }
}

TEST_CASE("matrix evaluation") {
    const ProjectionPair pair = quarter();
    CMatrix want = CMatrix::Zero(2, 2);
    want(0, 0) = 0.25;
    CHECK(max_abs(evaluate_word_matrix(SymbolWord::parse("PQP"), pair.P, pair.Q) - want) < 1e-15);
    const CMatrix comm = evaluate_word_matrix(SymbolWord::parse("PQ - QP"), pair.P, pair.Q);
    CHECK(std::abs(operator_norm(comm) - std::sqrt(3.0) / 4.0) < 1e-14);

    // on P = Q every word is a polynomial in one projection
    CounterRng rng(61, 0);
    const CMatrix p = random_projection(5, 2, rng);
    const SymbolWord w = SymbolWord::parse("I - P - Q + PQ + QP - QPQ");
    // P = Q: I - 2P + 2P - P = I - P
    CHECK(max_abs(evaluate_word_matrix(w, p, p) - (CMatrix::Identity(5, 5) - p)) < 1e-12);
}

TEST_CASE("symbol evaluation") {
    const SymbolFunction f = evaluate_word_symbol(SymbolWord::parse("P"), {0.0, 0.3, 1.0});
    for (const auto& m : f.values) CHECK((m - symbol_of_p()).cwiseAbs().maxCoeff() == 0.0);
    const SymbolFunction q0 = evaluate_word_symbol(SymbolWord::parse("Q"), {0.0});
    Matrix2c want;
    want << 0, 0, 0, 1;
    CHECK((q0.values[0] - want).cwiseAbs().maxCoeff() < 1e-15);
    const SymbolFunction pqp = evaluate_word_symbol(SymbolWord::parse("PQP"), {0.25});
    want << 0.25, 0, 0, 0;
    CHECK((pqp.values[0] - want).cwiseAbs().maxCoeff() < 1e-15);
    CHECK_THROWS_AS(evaluate_word_symbol(SymbolWord::parse("P"), {1.5}), InvalidInput);
}

TEST_CASE("symbol map is a *-homomorphism and vanishes off-diagonal at endpoints") {
    CounterRng rng(62, 0);
    const std::vector<double> xs{0.0, 0.1, 0.5, 0.77, 1.0};
    for (int t = 0; t < 30; ++t) {
        const SymbolWord a = random_word(rng, 5), b = random_word(rng, 5);
        const SymbolFunction fa = evaluate_word_symbol(a, xs), fb = evaluate_word_symbol(b, xs);
        const SymbolFunction fab = evaluate_word_symbol(a * b, xs);
        const SymbolFunction fstar = evaluate_word_symbol(a.adjoint(), xs);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            CHECK((fab.values[i] - fa.values[i] * fb.values[i]).cwiseAbs().maxCoeff() <= 1e-12 * (1 + fab.values[i].norm()));
            CHECK((fstar.values[i] - fa.values[i].adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
        }
        for (std::size_t i : {std::size_t{0}, xs.size() - 1}) {
            CHECK(std::abs(fa.values[i](0, 1)) <= 1e-9);
            CHECK(std::abs(fa.values[i](1, 0)) <= 1e-9);
        }
    }
}

TEST_CASE("generic position") {
    CHECK(check_generic_position(quarter()));
    CounterRng rng(63, 0);
    const CMatrix p = random_projection(4, 2, rng);
    CHECK_FALSE(check_generic_position(projection_pair(p, p)));
    CHECK_FALSE(check_generic_position(projection_pair(p, CMatrix(CMatrix::Identity(4, 4) - p))));
}

TEST_CASE("isomorphism check") {
    IsomorphismReport r = verify_isomorphism(SymbolWord::parse("PQP"), quarter());
    CHECK(std::abs(r.matrix_norm - 0.25) < 1e-14);
    CHECK(std::abs(r.symbol_sup_norm - 0.25) < 1e-14);
    CHECK(r.rel_error <= 1e-12);

    // P + Q - I has symbol eigenvalues +- sqrt(x)
    const ProjectionPair g = fixtures::generic_pair(64, 0, 6);
    const HalmosForm f = decompose(g);
    r = verify_isomorphism(SymbolWord::parse("P + Q - I"), g);
    CHECK(std::abs(r.matrix_norm - std::sqrt(f.s.front())) < 1e-10);
    CHECK(r.rel_error < 1e-10);

    CounterRng rng(65, 0);
    const CMatrix p = random_projection(4, 2, rng);
    CHECK_THROWS_AS(verify_isomorphism(SymbolWord::parse("P"), projection_pair(p, p)), InvalidInput);
}

TEST_CASE("isomorphism holds for random words on random generic pairs") {
    CounterRng rng(66, 0);
    for (std::uint64_t k = 0; k < 5; ++k) {
        const ProjectionPair g = fixtures::generic_pair(67, k, 3 + static_cast<Index>(k));
        for (int t = 0; t < 8; ++t) {
            const SymbolWord w = random_word(rng, 8);
            CHECK(verify_isomorphism(w, g).rel_error <= 1e-6);
        }
    }
}
