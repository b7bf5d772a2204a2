#pragma once

#include <vector>

#include "twoproj/halmos.hpp"
#include "twoproj/word.hpp"

namespace twoproj {

using Matrix2c = Eigen::Matrix2cd;

/// A word evaluated as a 2x2 matrix function on sample points of [0, 1].
struct SymbolFunction {
    std::vector<double> samples;
    std::vector<Matrix2c> values;
};

/// Images of the generators at x: P -> [[1,0],[0,0]], Q -> [[x, r],[r, 1-x]], r = sqrt(x(1-x)).
Matrix2c symbol_of_p();
Matrix2c symbol_of_q(double x);

/// True iff all four intersections ran/ker P ∩ ran/ker Q are trivial.
bool check_generic_position(const ProjectionPair& pair, double tol_cluster = 1e-8);
bool check_generic_position(const HalmosForm& form);

/// Sample set of M = sigma(PQP) as seen by the symbol calculus: the generic
/// spectrum plus 0 when d0 > 0 and 1 when d1 > 0.
std::vector<double> symbol_samples(const HalmosForm& form);

/// Throws InvalidInput for samples outside [0, 1].
SymbolFunction evaluate_word_symbol(const SymbolWord& word, const std::vector<double>& samples);

struct IsomorphismReport {
    double matrix_norm = 0.0;
    double symbol_sup_norm = 0.0;
    double rel_error = 0.0;
    std::vector<double> samples;
};

/// Compare ||w(P,Q)|| with sup_x ||w(symbol)(x)|| over the generic spectrum.
/// Throws InvalidInput when the pair is not in generic position.
IsomorphismReport verify_isomorphism(const SymbolWord& word, const ProjectionPair& pair,
                                     double tol_cluster = 1e-8);

}  // namespace twoproj
