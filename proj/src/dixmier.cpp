#include "twoproj/dixmier.hpp"

#include <algorithm>
#include <cmath>

#include "twoproj/spectral.hpp"

namespace twoproj {

Matrix2c symbol_of_p() {
    Matrix2c m;
    m << 1.0, 0.0, 0.0, 0.0;
    return m;
}

Matrix2c symbol_of_q(double x) {
    const double r = std::sqrt(std::max(x * (1.0 - x), 0.0));
    Matrix2c m;
    m << x, r, r, 1.0 - x;
    return m;
}

bool check_generic_position(const HalmosForm& form) {
    return form.d0 == 0 && form.d1 == 0 && form.d2 == 0 && form.d3 == 0;
}

bool check_generic_position(const ProjectionPair& pair, double tol_cluster) {
    return check_generic_position(decompose(pair, tol_cluster));
}

std::vector<double> symbol_samples(const HalmosForm& form) {
    std::vector<double> out = form.s;
    if (form.d0 > 0) out.push_back(0.0);
    if (form.d1 > 0) out.push_back(1.0);
    return out;
}

SymbolFunction evaluate_word_symbol(const SymbolWord& word, const std::vector<double>& samples) {
    SymbolFunction f;
    f.samples = samples;
    const Matrix2c p = symbol_of_p();
    for (double x : samples) {
        if (!(x >= 0.0 && x <= 1.0)) throw InvalidInput("evaluate_word_symbol: sample outside [0, 1]");
        const Matrix2c q = symbol_of_q(x);
        Matrix2c acc = Matrix2c::Zero();
        for (const auto& t : word.terms()) {
            Matrix2c prod = Matrix2c::Identity();
            for (char c : t.letters) prod = prod * (c == 'P' ? p : q);
            acc += t.coeff * prod;
        }
        f.values.push_back(acc);
    }
    return f;
}

IsomorphismReport verify_isomorphism(const SymbolWord& word, const ProjectionPair& pair,
                                     double tol_cluster) {
    const HalmosForm form = decompose(pair, tol_cluster);
    if (!check_generic_position(form))
        throw InvalidInput("verify_isomorphism: pair is not in generic position");
    IsomorphismReport rep;
    rep.samples = form.s;
    rep.matrix_norm = operator_norm(evaluate_word_matrix(word, pair.P, pair.Q));
    const SymbolFunction f = evaluate_word_symbol(word, rep.samples);
    for (const auto& v : f.values) {
        Eigen::JacobiSVD<Matrix2c> svd(v);
        rep.symbol_sup_norm = std::max(rep.symbol_sup_norm, svd.singularValues()(0));
    }
    const double top = std::max(rep.matrix_norm, rep.symbol_sup_norm);
    rep.rel_error = top == 0.0 ? 0.0 : std::abs(rep.matrix_norm - rep.symbol_sup_norm) / top;
    return rep;
}

}  // namespace twoproj
