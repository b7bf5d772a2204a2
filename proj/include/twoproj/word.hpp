#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "twoproj/core.hpp"

namespace twoproj {

/// Non-commutative polynomial in the generators P and Q (I is the empty product).
///
/// Each term stores its product as a string over {'P','Q'}; idempotency is
/// applied on construction (PP -> P, QQ -> Q), which is valid in every
/// representation of two projections.
class SymbolWord {
public:
    static constexpr std::size_t max_degree = 32;

    struct Term {
        Complex coeff;
        std::string letters;
    };

    SymbolWord() = default;

    static SymbolWord identity(Complex c = 1.0);
    static SymbolWord letter(char g);  ///< 'P', 'Q' or 'I'

    /// Parse the textual syntax, e.g. "P*Q*P - 0.25*I", "(P+Q-I)^2", "2i*PQ".
    static SymbolWord parse(std::string_view text);

    const std::vector<Term>& terms() const { return terms_; }
    std::size_t degree() const;

    SymbolWord adjoint() const;
    SymbolWord operator+(const SymbolWord& o) const;
    SymbolWord operator-(const SymbolWord& o) const;
    SymbolWord operator*(const SymbolWord& o) const;
    SymbolWord operator*(Complex c) const;
    SymbolWord pow(unsigned k) const;

    /// Canonical text form, e.g. "(1+0i)*PQP + (-0.25+0i)*I".
    std::string to_string() const;

    void add_term(Complex coeff, std::string_view letters);

private:
    void normalize();
    std::vector<Term> terms_;
};

/// Literal evaluation: each product multiplied left to right, I the identity.
CMatrix evaluate_word_matrix(const SymbolWord& word, const CMatrix& p, const CMatrix& q);

}  // namespace twoproj
