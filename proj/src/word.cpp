#include "twoproj/word.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "lexer.hpp"

namespace twoproj {

namespace {

std::string reduce_letters(std::string_view raw) {
    std::string out;
    for (char c : raw) {
        if (c == 'I') continue;
        if (!out.empty() && out.back() == c) continue;
        out.push_back(c);
    }
    return out;
}

}  // namespace

void SymbolWord::add_term(Complex coeff, std::string_view letters) {
    for (char c : letters)
        if (c != 'P' && c != 'Q' && c != 'I')
            throw InvalidInput(std::string("symbol word: unknown generator '") + c + "'");
    terms_.push_back({coeff, reduce_letters(letters)});
    normalize();
}

void SymbolWord::normalize() {
    std::map<std::string, Complex> merged;
    std::vector<std::string> order;
    for (const auto& t : terms_) {
        if (t.letters.size() > max_degree)
            throw InvalidInput("symbol word: term degree exceeds " + std::to_string(max_degree));
        auto [it, inserted] = merged.try_emplace(t.letters, Complex(0.0));
        if (inserted) order.push_back(t.letters);
        it->second += t.coeff;
    }
    terms_.clear();
    for (const auto& key : order) {
        const Complex c = merged[key];
        if (c != Complex(0.0)) terms_.push_back({c, key});
    }
}

SymbolWord SymbolWord::identity(Complex c) {
    SymbolWord w;
    w.add_term(c, "");
    return w;
}

SymbolWord SymbolWord::letter(char g) {
    SymbolWord w;
    w.add_term(1.0, std::string(1, g));
    return w;
}

std::size_t SymbolWord::degree() const {
    std::size_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.letters.size());
    return d;
}

SymbolWord SymbolWord::adjoint() const {
    SymbolWord w;
    for (const auto& t : terms_)
        w.terms_.push_back({std::conj(t.coeff), std::string(t.letters.rbegin(), t.letters.rend())});
    w.normalize();
    return w;
}

SymbolWord SymbolWord::operator+(const SymbolWord& o) const {
    SymbolWord w = *this;
    w.terms_.insert(w.terms_.end(), o.terms_.begin(), o.terms_.end());
    w.normalize();
    return w;
}

SymbolWord SymbolWord::operator*(Complex c) const {
    SymbolWord w = *this;
    for (auto& t : w.terms_) t.coeff *= c;
    w.normalize();
    return w;
}

SymbolWord SymbolWord::operator-(const SymbolWord& o) const { return *this + o * Complex(-1.0); }

SymbolWord SymbolWord::operator*(const SymbolWord& o) const {
    SymbolWord w;
    for (const auto& a : terms_)
        for (const auto& b : o.terms_) w.terms_.push_back({a.coeff * b.coeff, reduce_letters(a.letters + b.letters)});
    w.normalize();
    return w;
}

SymbolWord SymbolWord::pow(unsigned k) const {
    SymbolWord w = identity();
    for (unsigned i = 0; i < k; ++i) w = w * *this;
    return w;
}

std::string SymbolWord::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (i) os << " + ";
        const auto& t = terms_[i];
        os << '(' << t.coeff.real() << (t.coeff.imag() < 0 ? "" : "+") << t.coeff.imag() << "i)*"
           << (t.letters.empty() ? std::string("I") : t.letters);
    }
    return os.str();
}

namespace {

using detail::Lexer;
using detail::Token;

SymbolWord parse_expr(Lexer& lex);

SymbolWord parse_primary(Lexer& lex) {
    Complex c;
    if (detail::parse_scalar(lex, c)) return SymbolWord::identity(c);
    const Token t = lex.peek();
    if (t.kind == Token::Kind::letter) {
        if (t.ch == 'P' || t.ch == 'Q' || t.ch == 'I') {
            lex.take();
            return SymbolWord::letter(t.ch);
        }
        throw ParseError(std::string("unknown generator '") + t.ch + "' (expected P, Q or I)", t.pos);
    }
    if (lex.accept_op('(')) {
        SymbolWord w = parse_expr(lex);
        lex.expect_op(')');
        return w;
    }
    throw ParseError("expected a generator, number or '('", t.pos);
}

SymbolWord parse_power(Lexer& lex) {
    if (lex.accept_op('-')) return parse_power(lex) * Complex(-1.0);
    SymbolWord base = parse_primary(lex);
    if (lex.accept_op('^')) {
        const std::size_t pos = lex.peek().pos;
        const long k = detail::parse_exponent(lex, false);
        if (static_cast<std::size_t>(k) > SymbolWord::max_degree)
            throw ParseError("exponent too large", pos);
        return base.pow(static_cast<unsigned>(k));
    }
    return base;
}

SymbolWord parse_term(Lexer& lex) {
    SymbolWord w = parse_power(lex);
    for (;;) {
        if (lex.accept_op('*')) {
            w = w * parse_power(lex);
        } else if (lex.starts_primary()) {
            w = w * parse_power(lex);
        } else {
            return w;
        }
    }
}

SymbolWord parse_expr(Lexer& lex) {
    SymbolWord w;
    if (lex.accept_op('-'))
        w = parse_term(lex) * Complex(-1.0);
    else {
        lex.accept_op('+');
        w = parse_term(lex);
    }
    for (;;) {
        if (lex.accept_op('+'))
            w = w + parse_term(lex);
        else if (lex.accept_op('-'))
            w = w - parse_term(lex);
        else
            return w;
    }
}

}  // namespace

SymbolWord SymbolWord::parse(std::string_view text) {
    Lexer lex(text);
    SymbolWord w;
    try {
        w = parse_expr(lex);
    } catch (const ParseError&) {
        throw;
    } catch (const InvalidInput& e) {
        throw ParseError(e.what(), lex.peek().pos);
    }
    if (lex.peek().kind != Token::Kind::end) throw ParseError("unexpected trailing input", lex.peek().pos);
    return w;
}

CMatrix evaluate_word_matrix(const SymbolWord& word, const CMatrix& p, const CMatrix& q) {
    const Index n = p.rows();
    CMatrix out = CMatrix::Zero(n, n);
    for (const auto& t : word.terms()) {
        CMatrix prod = CMatrix::Identity(n, n);
        for (char c : t.letters) prod = prod * (c == 'P' ? p : q);
        out += t.coeff * prod;
    }
    return out;
}

}  // namespace twoproj
