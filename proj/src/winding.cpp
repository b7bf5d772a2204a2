#include <cmath>
#include <numbers>
#include <sstream>

#include "lexer.hpp"
#include "twoproj/locality.hpp"

namespace twoproj {

WindingResult winding_number(std::span<const Complex> samples) {
    if (samples.size() < 3) throw InvalidInput("winding: need at least 3 samples");
    for (std::size_t j = 0; j < samples.size(); ++j) {
        if (!(std::abs(samples[j]) >= 1e-6)) {
            std::ostringstream os;
            os << "winding: symbol nearly vanishes at sample " << j << " (|phi| = " << std::abs(samples[j])
               << ")";
            throw NumericalError(os.str(), std::abs(samples[j]));
        }
    }
    WindingResult res;
    double total = 0.0;
    for (std::size_t j = 0; j < samples.size(); ++j) {
        const Complex a = samples[j];
        const Complex b = samples[(j + 1) % samples.size()];
        const double step = std::arg(b * std::conj(a));
        res.max_step = std::max(res.max_step, std::abs(step));
        total += step;
    }
    if (res.max_step > 0.5 * std::numbers::pi)
        throw NumericalError("winding: grid too coarse to unwrap the phase", res.max_step);
    res.raw = total / (2.0 * std::numbers::pi);
    res.winding = std::lround(res.raw);
    const double residual = std::abs(res.raw - static_cast<double>(res.winding));
    if (residual > 0.1) throw NumericalError("winding: excessive rounding residual (grid too coarse)", residual);
    return res;
}

long winding_index(std::span<const Complex> samples) { return winding_number(samples).winding; }

struct SymbolExpr::Node {
    enum class Op { constant, var, add, sub, mul, div, neg, pow } op = Op::constant;
    Complex value;
    long exponent = 0;
    std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const SymbolExpr::Node>;
using Op = SymbolExpr::Node::Op;
using detail::Lexer;
using detail::Token;

NodePtr make(Op op, NodePtr l = nullptr, NodePtr r = nullptr) {
    auto n = std::make_shared<SymbolExpr::Node>();
    n->op = op;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
}

NodePtr parse_sum(Lexer& lex);

NodePtr parse_primary(Lexer& lex) {
    Complex c;
    if (detail::parse_scalar(lex, c)) {
        auto n = std::make_shared<SymbolExpr::Node>();
        n->value = c;
        return n;
    }
    const Token t = lex.peek();
    if (t.kind == Token::Kind::letter && t.ch == 'z') {
        lex.take();
        return make(Op::var);
    }
    if (lex.accept_op('(')) {
        NodePtr e = parse_sum(lex);
        lex.expect_op(')');
        return e;
    }
    throw ParseError("expected a number, 'z' or '('", t.pos);
}

NodePtr parse_factor(Lexer& lex) {
    if (lex.accept_op('-')) return make(Op::neg, parse_factor(lex));
    NodePtr base = parse_primary(lex);
    if (lex.accept_op('^')) {
        auto n = std::make_shared<SymbolExpr::Node>();
        n->op = Op::pow;
        n->lhs = base;
        n->exponent = detail::parse_exponent(lex, true);
        return n;
    }
    return base;
}

NodePtr parse_product(Lexer& lex) {
    NodePtr acc = parse_factor(lex);
    for (;;) {
        if (lex.accept_op('*'))
            acc = make(Op::mul, acc, parse_factor(lex));
        else if (lex.accept_op('/'))
            acc = make(Op::div, acc, parse_factor(lex));
        else if (lex.starts_primary())
            acc = make(Op::mul, acc, parse_factor(lex));
        else
            return acc;
    }
}

NodePtr parse_sum(Lexer& lex) {
    NodePtr acc;
    if (lex.accept_op('-'))
        acc = make(Op::neg, parse_product(lex));
    else {
        lex.accept_op('+');
        acc = parse_product(lex);
    }
    for (;;) {
        if (lex.accept_op('+'))
            acc = make(Op::add, acc, parse_product(lex));
        else if (lex.accept_op('-'))
            acc = make(Op::sub, acc, parse_product(lex));
        else
            return acc;
    }
}

Complex eval(const SymbolExpr::Node& n, Complex z) {
    switch (n.op) {
        case Op::constant: return n.value;
        case Op::var: return z;
        case Op::add: return eval(*n.lhs, z) + eval(*n.rhs, z);
        case Op::sub: return eval(*n.lhs, z) - eval(*n.rhs, z);
        case Op::mul: return eval(*n.lhs, z) * eval(*n.rhs, z);
        case Op::div: return eval(*n.lhs, z) / eval(*n.rhs, z);
        case Op::neg: return -eval(*n.lhs, z);
        case Op::pow: {
            const Complex b = eval(*n.lhs, z);
            Complex acc(1.0);
            for (long k = 0; k < std::labs(n.exponent); ++k) acc *= b;
            return n.exponent < 0 ? Complex(1.0) / acc : acc;
        }
    }
    return {};
}

}  // namespace

SymbolExpr SymbolExpr::parse(std::string_view text) {
    Lexer lex(text);
    SymbolExpr e;
    e.root_ = parse_sum(lex);
    if (lex.peek().kind != Token::Kind::end) throw ParseError("unexpected trailing input", lex.peek().pos);
    return e;
}

Complex SymbolExpr::operator()(Complex z) const { return eval(*root_, z); }

std::vector<Complex> SymbolExpr::sample_circle(Index n) const {
    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(n));
    for (Index k = 0; k < n; ++k)
        out.push_back((*this)(std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) /
                                                  static_cast<double>(n))));
    return out;
}

}  // namespace twoproj
