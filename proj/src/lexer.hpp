#pragma once

#include <cctype>
#include <charconv>
#include <string>
#include <string_view>

#include "twoproj/core.hpp"

namespace twoproj::detail {

/// Tokenizer shared by the word and symbol-expression grammars.
struct Token {
    enum class Kind { end, number, letter, op };
    Kind kind = Kind::end;
    double value = 0.0;   ///< number
    char ch = '\0';       ///< letter or operator character
    std::size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

    bool accept_op(char c) {
        if (tok_.kind == Token::Kind::op && tok_.ch == c) {
            advance();
            return true;
        }
        return false;
    }

    void expect_op(char c) {
        if (!accept_op(c)) throw ParseError(std::string("expected '") + c + "'", tok_.pos);
    }

    bool starts_primary() const {
        return tok_.kind == Token::Kind::number || tok_.kind == Token::Kind::letter ||
               (tok_.kind == Token::Kind::op && tok_.ch == '(');
    }

private:
    void advance() {
        while (at_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[at_]))) ++at_;
        tok_ = Token{};
        tok_.pos = at_;
        if (at_ >= text_.size()) return;
        const char c = text_[at_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t end = at_;
            while (end < text_.size() &&
                   (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.'))
                ++end;
            if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
                std::size_t e = end + 1;
                if (e < text_.size() && (text_[e] == '+' || text_[e] == '-')) ++e;
                if (e < text_.size() && std::isdigit(static_cast<unsigned char>(text_[e]))) {
                    while (e < text_.size() && std::isdigit(static_cast<unsigned char>(text_[e]))) ++e;
                    end = e;
                }
            }
            double v = 0.0;
            const auto res = std::from_chars(text_.data() + at_, text_.data() + end, v);
            if (res.ec != std::errc() || res.ptr != text_.data() + end)
                throw ParseError("malformed number", at_);
            tok_.kind = Token::Kind::number;
            tok_.value = v;
            at_ = end;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            tok_.kind = Token::Kind::letter;
            tok_.ch = c;
            ++at_;
            return;
        }
        if (std::string_view("+-*/^(),").find(c) != std::string_view::npos) {
            tok_.kind = Token::Kind::op;
            tok_.ch = c;
            ++at_;
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", at_);
    }

    std::string_view text_;
    std::size_t at_ = 0;
    Token tok_;
};

/// Number optionally followed by the imaginary unit: "2", "2i", "i".
inline bool parse_scalar(Lexer& lex, Complex& out) {
    const Token& t = lex.peek();
    if (t.kind == Token::Kind::number) {
        const double v = lex.take().value;
        if (lex.peek().kind == Token::Kind::letter && (lex.peek().ch == 'i' || lex.peek().ch == 'j')) {
            lex.take();
            out = Complex(0.0, v);
        } else {
            out = Complex(v, 0.0);
        }
        return true;
    }
    if (t.kind == Token::Kind::letter && (t.ch == 'i' || t.ch == 'j')) {
        lex.take();
        out = Complex(0.0, 1.0);
        return true;
    }
    return false;
}

inline long parse_exponent(Lexer& lex, bool allow_negative) {
    bool neg = false;
    if (allow_negative && lex.accept_op('-')) neg = true;
    const Token t = lex.take();
    if (t.kind != Token::Kind::number || t.value != static_cast<double>(static_cast<long>(t.value)) ||
        t.value < 0 || t.value > 1000)
        throw ParseError("exponent must be a non-negative integer literal", t.pos);
    return neg ? -static_cast<long>(t.value) : static_cast<long>(t.value);
}

}  // namespace twoproj::detail
