#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "qcurv/ratfun.hpp"

namespace qcurv {

namespace detail {

// Recursive descent over
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | '+' unary | power
//   power   := primary ('^' integer)?
//   primary := integer | 'q' | 'x' | '(' expr ')'
// evaluating directly into Q(q)(x).
class ExpressionParser {
public:
    explicit ExpressionParser(std::string_view text) : s_(text) {}

    RatFun parse() {
        skip_ws();
        if (pos_ >= s_.size()) throw SyntaxError("empty expression", pos_);
        RatFun v = expr();
        skip_ws();
        if (pos_ < s_.size()) throw SyntaxError(std::string("unexpected '") + s_[pos_] + "'", pos_);
        return v;
    }

private:
    RatFun expr() {
        RatFun v = term();
        for (;;) {
            skip_ws();
            if (accept('+'))
                v += term();
            else if (accept('-'))
                v -= term();
            else
                return v;
        }
    }

    RatFun term() {
        RatFun v = unary();
        for (;;) {
            skip_ws();
            if (accept('*')) {
                v *= unary();
            } else if (peek() == '/') {
                std::size_t at = pos_;
                ++pos_;
                RatFun d = unary();
                if (d.is_zero()) throw DivisionByZero("division by zero at position " + std::to_string(at));
                v /= d;
            } else {
                return v;
            }
        }
    }

    RatFun unary() {
        skip_ws();
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    RatFun power() {
        RatFun base = primary();
        skip_ws();
        if (!accept('^')) return base;
        skip_ws();
        std::size_t at = pos_;
        if (!std::isdigit(static_cast<unsigned char>(peek())))
            throw SyntaxError("exponent must be a nonnegative integer", at);
        Integer e = integer();
        if (e > 100000) throw SyntaxError("exponent too large", at);
        return base.pow(e.get_si());
    }

    RatFun primary() {
        skip_ws();
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) return RatFun(RatQ(Rational(integer())));
        if (c == 'q') {
            ++pos_;
            return RatFun(q_var());
        }
        if (c == 'x') {
            ++pos_;
            return x_var();
        }
        if (c == '(') {
            std::size_t open = pos_++;
            RatFun v = expr();
            skip_ws();
            if (!accept(')')) throw SyntaxError("unbalanced '(' opened at position " + std::to_string(open), pos_);
            return v;
        }
        if (pos_ >= s_.size()) throw SyntaxError("unexpected end of input", pos_);
        throw SyntaxError(std::string("unexpected '") + c + "'", pos_);
    }

    Integer integer() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return Integer(std::string(s_.substr(start, pos_ - start)), 10);
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    bool accept(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses an expression in q and x into a normalized element of Q(q)(x).
inline RatFun parse_ratfun(std::string_view text) { return detail::ExpressionParser(text).parse(); }

/// Parses an element of Q(q); rejects expressions involving x.
inline RatQ parse_ratq(std::string_view text) {
    RatFun f = parse_ratfun(text);
    if (!f.is_constant()) throw SyntaxError("expected an expression in q only", 0);
    return f.constant_value();
}

/// Parses an exact rational such as "3", "-1/2", "2^-40" or "0.125".
inline Rational parse_rational(std::string_view text) {
    std::string t(text);
    if (auto caret = t.find('^'); caret != std::string::npos) {
        Rational base = Rational::parse(t.substr(0, caret));
        long e = std::stol(t.substr(caret + 1));
        return base.pow(e);
    }
    if (auto dot = t.find('.'); dot != std::string::npos) {
        std::string digits = t.substr(0, dot) + t.substr(dot + 1);
        std::size_t frac_len = t.size() - dot - 1;
        return Rational(Integer(digits, 10), ipow(Integer(10), frac_len));
    }
    return Rational::parse(t);
}

}  // namespace qcurv
