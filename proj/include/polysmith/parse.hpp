#ifndef POLYSMITH_PARSE_HPP
#define POLYSMITH_PARSE_HPP

#include <cctype>
#include <string>

#include "polysmith/poly.hpp"

namespace polysmith {

// Recursive-descent parser for the expression grammar
//   expr   := term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := base ('^' natural)?
//   base   := variable | number | '(' expr ')' | '-' factor
//   number := digits ('/' digits)?
// Whitespace is ignored; implicit multiplication is a syntax error.
template <class F>
class Parser {
  public:
    Parser(std::string text, F field, VarSetPtr vars)
        : text_(std::move(text)), field_(std::move(field)), vars_(std::move(vars)) {}

    Poly<F> parse() {
        Poly<F> r = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) throw SyntaxError("unexpected trailing input", pos_);
        return r;
    }

  private:
    Poly<F> parse_expr() {
        Poly<F> r = parse_term();
        for (;;) {
            skip_ws();
            if (peek() == '+') {
                ++pos_;
                r = r + parse_term();
            } else if (peek() == '-') {
                ++pos_;
                r = r - parse_term();
            } else {
                return r;
            }
        }
    }

    Poly<F> parse_term() {
        Poly<F> r = parse_factor();
        for (;;) {
            skip_ws();
            char c = peek();
            if (c == '*') {
                ++pos_;
                r = r * parse_factor();
            } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '(' || c == '_') {
                throw SyntaxError("implicit multiplication is not allowed", pos_);
            } else {
                return r;
            }
        }
    }

    Poly<F> parse_factor() {
        Poly<F> b = parse_base();
        skip_ws();
        if (peek() == '^') {
            ++pos_;
            skip_ws();
            std::size_t start = pos_;
            if (!std::isdigit(static_cast<unsigned char>(peek())))
                throw SyntaxError("exponent must be a natural number", pos_);
            std::int64_t e = 0;
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                e = e * 10 + (peek() - '0');
                if (e > Monomial::kMaxExp) throw SyntaxError("exponent too large", start);
                ++pos_;
            }
            return b.pow(e);
        }
        return b;
    }

    Poly<F> parse_base() {
        skip_ws();
        char c = peek();
        if (c == '\0') throw SyntaxError("unexpected end of input", pos_);
        if (c == '(') {
            ++pos_;
            Poly<F> r = parse_expr();
            skip_ws();
            if (peek() != ')') throw SyntaxError("expected ')'", pos_);
            ++pos_;
            return r;
        }
        if (c == '-') {
            ++pos_;
            return -parse_factor();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_variable();
        throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
    }

    Poly<F> parse_number() {
        std::string num = read_digits();
        std::string den = "1";
        if (peek() == '/') {
            ++pos_;
            if (!std::isdigit(static_cast<unsigned char>(peek())))
                throw SyntaxError("expected digits after '/'", pos_);
            den = read_digits();
        }
        return Poly<F>::constant(field_, vars_, field_.from_decimal(num, den));
    }

    Poly<F> parse_variable() {
        std::size_t start = pos_;
        std::string name;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
            name.push_back(peek());
            ++pos_;
        }
        auto idx = vars_->index_of(name);
        if (!idx) throw UnknownVariableError(name, start);
        return Poly<F>::variable(field_, vars_, *idx);
    }

    std::string read_digits() {
        std::string s;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            s.push_back(peek());
            ++pos_;
        }
        return s;
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    std::string text_;
    F field_;
    VarSetPtr vars_;
    std::size_t pos_ = 0;
};

template <class F>
Poly<F> parse(const std::string& text, const VarSetPtr& vars, const F& field) {
    return Parser<F>(text, field, vars).parse();
}

}  // namespace polysmith

#endif
