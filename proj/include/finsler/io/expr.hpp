#pragma once

#include <cctype>
#include <string>

#include "finsler/ratfun/multipoly.hpp"

namespace finsler::io {

using ratfun::MultiPoly;

// Recursive-descent parser for the metric-coefficient expression syntax:
// integers, rationals "p/q", chart variables x1..xn, + - * ^ and
// parentheses. Exponents are nonnegative integers; the result is an exact
// polynomial over the chart (base variables only).
class ExprParser {
  public:
    ExprParser(std::string text, int n) : s_(std::move(text)), n_(n) {}

    MultiPoly parse() {
        pos_ = 0;
        MultiPoly p = expr_();
        skip_();
        if (pos_ != s_.size())
            throw ConfigError("unexpected trailing input in expression: '" + s_.substr(pos_) +
                              "'");
        return p;
    }

  private:
    MultiPoly expr_() {
        MultiPoly acc = term_();
        while (true) {
            skip_();
            if (peek_() == '+') {
                ++pos_;
                acc += term_();
            } else if (peek_() == '-') {
                ++pos_;
                acc -= term_();
            } else {
                return acc;
            }
        }
    }

    MultiPoly term_() {
        MultiPoly acc = factor_();
        while (true) {
            skip_();
            if (peek_() == '*') {
                ++pos_;
                acc *= factor_();
            } else {
                return acc;
            }
        }
    }

    MultiPoly factor_() {
        MultiPoly base = base_();
        skip_();
        if (peek_() == '^') {
            ++pos_;
            skip_();
            if (!std::isdigit(peek_()))
                throw ConfigError("exponent must be a nonnegative integer");
            unsigned e = 0;
            while (std::isdigit(peek_())) e = e * 10 + unsigned(s_[pos_++] - '0');
            return base.pow(e);
        }
        return base;
    }

    MultiPoly base_() {
        skip_();
        char c = peek_();
        if (c == '-') {
            ++pos_;
            return -base_();
        }
        if (c == '(') {
            ++pos_;
            MultiPoly p = expr_();
            skip_();
            if (peek_() != ')') throw ConfigError("missing ')' in expression");
            ++pos_;
            return p;
        }
        if (std::isdigit(c)) return number_();
        if (c == 'x') return variable_();
        throw ConfigError(std::string("unexpected character '") + c + "' in expression");
    }

    MultiPoly number_() {
        std::string num;
        while (std::isdigit(peek_())) num += s_[pos_++];
        skip_();
        if (peek_() == '/') {
            // rational literal p/q (no general division in this syntax)
            std::size_t save = pos_;
            ++pos_;
            skip_();
            if (std::isdigit(peek_())) {
                std::string den;
                while (std::isdigit(peek_())) den += s_[pos_++];
                return MultiPoly::constant(n_, n_, rat_parse(num + "/" + den));
            }
            pos_ = save;
        }
        return MultiPoly::constant(n_, n_, rat_parse(num));
    }

    MultiPoly variable_() {
        ++pos_; // consume 'x'
        if (!std::isdigit(peek_())) throw ConfigError("variable must be x1..xn");
        int idx = 0;
        while (std::isdigit(peek_())) idx = idx * 10 + (s_[pos_++] - '0');
        if (idx < 1 || idx > n_)
            throw ConfigError("variable x" + std::to_string(idx) + " outside the chart");
        return MultiPoly::variable(n_, n_, idx - 1);
    }

    char peek_() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    void skip_() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    std::string s_;
    int n_;
    std::size_t pos_ = 0;
};

inline MultiPoly parse_poly(const std::string& text, int n) {
    return ExprParser(text, n).parse();
}

} // namespace finsler::io
