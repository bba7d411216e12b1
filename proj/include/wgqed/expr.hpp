#pragma once

// Small arithmetic evaluator for parameter expressions such as "2g1",
// "1.5g1+2g2", "5(g1+g2)" or "30/G". Juxtaposition means multiplication.

#include <cctype>
#include <cstdlib>
#include <map>
#include <string>
#include <string_view>

#include "wgqed/errors.hpp"

namespace wgqed {

using Variables = std::map<std::string, double, std::less<>>;

class ExpressionError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

namespace detail {

class ExprParser {
public:
    ExprParser(std::string_view text, const Variables& vars) : s_(text), vars_(vars) {}

    double parse() {
        const double v = sum();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    double sum() {
        double v = product();
        for (;;) {
            skip_ws();
            if (accept('+')) {
                v += product();
            } else if (accept('-')) {
                v -= product();
            } else {
                return v;
            }
        }
    }

    double product() {
        double v = unary();
        for (;;) {
            skip_ws();
            if (accept('*')) {
                v *= unary();
            } else if (accept('/')) {
                v /= unary();
            } else if (pos_ < s_.size() && starts_operand(s_[pos_])) {
                v *= unary();
            } else {
                return v;
            }
        }
    }

    double unary() {
        skip_ws();
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return primary();
    }

    double primary() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        const char c = s_[pos_];
        if (accept('(')) {
            const double v = sum();
            skip_ws();
            if (!accept(')')) fail("missing ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return variable();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    double number() {
        // strtod would swallow "2e" in "2eg"; scan the literal by hand first.
        std::size_t end = pos_;
        auto digits = [&] {
            while (end < s_.size() && std::isdigit(static_cast<unsigned char>(s_[end]))) ++end;
        };
        digits();
        if (end < s_.size() && s_[end] == '.') {
            ++end;
            digits();
        }
        if (end < s_.size() && (s_[end] == 'e' || s_[end] == 'E')) {
            std::size_t e = end + 1;
            if (e < s_.size() && (s_[e] == '+' || s_[e] == '-')) ++e;
            if (e < s_.size() && std::isdigit(static_cast<unsigned char>(s_[e]))) {
                end = e;
                digits();
            }
        }
        const std::string literal(s_.substr(pos_, end - pos_));
        char* stop = nullptr;
        const double v = std::strtod(literal.c_str(), &stop);
        if (stop != literal.c_str() + literal.size()) fail("bad number '" + literal + "'");
        pos_ = end;
        return v;
    }

    double variable() {
        std::size_t end = pos_;
        while (end < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_')) {
            ++end;
        }
        const std::string_view name = s_.substr(pos_, end - pos_);
        const auto it = vars_.find(name);
        if (it == vars_.end()) fail("unknown variable '" + std::string(name) + "'");
        pos_ = end;
        return it->second;
    }

    static bool starts_operand(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '(' || c == '.';
    }

    bool accept(char c) {
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ExpressionError("expression '" + std::string(s_) + "': " + what);
    }

    std::string_view s_;
    const Variables& vars_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline double evaluate_expression(std::string_view text, const Variables& vars = {}) {
    return detail::ExprParser(text, vars).parse();
}

}  // namespace wgqed
