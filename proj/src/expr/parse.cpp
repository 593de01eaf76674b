#include "pwamb/chart.hpp"
#include "pwamb/error.hpp"

#include <cctype>
#include <string>

namespace pwamb {
namespace {

// Recursive descent over
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := ('-'|'+') unary | power
//   power   := primary ('^' exponent)?
//   exponent:= ['-'] integer | '(' ['-'] integer ')'
//   primary := number | coordinate | 'ln' '(' coordinate ')' | '(' expr ')'
class Parser {
public:
    Parser(std::string_view text, const Chart& chart) : text_(text), chart_(chart) {}

    Expr parse() {
        Expr e = expr();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    Expr expr() {
        Expr e = term();
        while (true) {
            if (accept('+')) e += term();
            else if (accept('-')) e -= term();
            else return e;
        }
    }

    Expr term() {
        Expr e = unary();
        while (true) {
            if (accept('*')) {
                e *= unary();
            } else if (accept('/')) {
                std::size_t at = pos_;
                Expr d = unary();
                if (d.is_zero()) throw ParseError("division by zero", at);
                e /= d;
            } else {
                return e;
            }
        }
    }

    Expr unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (!accept('^')) return base;
        bool paren = accept('(');
        bool negative = accept('-');
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer exponent");
        if (pos_ - start > 6) fail("exponent too large");
        int e = std::stoi(std::string(text_.substr(start, pos_ - start)));
        if (paren) expect(')');
        if (negative && base.is_zero()) throw ParseError("zero raised to a negative power", start);
        return base.pow(negative ? -e : e);
    }

    Expr primary() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            std::string name = identifier();
            if (name == "ln") {
                expect('(');
                skip_space();
                std::size_t arg_at = pos_;
                std::string arg = identifier();
                if (arg.empty()) fail("expected coordinate inside ln()");
                expect(')');
                auto idx = chart_.index_of(arg);
                if (!idx) throw ParseError("unknown coordinate '" + arg + "'", arg_at);
                SymbolId id = chart_.id(*idx);
                if (!chart_.is_positive(id))
                    throw ParseError("ln of coordinate '" + arg + "' which is not declared positive", arg_at);
                return Expr::ln(id);
            }
            auto idx = chart_.index_of(name);
            if (!idx) throw ParseError("unknown coordinate '" + name + "'", start);
            return chart_.coord(*idx);
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    std::string identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    Expr number() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
        std::string lit(text_.substr(start, pos_ - start));
        if (lit == ".") throw ParseError("malformed number", start);
        return Expr(parse_rational(lit));
    }

    std::string_view text_;
    const Chart& chart_;
    std::size_t pos_ = 0;
};

} // namespace

Rational parse_rational(std::string_view text) {
    std::string s(text);
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rational q(parse_rational(s.substr(0, slash)) / parse_rational(s.substr(slash + 1)));
        return q;
    }
    bool negative = !s.empty() && s[0] == '-';
    if (negative) s.erase(0, 1);
    auto dot = s.find('.');
    mpz_class num, den = 1;
    std::string digits = s;
    if (dot != std::string::npos) {
        digits = s.substr(0, dot) + s.substr(dot + 1);
        for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
    }
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("malformed rational '" + std::string(text) + "'", 0);
    num.set_str(digits, 10);
    Rational q(num, den);
    q.canonicalize();
    return negative ? Rational(-q) : q;
}

Expr parse_expr(std::string_view text, const Chart& chart) { return Parser(text, chart).parse(); }

} // namespace pwamb
