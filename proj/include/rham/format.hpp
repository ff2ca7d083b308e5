#pragma once

#include "rham/frac.hpp"
#include "rham/poly.hpp"
#include "rham/vec3.hpp"

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace rham {

class ParseError : public Error {
  public:
    ParseError(const std::string& msg, size_t pos)
        : Error("parse error at " + std::to_string(pos) + ": " + msg), pos_(pos) {}
    size_t pos() const { return pos_; }

  private:
    size_t pos_;
};

inline std::string to_string(const Rational& q) { return q.str(); }

/// Factors in alphabetical symbol order, joined with '*'; "g*y^2" style.
inline std::string to_string(const Monomial& m) {
    std::vector<std::pair<std::string, int>> fs;
    for (const auto& [id, e] : m.entries()) fs.emplace_back(sym_name(id), e);
    std::sort(fs.begin(), fs.end());
    std::string out;
    for (const auto& [name, e] : fs) {
        if (!out.empty()) out += "*";
        out += name;
        if (e > 1) out += "^" + std::to_string(e);
    }
    return out;
}

/// Canonical text form: terms in the monomial order (leading first), signs
/// folded into the joiners, unit coefficients suppressed. Zero prints as "0".
inline std::string to_string(const Poly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        bool neg = c < 0;
        Rational a = neg ? Rational(-c) : c;
        if (first)
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        if (m.is_unit())
            out += to_string(a);
        else if (a == 1)
            out += to_string(m);
        else
            out += to_string(a) + "*" + to_string(m);
        first = false;
    }
    return out;
}

inline std::string to_string(const PolyFrac& f) {
    if (f.den().is_unit()) return to_string(f.num());
    return "(" + to_string(f.num()) + ") / (" + to_string(f.den()) + ")";
}

inline std::string to_string(const PolyVec3& v) {
    return "(" + to_string(v.x) + ", " + to_string(v.y) + ", " + to_string(v.z) + ")";
}

inline std::string to_string(const FracVec3& v) {
    if (v.den().is_unit()) return to_string(v.num());
    return to_string(v.num()) + " / (" + to_string(v.den()) + ")";
}

inline std::string to_string(const PolyMat3& m) {
    std::string out = "[";
    for (int i = 0; i < 3; ++i) {
        if (i) out += "; ";
        for (int j = 0; j < 3; ++j) {
            if (j) out += ", ";
            out += to_string(m.at(i, j));
        }
    }
    return out + "]";
}

inline std::string to_string(const FracMat3& m) {
    if (m.den().is_unit()) return to_string(m.num());
    return to_string(m.num()) + " / (" + to_string(m.den()) + ")";
}

namespace detail {

class PolyParser {
  public:
    explicit PolyParser(std::string_view s) : s_(s) {}

    Poly parse() {
        skip_ws();
        if (eof()) fail("empty expression");
        Poly acc;
        bool first = true;
        while (true) {
            skip_ws();
            int sign = 1;
            if (first) {
                if (accept('-'))
                    sign = -1;
                else
                    accept('+');
            } else {
                if (accept('-'))
                    sign = -1;
                else if (accept('+'))
                    sign = 1;
                else
                    fail("expected '+' or '-'");
            }
            Poly t = parse_term();
            acc += sign < 0 ? -t : t;
            first = false;
            skip_ws();
            if (eof()) break;
            if (peek() != '+' && peek() != '-') fail("unexpected character");
        }
        return acc;
    }

  private:
    bool eof() const { return pos_ >= s_.size(); }
    char peek() const { return s_[pos_]; }
    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }
    bool accept(char c) {
        if (!eof() && peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    Poly parse_term() {
        Poly t(1);
        while (true) {
            skip_ws();
            if (eof()) fail("expected a number or symbol");
            char c = peek();
            if (std::isdigit(static_cast<unsigned char>(c))) {
                t *= Poly(parse_number());
            } else if (std::isalpha(static_cast<unsigned char>(c))) {
                t *= parse_symbol_power();
            } else {
                fail("expected a number or symbol");
            }
            skip_ws();
            if (!accept('*')) break;
        }
        return t;
    }

    Rational parse_number() {
        BigInt n = parse_digits();
        size_t save = pos_;
        skip_ws();
        if (accept('/')) {
            skip_ws();
            if (eof() || !std::isdigit(static_cast<unsigned char>(peek())))
                fail("expected a denominator");
            size_t dpos = pos_;
            BigInt d = parse_digits();
            if (d == 0) throw ParseError("zero denominator in coefficient", dpos);
            return Rational(n, d);
        }
        pos_ = save;
        return Rational(n);
    }

    BigInt parse_digits() {
        std::string digits;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
            digits += peek();
            ++pos_;
        }
        if (digits.empty()) fail("expected a number");
        return BigInt(digits);
    }

    Poly parse_symbol_power() {
        size_t start = pos_;
        std::string name;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
            name += peek();
            ++pos_;
        }
        if (!SymbolTable::instance().known(name))
            throw ParseError("unknown symbol '" + name + "'", start);
        SymId id = sym(name);
        int e = 1;
        size_t save = pos_;
        skip_ws();
        if (accept('^')) {
            skip_ws();
            e = parse_exponent();
        } else {
            pos_ = save;
        }
        return Poly::monomial(1, Monomial::of(id, e));
    }

    int parse_exponent() {
        size_t start = pos_;
        std::string digits;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
            digits += peek();
            ++pos_;
        }
        if (digits.empty()) throw ParseError("expected an exponent", start);
        if (digits.size() > 5) throw ParseError("exponent too large", start);
        int e = std::stoi(digits);
        if (e < 1) throw ParseError("exponent must be positive", start);
        return e;
    }

    std::string_view s_;
    size_t pos_ = 0;
};

}  // namespace detail

/// Parses the polynomial grammar: terms joined by + and -, factors joined by
/// '*', rational coefficients "p" or "p/q", powers "sym^e". Symbol names must
/// come from the fixed spelling table. Throws ParseError on malformed input.
inline Poly parse_poly(std::string_view text) { return detail::PolyParser(text).parse(); }

}  // namespace rham
