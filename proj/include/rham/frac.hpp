#pragma once

#include "rham/poly.hpp"

#include <map>

namespace rham {

namespace detail {

inline void check_param_monomial(const Monomial& m) {
    if (m.has_var()) throw Error("denominator must not involve x, y, z");
}

// Largest monomial dividing every term of p (restricted to den's symbols).
inline Monomial common_factor(const Poly& p, const Monomial& den) {
    Monomial g = den;
    for (const auto& [id, e] : den.entries()) {
        int lo = e;
        for (const auto& [m, c] : p.terms()) {
            lo = std::min(lo, m.deg(id));
            if (lo == 0) break;
        }
        g = g.with_deg(id, lo);
    }
    return g;
}

inline Poly divide_terms(const Poly& p, const Monomial& m) {
    Poly r;
    for (const auto& [mono, c] : p.terms()) {
        Monomial q;
        if (!mono.divide(m, &q)) throw Error("internal: inexact monomial division");
        r += Poly::monomial(c, q);
    }
    return r;
}

}  // namespace detail

/// num / den with den a coefficient-1 monomial in parameters only.
/// Canonical: zero is 0/1, and no symbol power divides both num and den.
/// Canonical forms are unique, so == is structural equality.
class PolyFrac {
  public:
    PolyFrac() = default;
    PolyFrac(int v) : num_(v) {}
    PolyFrac(const Rational& v) : num_(v) {}
    PolyFrac(Poly p) : num_(std::move(p)) {}

    PolyFrac(Poly num, Monomial den) : num_(std::move(num)), den_(std::move(den)) {
        detail::check_param_monomial(den_);
        canonicalize();
    }

    /// Builds num / den from a single-term den polynomial; its coefficient is
    /// folded into the numerator.
    static PolyFrac over(Poly num, const Poly& den) {
        if (den.is_zero()) throw Error("zero denominator");
        if (den.terms().size() != 1) throw Error("denominator must be a single monomial");
        const auto& [m, c] = *den.terms().begin();
        return PolyFrac(num * (Rational(1) / c), m);
    }

    const Poly& num() const { return num_; }
    const Monomial& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    bool is_constant() const { return den_.is_unit() && num_.is_constant(); }
    Rational constant_value() const {
        if (!is_constant()) throw Error("constant_value: fraction is not constant");
        return num_.constant_value();
    }

    /// The underlying polynomial; requires den = 1.
    Poly as_poly() const {
        if (!den_.is_unit()) throw Error("fraction has a nontrivial denominator");
        return num_;
    }

    friend PolyFrac operator+(const PolyFrac& a, const PolyFrac& b) {
        return PolyFrac(a.num_ * Poly::monomial(1, b.den_) + b.num_ * Poly::monomial(1, a.den_),
                        a.den_.times(b.den_));
    }

    friend PolyFrac operator-(const PolyFrac& a, const PolyFrac& b) { return a + (-b); }

    PolyFrac operator-() const {
        PolyFrac r(*this);
        r.num_ = -r.num_;
        return r;
    }

    friend PolyFrac operator*(const PolyFrac& a, const PolyFrac& b) {
        return PolyFrac(a.num_ * b.num_, a.den_.times(b.den_));
    }

    PolyFrac diff(SymId v) const { return PolyFrac(num_.diff(v), den_); }

    PolyFrac subst(const std::map<SymId, Poly>& map) const {
        Poly n = num_.subst(map);
        Poly d = Poly::monomial(1, den_).subst(map);
        if (d.is_zero()) throw Error("substitution sends a denominator to zero");
        return over(std::move(n), d);
    }

    double eval(const std::map<SymId, double>& vals) const {
        double d = Poly::monomial(1, den_).eval(vals);
        if (d == 0) throw Error("denominator evaluates to zero");
        return num_.eval(vals) / d;
    }

    Rational eval_exact(const std::map<SymId, Rational>& vals) const {
        Rational d = Poly::monomial(1, den_).eval_exact(vals);
        if (d == 0) throw Error("denominator evaluates to zero");
        return num_.eval_exact(vals) / d;
    }

    bool operator==(const PolyFrac& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const PolyFrac& o) const { return !(*this == o); }

  private:
    void canonicalize() {
        if (num_.is_zero()) {
            den_ = Monomial();
            return;
        }
        Monomial g = detail::common_factor(num_, den_);
        if (g.is_unit()) return;
        num_ = detail::divide_terms(num_, g);
        Monomial d;
        if (!den_.divide(g, &d)) throw Error("internal: bad cancellation");
        den_ = d;
    }

    Poly num_;
    Monomial den_;  // unit monomial means denominator 1
};

}  // namespace rham
