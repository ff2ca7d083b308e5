#pragma once

#include "rham/rational.hpp"
#include "rham/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace rham {

// Refuse to build polynomials past this many terms.
inline constexpr size_t kMaxPolyTerms = 1000000;

/// Sparse power product: (symbol, exponent) pairs sorted by symbol id,
/// exponents strictly positive. The empty monomial is 1.
class Monomial {
  public:
    using Entry = std::pair<SymId, int>;

    Monomial() = default;

    static Monomial of(SymId s, int e = 1) {
        Monomial m;
        if (e < 0) throw Error("Monomial::of: negative exponent");
        if (e > 0) m.e_.emplace_back(s, e);
        return m;
    }

    bool is_unit() const { return e_.empty(); }

    int deg(SymId s) const {
        for (const auto& [id, e] : e_)
            if (id == s) return e;
        return 0;
    }

    int total_degree() const {
        int d = 0;
        for (const auto& [id, e] : e_) d += e;
        return d;
    }

    const std::vector<Entry>& entries() const { return e_; }

    bool has_var() const {
        for (const auto& [id, e] : e_)
            if (is_var(id)) return true;
        return false;
    }

    Monomial times(const Monomial& o) const {
        Monomial r;
        size_t i = 0, j = 0;
        while (i < e_.size() || j < o.e_.size()) {
            if (j == o.e_.size() || (i < e_.size() && e_[i].first < o.e_[j].first)) {
                r.e_.push_back(e_[i++]);
            } else if (i == e_.size() || o.e_[j].first < e_[i].first) {
                r.e_.push_back(o.e_[j++]);
            } else {
                r.e_.emplace_back(e_[i].first, e_[i].second + o.e_[j].second);
                ++i, ++j;
            }
        }
        return r;
    }

    /// this / o, or false if o does not divide this.
    bool divide(const Monomial& o, Monomial* out) const {
        Monomial r;
        size_t i = 0;
        for (const auto& [id, e] : o.e_) {
            while (i < e_.size() && e_[i].first < id) r.e_.push_back(e_[i++]);
            if (i == e_.size() || e_[i].first != id || e_[i].second < e) return false;
            if (e_[i].second > e) r.e_.emplace_back(id, e_[i].second - e);
            ++i;
        }
        while (i < e_.size()) r.e_.push_back(e_[i++]);
        if (out) *out = std::move(r);
        return true;
    }

    Monomial with_deg(SymId s, int e) const {
        Monomial r;
        bool placed = false;
        for (const auto& [id, ex] : e_) {
            if (id == s) {
                if (e > 0) r.e_.emplace_back(id, e);
                placed = true;
            } else {
                r.e_.emplace_back(id, ex);
            }
        }
        if (!placed && e > 0) {
            r.e_.emplace_back(s, e);
            std::sort(r.e_.begin(), r.e_.end());
        }
        return r;
    }

    // Graded lexicographic: total degree first, ties broken by the symbol
    // precedence (lower id = higher precedence). Returns +1 if a > b.
    static int cmp(const Monomial& a, const Monomial& b) {
        int da = a.total_degree(), db = b.total_degree();
        if (da != db) return da > db ? 1 : -1;
        size_t i = 0, j = 0;
        while (i < a.e_.size() && j < b.e_.size()) {
            if (a.e_[i].first != b.e_[j].first)
                return a.e_[i].first < b.e_[j].first ? 1 : -1;
            if (a.e_[i].second != b.e_[j].second)
                return a.e_[i].second > b.e_[j].second ? 1 : -1;
            ++i, ++j;
        }
        if (i < a.e_.size()) return 1;
        if (j < b.e_.size()) return -1;
        return 0;
    }

    bool operator==(const Monomial& o) const { return e_ == o.e_; }

  private:
    std::vector<Entry> e_;
};

struct MonomialGreater {
    bool operator()(const Monomial& a, const Monomial& b) const { return Monomial::cmp(a, b) > 0; }
};

/// Multivariate polynomial with exact rational coefficients, stored as a
/// sorted sparse term map (leading term first). Always canonical: no zero
/// coefficients, and the radical rewrite s^2 -> 1 - D^2 applied.
class Poly {
  public:
    using Terms = std::map<Monomial, Rational, MonomialGreater>;

    Poly() = default;
    Poly(int v) : Poly(Rational(v)) {}
    Poly(const Rational& v) {
        if (v != 0) t_.emplace(Monomial(), v);
    }

    static Poly var(SymId s) { return monomial(1, Monomial::of(s)); }

    static Poly monomial(const Rational& c, const Monomial& m) {
        Poly p;
        if (c != 0) p.t_.emplace(m, c);
        p.reduce_radical();
        return p;
    }

    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    bool is_constant() const {
        return t_.empty() || (t_.size() == 1 && t_.begin()->first.is_unit());
    }

    Rational constant_value() const {
        if (t_.empty()) return Rational(0);
        if (!is_constant()) throw Error("constant_value: polynomial is not constant");
        return t_.begin()->second;
    }

    int degree() const {
        int d = 0;
        for (const auto& [m, c] : t_) d = std::max(d, m.total_degree());
        return d;
    }

    size_t term_count() const { return t_.size(); }

    Poly& operator+=(const Poly& o) {
        for (const auto& [m, c] : o.t_) add_term(m, c);
        check_size();
        return *this;
    }

    Poly& operator-=(const Poly& o) {
        for (const auto& [m, c] : o.t_) add_term(m, -c);
        check_size();
        return *this;
    }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

    Poly operator-() const {
        Poly r(*this);
        for (auto& [m, c] : r.t_) c = -c;
        return r;
    }

    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r;
        for (const auto& [ma, ca] : a.t_) {
            for (const auto& [mb, cb] : b.t_) r.add_term(ma.times(mb), ca * cb);
            r.check_size();
        }
        r.reduce_radical();
        r.check_size();
        return r;
    }

    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    Poly pow(int k) const {
        if (k < 0) throw Error("Poly::pow: negative exponent");
        Poly r(1);
        Poly base(*this);
        while (k > 0) {
            if (k & 1) r = r * base;
            k >>= 1;
            if (k) base = base * base;
        }
        return r;
    }

    /// Partial derivative. Only the dynamical variables x, y, z are admissible.
    Poly diff(SymId v) const {
        if (!is_var(v))
            throw Error("cannot differentiate with respect to parameter '" + sym_name(v) + "'");
        Poly r;
        for (const auto& [m, c] : t_) {
            int e = m.deg(v);
            if (e == 0) continue;
            r.add_term(m.with_deg(v, e - 1), c * e);
        }
        return r;
    }

    Rational eval_exact(const std::map<SymId, Rational>& vals) const {
        Rational acc(0);
        for (const auto& [m, c] : t_) {
            Rational t = c;
            for (const auto& [id, e] : m.entries()) {
                auto it = vals.find(id);
                if (it == vals.end())
                    throw Error("unbound symbol '" + sym_name(id) + "' in evaluation");
                t *= rational_pow(it->second, e);
            }
            acc += t;
        }
        return acc;
    }

    double eval(const std::map<SymId, double>& vals) const {
        double acc = 0;
        for (const auto& [m, c] : t_) {
            double t = to_double(c);
            for (const auto& [id, e] : m.entries()) {
                auto it = vals.find(id);
                if (it == vals.end())
                    throw Error("unbound symbol '" + sym_name(id) + "' in evaluation");
                double v = it->second, p = 1;
                for (int k = 0; k < e; ++k) p *= v;
                t *= p;
            }
            acc += t;
        }
        return acc;
    }

    /// Simultaneous substitution; unbound symbols pass through.
    Poly subst(const std::map<SymId, Poly>& map) const {
        Poly r;
        for (const auto& [m, c] : t_) {
            Poly t(c);
            for (const auto& [id, e] : m.entries()) {
                auto it = map.find(id);
                Poly base = (it != map.end()) ? it->second : var(id);
                t = t * base.pow(e);
            }
            r += t;
        }
        return r;
    }

    std::set<SymId> symbols() const {
        std::set<SymId> s;
        for (const auto& [m, c] : t_)
            for (const auto& [id, e] : m.entries()) s.insert(id);
        return s;
    }

    bool operator==(const Poly& o) const { return t_ == o.t_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

  private:
    void add_term(const Monomial& m, const Rational& c) {
        if (c == 0) return;
        auto [it, fresh] = t_.try_emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) t_.erase(it);
        }
    }

    // s is an adjoined square root: rewrite s^2 -> 1 - D^2 wherever it appears.
    void reduce_radical() {
        const SymId s = radical_sym();
        bool hit = false;
        for (const auto& [m, c] : t_)
            if (m.deg(s) >= 2) {
                hit = true;
                break;
            }
        if (!hit) return;
        Poly sq = Poly(1) - var(delta_sym()) * var(delta_sym());
        Poly out;
        for (const auto& [m, c] : t_) {
            int e = m.deg(s);
            if (e < 2) {
                out.add_term(m, c);
            } else {
                Poly f = monomial(c, m.with_deg(s, e % 2)) * sq.pow(e / 2);
                out += f;
            }
        }
        t_ = std::move(out.t_);
    }

    void check_size() const {
        if (t_.size() > kMaxPolyTerms) throw Error("polynomial exceeds the term limit");
    }

    Terms t_;
};

}  // namespace rham
