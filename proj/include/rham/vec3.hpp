#pragma once

#include "rham/frac.hpp"
#include "rham/poly.hpp"

#include <array>
#include <utility>

namespace rham {

struct PolyVec3 {
    Poly x, y, z;

    PolyVec3() = default;
    PolyVec3(Poly a, Poly b, Poly c) : x(std::move(a)), y(std::move(b)), z(std::move(c)) {}

    const Poly& operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    Poly& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

    bool is_zero() const { return x.is_zero() && y.is_zero() && z.is_zero(); }

    friend PolyVec3 operator+(const PolyVec3& a, const PolyVec3& b) {
        return {a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend PolyVec3 operator-(const PolyVec3& a, const PolyVec3& b) {
        return {a.x - b.x, a.y - b.y, a.z - b.z};
    }
    PolyVec3 operator-() const { return {-x, -y, -z}; }
    friend PolyVec3 operator*(const Poly& c, const PolyVec3& v) {
        return {c * v.x, c * v.y, c * v.z};
    }

    PolyVec3 subst(const std::map<SymId, Poly>& m) const {
        return {x.subst(m), y.subst(m), z.subst(m)};
    }

    bool operator==(const PolyVec3& o) const { return x == o.x && y == o.y && z == o.z; }
    bool operator!=(const PolyVec3& o) const { return !(*this == o); }
};

inline PolyVec3 grad(const Poly& p) { return {p.diff(kSymX), p.diff(kSymY), p.diff(kSymZ)}; }

inline Poly divergence(const PolyVec3& v) {
    return v.x.diff(kSymX) + v.y.diff(kSymY) + v.z.diff(kSymZ);
}

inline PolyVec3 curl(const PolyVec3& v) {
    return {v.z.diff(kSymY) - v.y.diff(kSymZ),
            v.x.diff(kSymZ) - v.z.diff(kSymX),
            v.y.diff(kSymX) - v.x.diff(kSymY)};
}

inline Poly dot(const PolyVec3& a, const PolyVec3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline PolyVec3 cross(const PolyVec3& a, const PolyVec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

/// J . (curl J); identically zero iff the bracket induced by J satisfies Jacobi.
inline Poly jacobi_residual(const PolyVec3& j) { return dot(j, curl(j)); }

/// (J . curl Jbar, Jbar . curl J); the pair vanishes iff the two structures
/// are compatible (every pencil member satisfies Jacobi).
inline std::pair<Poly, Poly> compatibility_residuals(const PolyVec3& j, const PolyVec3& jbar) {
    return {dot(j, curl(jbar)), dot(jbar, curl(j))};
}

enum class MatKind { general, skew, symmetric };

class PolyMat3 {
  public:
    PolyMat3() { certify(); }

    static PolyMat3 zero() { return PolyMat3(); }

    static PolyMat3 identity() { return diagonal(Poly(1), Poly(1), Poly(1)); }

    static PolyMat3 diagonal(Poly a, Poly b, Poly c) {
        PolyMat3 m;
        m.e_[0][0] = std::move(a);
        m.e_[1][1] = std::move(b);
        m.e_[2][2] = std::move(c);
        m.certify();
        return m;
    }

    static PolyMat3 from_rows(std::array<Poly, 3> r0, std::array<Poly, 3> r1,
                              std::array<Poly, 3> r2) {
        PolyMat3 m;
        m.e_ = {std::move(r0), std::move(r1), std::move(r2)};
        m.certify();
        return m;
    }

    /// The skew matrix of the Poisson vector J = (Jx, Jy, Jz):
    /// rows [0, -Jz, Jy; Jz, 0, -Jx; -Jy, Jx, 0].
    static PolyMat3 skew_of(const PolyVec3& j) {
        PolyMat3 m;
        m.e_[0][1] = -j.z;
        m.e_[0][2] = j.y;
        m.e_[1][0] = j.z;
        m.e_[1][2] = -j.x;
        m.e_[2][0] = -j.y;
        m.e_[2][1] = j.x;
        m.kind_ = MatKind::skew;
        return m;
    }

    /// Symmetric matrix [r1 a b; a r2 c; b c r3].
    static PolyMat3 symmetric_of(Poly r1, Poly r2, Poly r3, Poly a, Poly b, Poly c) {
        PolyMat3 m;
        m.e_[0][0] = std::move(r1);
        m.e_[1][1] = std::move(r2);
        m.e_[2][2] = std::move(r3);
        m.e_[0][1] = a;
        m.e_[1][0] = std::move(a);
        m.e_[0][2] = b;
        m.e_[2][0] = std::move(b);
        m.e_[1][2] = c;
        m.e_[2][1] = std::move(c);
        m.kind_ = MatKind::symmetric;
        return m;
    }

    const Poly& at(int i, int j) const { return e_[i][j]; }
    MatKind kind() const { return kind_; }
    bool is_zero() const {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (!e_[i][j].is_zero()) return false;
        return true;
    }

    friend PolyMat3 operator+(const PolyMat3& a, const PolyMat3& b) {
        PolyMat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.e_[i][j] = a.e_[i][j] + b.e_[i][j];
        r.certify();
        return r;
    }

    friend PolyMat3 operator-(const PolyMat3& a, const PolyMat3& b) {
        PolyMat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.e_[i][j] = a.e_[i][j] - b.e_[i][j];
        r.certify();
        return r;
    }

    friend PolyMat3 operator*(const PolyMat3& a, const PolyMat3& b) {
        PolyMat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                Poly s;
                for (int k = 0; k < 3; ++k) s += a.e_[i][k] * b.e_[k][j];
                r.e_[i][j] = std::move(s);
            }
        r.certify();
        return r;
    }

    friend PolyMat3 operator*(const Poly& c, const PolyMat3& m) {
        PolyMat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.e_[i][j] = c * m.e_[i][j];
        r.certify();
        return r;
    }

    PolyMat3 transpose() const {
        PolyMat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.e_[i][j] = e_[j][i];
        r.kind_ = kind_;
        return r;
    }

    PolyVec3 mul_vec(const PolyVec3& v) const {
        PolyVec3 r;
        for (int i = 0; i < 3; ++i) {
            Poly s;
            for (int j = 0; j < 3; ++j) s += e_[i][j] * v[j];
            r[i] = std::move(s);
        }
        return r;
    }

    PolyMat3 subst(const std::map<SymId, Poly>& m) const {
        PolyMat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.e_[i][j] = e_[i][j].subst(m);
        r.certify();
        return r;
    }

    bool operator==(const PolyMat3& o) const { return e_ == o.e_; }
    bool operator!=(const PolyMat3& o) const { return !(*this == o); }

  private:
    // Exact structural check; every construction path runs it, so kind() can
    // be trusted downstream.
    void certify() {
        bool skew = e_[0][0].is_zero() && e_[1][1].is_zero() && e_[2][2].is_zero() &&
                    e_[1][0] == -e_[0][1] && e_[2][0] == -e_[0][2] && e_[2][1] == -e_[1][2];
        bool sym = e_[1][0] == e_[0][1] && e_[2][0] == e_[0][2] && e_[2][1] == e_[1][2];
        if (skew)
            kind_ = MatKind::skew;  // zero matrix counts as skew
        else if (sym)
            kind_ = MatKind::symmetric;
        else
            kind_ = MatKind::general;
    }

    std::array<std::array<Poly, 3>, 3> e_{};
    MatKind kind_ = MatKind::general;
};

/// Inverse of PolyMat3::skew_of; requires an (exactly) skew matrix.
inline PolyVec3 skew_to_vec(const PolyMat3& m) {
    if (m.kind() != MatKind::skew) throw Error("skew_to_vec: matrix is not skew-symmetric");
    return {m.at(2, 1), m.at(0, 2), m.at(1, 0)};
}

// ---------------------------------------------------------------------------
// Shared-denominator fraction layer

/// Vector of three fractions over one common parameter-monomial denominator.
/// Canonical: no symbol power divides all three numerators and the denominator.
class FracVec3 {
  public:
    FracVec3() = default;
    FracVec3(PolyVec3 n, Monomial d) : num_(std::move(n)), den_(std::move(d)) {
        detail::check_param_monomial(den_);
        canonicalize();
    }
    FracVec3(const PolyVec3& n) : num_(n) {}

    static FracVec3 over(PolyVec3 num, const Poly& den) {
        if (den.is_zero()) throw Error("zero denominator");
        if (den.terms().size() != 1) throw Error("denominator must be a single monomial");
        const auto& [m, c] = *den.terms().begin();
        Rational inv = Rational(1) / c;
        return FracVec3({num.x * inv, num.y * inv, num.z * inv}, m);
    }

    static FracVec3 of(const PolyFrac& x, const PolyFrac& y, const PolyFrac& z) {
        Monomial d = x.den().times(y.den()).times(z.den());
        Poly dx = Poly::monomial(1, y.den().times(z.den()));
        Poly dy = Poly::monomial(1, x.den().times(z.den()));
        Poly dz = Poly::monomial(1, x.den().times(y.den()));
        return FracVec3({x.num() * dx, y.num() * dy, z.num() * dz}, d);
    }

    const PolyVec3& num() const { return num_; }
    const Monomial& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    PolyFrac component(int i) const { return PolyFrac(num_[i], den_); }
    PolyFrac x() const { return component(0); }
    PolyFrac y() const { return component(1); }
    PolyFrac z() const { return component(2); }

    /// The underlying polynomial vector; requires den = 1.
    PolyVec3 as_poly_vec() const {
        if (!den_.is_unit()) throw Error("vector has a nontrivial denominator");
        return num_;
    }

    friend FracVec3 operator+(const FracVec3& a, const FracVec3& b) {
        Poly da = Poly::monomial(1, a.den_), db = Poly::monomial(1, b.den_);
        return FracVec3(db * a.num_ + da * b.num_, a.den_.times(b.den_));
    }
    friend FracVec3 operator-(const FracVec3& a, const FracVec3& b) { return a + (-b); }
    FracVec3 operator-() const {
        FracVec3 r(*this);
        r.num_ = -r.num_;
        return r;
    }
    friend FracVec3 operator*(const PolyFrac& c, const FracVec3& v) {
        return FracVec3(c.num() * v.num_, c.den().times(v.den_));
    }

    FracVec3 subst(const std::map<SymId, Poly>& m) const {
        Poly d = Poly::monomial(1, den_).subst(m);
        if (d.is_zero()) throw Error("substitution sends a denominator to zero");
        return over(num_.subst(m), d);
    }

    std::array<double, 3> eval(const std::map<SymId, double>& vals) const {
        double d = Poly::monomial(1, den_).eval(vals);
        if (d == 0) throw Error("denominator evaluates to zero");
        return {num_.x.eval(vals) / d, num_.y.eval(vals) / d, num_.z.eval(vals) / d};
    }

    bool operator==(const FracVec3& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const FracVec3& o) const { return !(*this == o); }

  private:
    void canonicalize() {
        if (num_.is_zero()) {
            den_ = Monomial();
            return;
        }
        Monomial g = den_;
        for (int i = 0; i < 3; ++i)
            if (!num_[i].is_zero()) g = detail::common_factor(num_[i], g);
        if (g.is_unit()) return;
        for (int i = 0; i < 3; ++i)
            if (!num_[i].is_zero()) num_[i] = detail::divide_terms(num_[i], g);
        Monomial d;
        if (!den_.divide(g, &d)) throw Error("internal: bad cancellation");
        den_ = d;
    }

    PolyVec3 num_;
    Monomial den_;
};

inline FracVec3 grad(const PolyFrac& f) { return FracVec3(grad(f.num()), f.den()); }

inline PolyFrac divergence(const FracVec3& v) { return PolyFrac(divergence(v.num()), v.den()); }

inline FracVec3 curl(const FracVec3& v) { return FracVec3(curl(v.num()), v.den()); }

inline PolyFrac dot(const FracVec3& a, const FracVec3& b) {
    return PolyFrac(dot(a.num(), b.num()), a.den().times(b.den()));
}

inline FracVec3 cross(const FracVec3& a, const FracVec3& b) {
    return FracVec3(cross(a.num(), b.num()), a.den().times(b.den()));
}

inline PolyFrac jacobi_residual(const FracVec3& j) { return dot(j, curl(j)); }

inline std::pair<PolyFrac, PolyFrac> compatibility_residuals(const FracVec3& j,
                                                             const FracVec3& jbar) {
    return {dot(j, curl(jbar)), dot(jbar, curl(j))};
}

/// 3x3 matrix of fractions over one common parameter-monomial denominator.
class FracMat3 {
  public:
    FracMat3() = default;
    FracMat3(PolyMat3 n, Monomial d) : num_(std::move(n)), den_(std::move(d)) {
        detail::check_param_monomial(den_);
        canonicalize();
    }
    FracMat3(const PolyMat3& n) : num_(n) {}

    static FracMat3 of(const PolyMat3& n) { return FracMat3(n); }

    static FracMat3 over(const PolyMat3& num, const Poly& den) {
        if (den.is_zero()) throw Error("zero denominator");
        if (den.terms().size() != 1) throw Error("denominator must be a single monomial");
        const auto& [m, c] = *den.terms().begin();
        return FracMat3(Poly(Rational(1) / c) * num, m);
    }

    const PolyMat3& num() const { return num_; }
    const Monomial& den() const { return den_; }
    MatKind kind() const { return num_.kind(); }
    bool is_zero() const { return num_.is_zero(); }
    PolyFrac at(int i, int j) const { return PolyFrac(num_.at(i, j), den_); }

    friend FracMat3 operator+(const FracMat3& a, const FracMat3& b) {
        Poly da = Poly::monomial(1, a.den_), db = Poly::monomial(1, b.den_);
        return FracMat3(db * a.num_ + da * b.num_, a.den_.times(b.den_));
    }
    friend FracMat3 operator-(const FracMat3& a, const FracMat3& b) {
        Poly da = Poly::monomial(1, a.den_), db = Poly::monomial(1, b.den_);
        return FracMat3(db * a.num_ - da * b.num_, a.den_.times(b.den_));
    }
    friend FracMat3 operator*(const FracMat3& a, const FracMat3& b) {
        return FracMat3(a.num_ * b.num_, a.den_.times(b.den_));
    }

    FracMat3 transpose() const {
        FracMat3 r(*this);
        r.num_ = r.num_.transpose();
        return r;
    }

    FracVec3 mul_vec(const FracVec3& v) const {
        return FracVec3(num_.mul_vec(v.num()), den_.times(v.den()));
    }

    FracMat3 subst(const std::map<SymId, Poly>& m) const {
        Poly d = Poly::monomial(1, den_).subst(m);
        if (d.is_zero()) throw Error("substitution sends a denominator to zero");
        return over(num_.subst(m), d);
    }

    bool operator==(const FracMat3& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const FracMat3& o) const { return !(*this == o); }

  private:
    void canonicalize() {
        if (num_.is_zero()) {
            den_ = Monomial();
            return;
        }
        Monomial g = den_;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (!num_.at(i, j).is_zero()) g = detail::common_factor(num_.at(i, j), g);
        if (g.is_unit()) return;
        PolyMat3 n = num_;
        std::array<std::array<Poly, 3>, 3> rows;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                rows[i][j] = n.at(i, j).is_zero() ? Poly()
                                                  : detail::divide_terms(n.at(i, j), g);
        num_ = PolyMat3::from_rows(rows[0], rows[1], rows[2]);
        Monomial d;
        if (!den_.divide(g, &d)) throw Error("internal: bad cancellation");
        den_ = d;
    }

    PolyMat3 num_;
    Monomial den_;
};

inline FracVec3 skew_to_vec(const FracMat3& m) {
    return FracVec3(skew_to_vec(m.num()), m.den());
}

}  // namespace rham
