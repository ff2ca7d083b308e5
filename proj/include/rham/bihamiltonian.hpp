#pragma once

#include "rham/closedform.hpp"
#include "rham/systems.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rham {

// ---------------------------------------------------------------------------
// The induced second structure N = JR + RJ

/// Anticommutator of a skew J with a symmetric R; always skew again.
inline FracMat3 jordan_anticommutator(const FracMat3& j, const FracMat3& r) {
    if (j.kind() != MatKind::skew) throw Error("jordan_anticommutator: J must be skew");
    if (!(r.kind() == MatKind::symmetric || r.is_zero()))
        throw Error("jordan_anticommutator: R must be symmetric");
    FracMat3 n = j * r + r * j;
    if (n.kind() != MatKind::skew) throw Error("internal: anticommutator is not skew");
    return n;
}

/// Componentwise form of vec(JR + RJ) for J = (Jx, Jy, Jz) and
/// R = [r1 A B; A r2 C; B C r3]:
///   Nx =  Jx (r2 + r3) - Jy A - Jz B
///   Ny = -Jx A + Jy (r1 + r3) - Jz C
///   Nz = -Jx B - Jy C + Jz (r1 + r2)
inline FracVec3 n_components(const FracVec3& jvec, const FracMat3& r) {
    if (!(r.kind() == MatKind::symmetric || r.is_zero()))
        throw Error("n_components: R must be symmetric");
    PolyFrac jx = jvec.x(), jy = jvec.y(), jz = jvec.z();
    PolyFrac r1 = r.at(0, 0), r2 = r.at(1, 1), r3 = r.at(2, 2);
    PolyFrac a = r.at(0, 1), b = r.at(0, 2), c = r.at(1, 2);
    return FracVec3::of(jx * (r2 + r3) - jy * a - jz * b,
                        -(jx * a) + jy * (r1 + r3) - jz * c,
                        -(jx * b) - jy * c + jz * (r1 + r2));
}

inline FracVec3 n_vector(const ResistiveSystem& s) {
    return n_components(s.poisson_vector(), s.R);
}

/// N . curl N for the induced structure; zero iff N is again Poisson.
inline PolyFrac n_jacobi_residual(const ResistiveSystem& s) {
    return jacobi_residual(n_vector(s));
}

/// Does the given skew structure factor through JR + RJ?
inline bool factorize_check(const FracMat3& n, const FracMat3& j, const FracMat3& r) {
    return n == jordan_anticommutator(j, r);
}

// ---------------------------------------------------------------------------
// Classification of the induced structure

enum class NJacobi { always, conditional, never };

struct NClassRule {
    NJacobi kind = NJacobi::always;
    std::map<SymId, Poly> constraint;       // parameter locus where the residual vanishes
    std::string constraint_text;
    std::map<SymId, Rational> witness;      // parameter point where it does not
};

inline const std::map<std::string, NClassRule>& n_classification() {
    static const std::map<std::string, NClassRule> table = [] {
        std::map<std::string, NClassRule> t;
        t["reduced_three_wave"] = {NJacobi::always, {}, "", {}};
        t["rabinovich"] = {NJacobi::conditional,
                           {{sym("k2"), -Poly::var(sym("k3"))}},
                           "k2 = -k3",
                           {{sym("q"), 1}, {sym("k1"), 1}, {sym("k2"), 1}, {sym("k3"), 1}}};
        t["chen"] = {NJacobi::conditional,
                     {{sym("g"), Poly::var(sym("a"))}},
                     "a = g",
                     {{sym("a"), 2}, {sym("b"), 3}, {sym("g"), 1}}};
        t["lu"] = {NJacobi::always, {}, "", {}};
        t["modified_lu"] = {NJacobi::never, {}, "",
                            {{sym("a"), 36}, {sym("b"), 3}, {sym("g"), 20}}};
        t["qi"] = {NJacobi::never, {}, "",
                   {{sym("a"), 35}, {sym("b"), Rational(8, 3)}, {sym("g"), 80}}};
        t["rlc_circuit"] = {NJacobi::always, {}, "", {}};
        t["euler_rotor"] = {NJacobi::always, {}, "", {}};
        t["euler_rotor_dissipative"] = {NJacobi::always, {}, "", {}};
        return t;
    }();
    return table;
}

/// Checks the recorded Jacobi classification of N = JR + RJ for one entry.
inline Report classify_n(const ResistiveSystem& s) {
    Report rep;
    rep.subject = s.name;
    PolyFrac res = n_jacobi_residual(s);

    if (res.is_zero())
        rep.pass("n.jacobi", "residual=0");
    else
        rep.info("n.jacobi", "nonzero");

    auto it = n_classification().find(s.name);
    if (it == n_classification().end()) {
        rep.info("n.class", "no classification recorded");
        return rep;
    }
    const NClassRule& rule = it->second;

    switch (rule.kind) {
        case NJacobi::always:
            if (res.is_zero())
                rep.pass("n.class", "always poisson");
            else
                rep.fail("n.class", "residual=" + detail::compact(to_string(res)));
            break;
        case NJacobi::conditional: {
            bool generic_nonzero = !res.is_zero();
            bool vanishes = res.subst(rule.constraint).is_zero();
            std::map<SymId, Poly> wit;
            for (const auto& [k, v] : rule.witness) wit.emplace(k, Poly(v));
            bool witness_nonzero = !res.subst(wit).is_zero();
            if (generic_nonzero && vanishes && witness_nonzero)
                rep.pass("n.class", "poisson iff " + rule.constraint_text);
            else
                rep.fail("n.class", "conditional rule violated");
            break;
        }
        case NJacobi::never: {
            std::map<SymId, Poly> wit;
            for (const auto& [k, v] : rule.witness) wit.emplace(k, Poly(v));
            if (!res.is_zero() && !res.subst(wit).is_zero())
                rep.pass("n.class", "not poisson (generic)");
            else
                rep.fail("n.class", "residual vanished unexpectedly");
            break;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Bi-Hamiltonian generation

/// The field N x grad(G) of a Poisson vector N and first integral G.
/// Cross-checked internally against the matrix route skew(N) grad(G).
inline FracVec3 generate_biham(const FracVec3& n, const PolyFrac& g) {
    PolyFrac jac = jacobi_residual(n);
    if (!jac.is_zero())
        throw Error("generate_biham: N is not a Poisson vector (residual = " + to_string(jac) +
                    ")");
    FracVec3 gg = grad(g);
    FracVec3 via_cross = cross(n, gg);
    FracVec3 via_matrix = FracMat3(PolyMat3::skew_of(n.num()), n.den()).mul_vec(gg);
    if (via_cross != via_matrix) throw Error("internal: bi-Hamiltonian routes disagree");
    return via_cross;
}

/// {F, Gbar, G} = (1/M) grad(F) . (grad(Gbar) x grad(G)) for constant M.
inline PolyFrac nambu_bracket(const PolyFrac& f, const PolyFrac& gbar, const PolyFrac& g,
                              const PolyFrac& m) {
    if (!m.is_constant() || m.constant_value() == 0)
        throw Error("nambu_bracket: multiplier must be a nonzero constant");
    PolyFrac inv(Rational(1) / m.constant_value());
    return inv * dot(grad(f), cross(grad(gbar), grad(g)));
}

/// Exact certificate check: M N = grad(Gbar) with a constant multiplier.
inline bool verify_exactness_symbolic(const FracVec3& n, const PolyFrac& gbar,
                                      const Rational& m) {
    return PolyFrac(m) * n == grad(gbar);
}

struct ExactnessResult {
    int samples = 0;
    double max_err = 0;
    bool pass = false;
};

/// Samples |M N - grad(Gbar)| / max(1, |grad Gbar|) over the given points.
inline ExactnessResult verify_exactness_numeric(const FracVec3& n, const ClosedForm& gbar,
                                                const ClosedForm& mult,
                                                const std::vector<std::array<double, 3>>& pts,
                                                std::map<SymId, double> bindings,
                                                double tol = 1e-9) {
    ExactnessResult out;
    for (const auto& p : pts) {
        bindings[kSymX] = p[0];
        bindings[kSymY] = p[1];
        bindings[kSymZ] = p[2];
        auto nv = n.eval(bindings);
        double mv = mult.eval(bindings);
        auto gg = gbar.gradient(bindings);
        double scale = 1.0, err = 0.0;
        for (int i = 0; i < 3; ++i) scale = std::max(scale, std::fabs(gg[i]));
        for (int i = 0; i < 3; ++i) err = std::max(err, std::fabs(mv * nv[i] - gg[i]));
        out.max_err = std::max(out.max_err, err / scale);
        ++out.samples;
    }
    out.pass = out.samples > 0 && out.max_err < tol;
    return out;
}

// ---------------------------------------------------------------------------
// Closed forms for the reduced three-wave invariant pair

/// Gbar = |2y - d|^(-lam/g) |1 - g/(4z)|^(2 lam/g) and the accompanying
/// last multiplier M = (4 lam / g) Gbar / ((g z - 4 z^2)(2 y - d)), with
/// hand-written gradients.
struct ThreeWaveForms {
    ClosedForm gbar;
    ClosedForm multiplier;
};

inline ThreeWaveForms three_wave_forms() {
    using namespace cf;
    Expr y = symbol(kSymY), z = symbol(kSymZ);
    Expr g = symbol(sym("g")), d = symbol(sym("d")), lam = symbol(sym("lam"));

    Expr A = num(2) * y - d;                       // 2y - d
    Expr B = num(1) - g / (num(4) * z);            // 1 - g/(4z)
    Expr p = -(lam / g);
    Expr q = num(2) * lam / g;
    Expr gbar = pow(abs(A), p) * pow(abs(B), q);

    Expr dy_gbar = num(2) * p * gbar / A;
    Expr dz_gbar = num(2) * lam * gbar / (z * (num(4) * z - g));

    Expr denom = (g * z - num(4) * z * z) * A;     // (gz - 4z^2)(2y - d)
    Expr m = num(4) * lam / g * gbar / denom;
    Expr dy_m = num(2) * (p - num(1)) * m / A;
    Expr dz_m = m * (num(2) * lam / (z * (num(4) * z - g)) -
                     (g - num(8) * z) / (g * z - num(4) * z * z));

    Expr zero = num(0);
    return {ClosedForm(gbar.n, {zero.n, dy_gbar.n, dz_gbar.n}),
            ClosedForm(m.n, {zero.n, dy_m.n, dz_m.n})};
}

/// Rejects samples too close to the singular loci 2y = d, z = 0, 4z = g.
inline std::function<bool(double, double, double)> three_wave_exclusion(double g, double d) {
    return [g, d](double, double y, double z) {
        return std::fabs(2 * y - d) < 1e-3 || std::fabs(z) < 1e-3 ||
               std::fabs(z - g / 4) < 1e-3;
    };
}

// ---------------------------------------------------------------------------
// Derived records

/// Everything the derivation produces for one system: the induced N, the
/// generated field, and whichever exactness certificate applies.
struct DerivedBiHamiltonian {
    std::string source;
    FracVec3 n;
    PolyFrac g;
    FracVec3 rhs;
    std::pair<PolyFrac, PolyFrac> compatibility;

    std::optional<PolyFrac> gbar;            // polynomial certificate
    std::optional<Rational> multiplier;
    std::optional<ClosedForm> gbar_form;     // closed-form certificate
    std::optional<ClosedForm> multiplier_form;

    bool has_certificate() const { return gbar.has_value() || gbar_form.has_value(); }
};

/// Polynomial Gbar for the Lue system on the locus b = g, written in b.
inline PolyFrac lu_gbar() {
    return PolyFrac::over(detail::P("-1/2*a^2*y^2 - 1/2*a^2*z^2 + b*y^2*z"), detail::P("a"));
}

/// Derives the second Hamiltonian structure of a registry entry. `bind` is
/// the parameter substitution already applied to `base`; certificates are
/// instantiated under the same substitution before being attached.
inline DerivedBiHamiltonian derive_biham(const ResistiveSystem& base,
                                         std::optional<PolyFrac> g_choice = std::nullopt,
                                         const std::map<SymId, Poly>& bind = {}) {
    ResistiveSystem sys = bind.empty() ? base : base.substituted(bind);
    DerivedBiHamiltonian d;
    d.source = base.name;
    d.n = n_vector(sys);
    PolyFrac jac = jacobi_residual(d.n);
    if (!jac.is_zero())
        throw Error("derive_biham: '" + base.name +
                    "' does not induce a Poisson structure (residual = " + to_string(jac) + ")");
    d.g = g_choice.value_or(sys.H);
    d.rhs = generate_biham(d.n, d.g);
    d.compatibility = compatibility_residuals(sys.poisson_vector(), d.n);

    if (base.name == "lu") {
        PolyFrac cand = bind.empty() ? lu_gbar() : lu_gbar().subst(bind);
        if (verify_exactness_symbolic(d.n, cand, 1)) {
            d.gbar = cand;
            d.multiplier = Rational(1);
        }
    } else if (base.name == "euler_rotor_dissipative") {
        PolyFrac cand(detail::P("x^2 + y^2 + z^2"));
        if (verify_exactness_symbolic(d.n, cand, 2)) {
            d.gbar = cand;
            d.multiplier = Rational(2);
        }
    } else if (base.name == "reduced_three_wave") {
        ThreeWaveForms forms = three_wave_forms();
        d.gbar_form = forms.gbar;
        d.multiplier_form = forms.multiplier;
    }
    return d;
}

// ---------------------------------------------------------------------------
// Jordan identity

namespace detail {
inline PolyMat3 jordan_product(const PolyMat3& a, const PolyMat3& b) { return a * b + b * a; }
}  // namespace detail

/// Checks the Jordan identity on (J, R) under both readings: the plain
/// matrix product (associativity form) and the symmetrized product
/// a o b = ab + ba. Denominators scale out, so numerators suffice.
inline Report jordan_identity_check(const PolyMat3& a, const PolyMat3& b,
                                    const std::string& subject = "") {
    Report rep;
    rep.subject = subject;
    PolyMat3 aa = a * a;
    if ((a * b) * aa == a * (b * aa))
        rep.pass("jordan.identity", "product reading");
    else
        rep.fail("jordan.identity", "product reading violated");

    using detail::jordan_product;
    PolyMat3 asq = jordan_product(a, a);
    if (jordan_product(jordan_product(a, b), asq) == jordan_product(a, jordan_product(b, asq)))
        rep.pass("jordan.identity", "symmetrized reading");
    else
        rep.fail("jordan.identity", "symmetrized reading violated");
    return rep;
}

inline Report jordan_identity_check(const FracMat3& a, const FracMat3& b,
                                    const std::string& subject = "") {
    return jordan_identity_check(a.num(), b.num(), subject);
}

// ---------------------------------------------------------------------------
// Orthogonal deformations

/// Exactly orthogonal 3x3 matrix; certification T^T T = I happens at
/// construction (the radical rewrite makes the Delta family pass exactly).
class OrthoMat3 {
  public:
    static OrthoMat3 of(PolyMat3 t) {
        if (t.transpose() * t != PolyMat3::identity())
            throw Error("OrthoMat3: matrix is not orthogonal");
        OrthoMat3 o;
        o.t_ = std::move(t);
        return o;
    }

    /// T(D) = [1 0 0; 0 D -s; 0 s D] with the adjoined s = sqrt(1 - D^2).
    static OrthoMat3 delta_family() {
        Poly D = Poly::var(delta_sym()), s = Poly::var(radical_sym());
        return of(PolyMat3::from_rows({Poly(1), Poly(0), Poly(0)}, {Poly(0), D, -s},
                                      {Poly(0), s, D}));
    }

    /// T(D) at an exact rational D; requires 1 - D^2 to be a perfect square.
    static OrthoMat3 at_delta(const Rational& dv) {
        if (dv < -1 || dv > 1) throw Error("at_delta: D must lie in [-1, 1]");
        Rational sv;
        try {
            sv = exact_sqrt(Rational(1) - dv * dv);
        } catch (const Error&) {
            throw Error("at_delta: 1 - D^2 = " + (Rational(1) - dv * dv).str() +
                        " is not a perfect rational square; pick D from a rational point "
                        "of the circle (e.g. 3/5, 5/13, 1)");
        }
        return of(PolyMat3::from_rows({Poly(1), Poly(0), Poly(0)}, {Poly(0), Poly(dv), Poly(-sv)},
                                      {Poly(0), Poly(sv), Poly(dv)}));
    }

    const PolyMat3& mat() const { return t_; }

    FracMat3 sandwich(const FracMat3& m) const {
        return FracMat3(t_ * m.num() * t_.transpose(), m.den());
    }

  private:
    OrthoMat3() = default;
    PolyMat3 t_;
};

struct JordanTransformed {
    FracMat3 j, r, n;
};

/// Transports (J, R) by an orthogonal T and returns T J T', T R T' and the
/// induced N. Covariance N' = T N T' is asserted along the way.
inline JordanTransformed jordan_transform(const FracMat3& j, const FracMat3& r,
                                          const OrthoMat3& t) {
    JordanTransformed out;
    out.j = t.sandwich(j);
    out.r = t.sandwich(r);
    if (out.j.kind() != MatKind::skew) throw Error("internal: transported J lost skewness");
    if (!(out.r.kind() == MatKind::symmetric || out.r.is_zero()))
        throw Error("internal: transported R lost symmetry");
    out.n = jordan_anticommutator(out.j, out.r);
    if (out.n != t.sandwich(jordan_anticommutator(j, r)))
        throw Error("internal: anticommutator does not transform covariantly");
    return out;
}

/// The reduced three-wave pair pushed through T(Delta), with the flow of the
/// deformed structure. Defaults to the symbolic family; an exact rational
/// Delta pins it to one member.
struct DeltaFamily {
    FracMat3 j, r, n;
    FracVec3 nvec;
    FracVec3 rhs;
};

inline DeltaFamily three_wave_delta_family(
    const std::optional<Rational>& delta = std::nullopt) {
    const ResistiveSystem& tw = registry().find("reduced_three_wave");
    OrthoMat3 t = delta ? OrthoMat3::at_delta(*delta) : OrthoMat3::delta_family();
    JordanTransformed jt = jordan_transform(tw.J, tw.R, t);
    DeltaFamily fam{jt.j, jt.r, jt.n, skew_to_vec(jt.n), FracVec3()};
    fam.rhs = generate_biham(fam.nvec, tw.H);
    return fam;
}

}  // namespace rham
