#pragma once

#include "rham/format.hpp"
#include "rham/frac.hpp"
#include "rham/report.hpp"
#include "rham/vec3.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rham {

struct ParamSpec {
    SymId symbol;
    Rational default_value;
};

/// One registry entry for the dynamics x' = (J - R) grad(H) + V, with J the
/// skew matrix of a Poisson vector, R symmetric, and V an external source.
/// reference_rhs is the textbook right-hand side the factored form must
/// reproduce exactly.
struct ResistiveSystem {
    std::string name;
    std::vector<std::string> aliases;
    int dimension = 3;
    FracMat3 J, R;
    PolyFrac H;
    FracVec3 V;
    FracVec3 reference_rhs;
    std::vector<ParamSpec> params;

    std::optional<PolyFrac> expected_energy_rate;  // with the source switched off
    std::optional<PolyFrac> expected_divergence;
    std::optional<bool> expected_irrotational;

    FracVec3 poisson_vector() const { return skew_to_vec(J); }

    bool has_source() const { return !V.is_zero(); }

    /// Exact parameter substitution applied to every stored field.
    ResistiveSystem substituted(const std::map<SymId, Poly>& m) const {
        ResistiveSystem s(*this);
        s.J = J.subst(m);
        s.R = R.subst(m);
        s.H = H.subst(m);
        s.V = V.subst(m);
        s.reference_rhs = reference_rhs.subst(m);
        if (expected_energy_rate) s.expected_energy_rate = expected_energy_rate->subst(m);
        if (expected_divergence) s.expected_divergence = expected_divergence->subst(m);
        s.params.clear();
        for (const auto& p : params)
            if (!m.count(p.symbol)) s.params.push_back(p);
        return s;
    }

    std::map<SymId, Rational> default_values() const {
        std::map<SymId, Rational> v;
        for (const auto& p : params) v.emplace(p.symbol, p.default_value);
        return v;
    }

    std::map<SymId, double> default_bindings() const {
        std::map<SymId, double> v;
        for (const auto& p : params) v.emplace(p.symbol, to_double(p.default_value));
        return v;
    }
};

inline FracVec3 assemble(const ResistiveSystem& s) {
    return (s.J - s.R).mul_vec(grad(s.H)) + s.V;
}

/// dH/dt along the flow: -(grad H)^T R grad H. Only meaningful without a
/// source term; substitute the source away first.
inline PolyFrac energy_rate(const ResistiveSystem& s) {
    if (s.has_source())
        throw Error("energy_rate: system '" + s.name +
                    "' has a source term; bind it to zero first");
    FracVec3 gh = grad(s.H);
    return -dot(gh, s.R.mul_vec(gh));
}

inline PolyFrac field_divergence(const ResistiveSystem& s) {
    return divergence(assemble(s));
}

/// {f, g} = (grad f)^T J grad g.
inline PolyFrac poisson_bracket(const Poly& f, const Poly& g, const FracMat3& j) {
    return dot(FracVec3(grad(f)), j.mul_vec(FracVec3(grad(g))));
}

inline Poly poisson_bracket(const Poly& f, const Poly& g, const PolyMat3& j) {
    return dot(grad(f), j.mul_vec(grad(g)));
}

/// (f, g) = (grad f)^T R grad g; symmetric in f and g.
inline PolyFrac symmetric_bracket(const Poly& f, const Poly& g, const FracMat3& r) {
    return dot(FracVec3(grad(f)), r.mul_vec(FracVec3(grad(g))));
}

inline Poly symmetric_bracket(const Poly& f, const Poly& g, const PolyMat3& r) {
    return dot(grad(f), r.mul_vec(grad(g)));
}

namespace detail {
inline std::string compact(std::string s) {
    std::string out;
    for (char c : s)
        if (c != ' ') out += c;
    return out;
}
}  // namespace detail

/// Structural checks for one registry entry; every check is exact.
inline Report verify_system(const ResistiveSystem& s) {
    Report rep;
    rep.subject = s.name;

    if (s.J.kind() == MatKind::skew)
        rep.pass("struct.skewJ");
    else
        rep.fail("struct.skewJ", "J is not skew-symmetric");

    if (s.R.kind() == MatKind::symmetric || s.R.is_zero())
        rep.pass("struct.symR");
    else
        rep.fail("struct.symR", "R is not symmetric");

    PolyFrac jac = jacobi_residual(s.poisson_vector());
    if (jac.is_zero())
        rep.pass("jacobi.J", "residual=0");
    else
        rep.fail("jacobi.J", "residual=" + detail::compact(to_string(jac)));

    FracVec3 rhs = assemble(s);
    if (rhs == s.reference_rhs)
        rep.pass("rhs.match");
    else
        rep.fail("rhs.match", "assembled=" + detail::compact(to_string(rhs)));

    if (s.expected_energy_rate) {
        ResistiveSystem nosrc = s.has_source() ? s.substituted({{sym("V"), Poly(0)}}) : s;
        if (nosrc.has_source()) {
            rep.info("energyrate.match", "skipped: source does not vanish");
        } else {
            PolyFrac er = energy_rate(nosrc);
            if (er == *s.expected_energy_rate)
                rep.pass("energyrate.match", "value=" + detail::compact(to_string(er)));
            else
                rep.fail("energyrate.match", "computed=" + detail::compact(to_string(er)));
        }
    }

    if (s.expected_divergence) {
        PolyFrac dv = field_divergence(s);
        if (dv == *s.expected_divergence)
            rep.pass("div.match", "value=" + detail::compact(to_string(dv)));
        else
            rep.fail("div.match", "computed=" + detail::compact(to_string(dv)));
    }

    if (s.expected_irrotational) {
        bool flat = curl(s.poisson_vector()).is_zero();
        if (flat == *s.expected_irrotational)
            rep.pass("curl.J", flat ? "curl(J)=0" : "curl(J)!=0 (as recorded)");
        else
            rep.fail("curl.J", flat ? "curl vanishes unexpectedly" : "curl does not vanish");
    }

    return rep;
}

// ---------------------------------------------------------------------------
// Registry

class SystemRegistry {
  public:
    const std::vector<ResistiveSystem>& all() const { return systems_; }

    const ResistiveSystem& find(const std::string& name) const {
        for (const auto& s : systems_) {
            if (s.name == name) return s;
            for (const auto& a : s.aliases)
                if (a == name) return s;
        }
        throw Error("unknown system '" + name + "'");
    }

    bool contains(const std::string& name) const {
        for (const auto& s : systems_) {
            if (s.name == name) return true;
            for (const auto& a : s.aliases)
                if (a == name) return true;
        }
        return false;
    }

    void add(ResistiveSystem s) {
        if (s.J.kind() != MatKind::skew)
            throw Error("registry: J of '" + s.name + "' is not skew");
        if (!(s.R.kind() == MatKind::symmetric || s.R.is_zero()))
            throw Error("registry: R of '" + s.name + "' is not symmetric");
        if (s.dimension != 2 && s.dimension != 3)
            throw Error("registry: bad dimension for '" + s.name + "'");
        systems_.push_back(std::move(s));
    }

  private:
    std::vector<ResistiveSystem> systems_;
};

namespace detail {

inline Poly P(const char* t) { return parse_poly(t); }

inline SystemRegistry build_registry() {
    SystemRegistry reg;
    auto param = [](const char* n, Rational v) { return ParamSpec{sym(n), std::move(v)}; };

    {
        ResistiveSystem s;
        s.name = "reduced_three_wave";
        s.aliases = {"three_wave"};
        s.H = PolyFrac(P("x^2 + y^2 + z"));
        s.J = FracMat3::of(PolyMat3::skew_of({P("0"), P("z"), P("y - 1/2*d")}));
        s.R = FracMat3::of(
            PolyMat3::diagonal(P("-1/2*g"), P("-1/2*g"), P("2*z")));
        s.reference_rhs = FracVec3({P("-2*y^2 + g*x + d*y + z"), P("2*x*y - d*x + g*y"),
                                    P("-2*x*z - 2*z")});
        s.params = {param("g", 1), param("d", 1)};
        s.expected_energy_rate = PolyFrac(P("2*g*x^2 + 2*g*y^2 - 2*z"));
        s.expected_divergence = PolyFrac(P("2*g - 2"));
        s.expected_irrotational = true;
        reg.add(s);
    }
    {
        ResistiveSystem s;
        s.name = "rabinovich";
        s.H = PolyFrac(P("1/2*x^2 + 1/2*y^2 + 1/2*z^2"));
        s.J = FracMat3::of(PolyMat3::skew_of({P("1/2*x"), P("0"), P("0")}));
        s.R = FracMat3::of(PolyMat3::symmetric_of(P("k1"), P("k2"), P("k3"), P("-q"), P("-y"),
                                                  P("1/2*x")));
        s.reference_rhs =
            FracVec3({P("q*y - k1*x + y*z"), P("q*x - k2*y - x*z"), P("x*y - k3*z")});
        s.params = {param("q", 1), param("k1", 1), param("k2", 1), param("k3", 1)};
        s.expected_energy_rate =
            PolyFrac(P("x*y*z + 2*q*x*y - k1*x^2 - k2*y^2 - k3*z^2"));
        s.expected_divergence = PolyFrac(P("-k1 - k2 - k3"));
        s.expected_irrotational = true;
        reg.add(s);
    }
    {
        ResistiveSystem s;
        s.name = "chen";
        s.H = PolyFrac(P("1/2*x^2 - a*z"));
        s.J = FracMat3::of(PolyMat3::skew_of({P("0"), P("-y"), P("-z")}));
        s.R = FracMat3::over(PolyMat3::symmetric_of(P("a^2"), P("0"), P("-b*z"),
                                                    P("a^2 - a*g"), P("0"), P("g*y")),
                             P("a"));
        s.reference_rhs =
            FracVec3({P("a*y - a*x"), P("g*x - a*x + g*y - x*z"), P("x*y - b*z")});
        s.params = {param("a", 35), param("b", 3), param("g", 28)};
        s.expected_energy_rate = PolyFrac(P("a*b*z - a*x^2"));
        s.expected_divergence = PolyFrac(P("-a - b + g"));
        s.expected_irrotational = true;
        reg.add(s);
    }
    {
        ResistiveSystem s;
        s.name = "lu";
        s.H = PolyFrac(P("1/2*x^2 - a*z"));
        s.J = FracMat3::of(PolyMat3::skew_of({P("0"), P("-y"), P("-z")}));
        s.R = FracMat3::over(
            PolyMat3::symmetric_of(P("a^2"), P("0"), P("-b*z"), P("0"), P("0"), P("g*y")),
            P("a"));
        s.reference_rhs = FracVec3({P("a*y - a*x"), P("g*y - x*z"), P("x*y - b*z")});
        s.params = {param("a", 36), param("b", 3), param("g", 20)};
        s.expected_energy_rate = PolyFrac(P("a*b*z - a*x^2"));
        s.expected_divergence = PolyFrac(P("-a - b + g"));
        s.expected_irrotational = true;
        reg.add(s);
    }
    {
        ResistiveSystem s;
        s.name = "modified_lu";
        s.H = PolyFrac(P("1/2*x^2 - a*z"));
        s.J = FracMat3(PolyMat3::skew_of({P("0"), P("-a*y - 1/2*y*z"), P("-a*z")}),
                       Monomial::of(sym("a")));
        s.R = FracMat3::over(PolyMat3::symmetric_of(P("a^2"), P("0"), P("-b*z"), P("0"),
                                                    P("1/2*y*z"), P("g*y")),
                             P("a"));
        s.reference_rhs =
            FracVec3({P("a*y - a*x + y*z"), P("g*y - x*z"), P("x*y - b*z")});
        s.params = {param("a", 36), param("b", 3), param("g", 20)};
        s.expected_energy_rate = PolyFrac(P("x*y*z + a*b*z - a*x^2"));
        s.expected_divergence = PolyFrac(P("-a - b + g"));
        s.expected_irrotational = false;
        reg.add(s);
    }
    {
        ResistiveSystem s;
        s.name = "qi";
        s.H = PolyFrac(P("1/2*x^2 - a*z"));
        s.J = FracMat3(PolyMat3::skew_of({P("0"), P("-a*y - 1/2*y*z"), P("-a*z")}),
                       Monomial::of(sym("a")));
        s.R = FracMat3::over(PolyMat3::symmetric_of(P("a^2"), P("0"), P("-b*z"), P("-a*g"),
                                                    P("1/2*y*z"), P("-y")),
                             P("a"));
        s.reference_rhs =
            FracVec3({P("a*y - a*x + y*z"), P("g*x - y - x*z"), P("x*y - b*z")});
        s.params = {param("a", 35), param("b", Rational(8, 3)), param("g", 80)};
        s.expected_energy_rate = PolyFrac(P("x*y*z + a*b*z - a*x^2"));
        s.expected_divergence = PolyFrac(P("-a - b - 1"));
        s.expected_irrotational = false;
        reg.add(s);
    }
    {
        ResistiveSystem s;
        s.name = "rlc_circuit";
        s.aliases = {"rlc"};
        s.dimension = 2;  // state (x, y) = (charge, current); z is inert
        s.H = PolyFrac::over(P("1/2*C*L*y^2 + 1/2*x^2"), P("C*L"));
        s.J = FracMat3::of(PolyMat3::skew_of({P("0"), P("0"), P("-1")}));
        s.R = FracMat3::over(PolyMat3::diagonal(P("0"), P("R"), P("0")), P("L"));
        s.V = FracVec3::over({P("0"), P("V"), P("0")}, P("L"));
        s.reference_rhs = FracVec3::over({P("C*L*y"), P("-C*R*y - x + C*V"), P("0")}, P("C*L"));
        s.params = {param("R", 1), param("L", 1), param("C", 1), param("V", 0)};
        s.expected_energy_rate = PolyFrac::over(P("-R*y^2"), P("L"));
        s.expected_divergence = PolyFrac::over(P("-R"), P("L"));
        reg.add(s);
    }
    {
        ResistiveSystem s;
        s.name = "euler_rotor";
        s.aliases = {"euler"};
        s.H = PolyFrac::over(P("1/2*Iy*Iz*x^2 + 1/2*Ix*Iz*y^2 + 1/2*Ix*Iy*z^2"),
                             P("Ix*Iy*Iz"));
        s.J = FracMat3::of(PolyMat3::skew_of({P("x"), P("y"), P("z")}));
        s.reference_rhs = FracVec3::over({P("Ix*Iy*y*z - Ix*Iz*y*z"),
                                          P("Iy*Iz*x*z - Ix*Iy*x*z"),
                                          P("Ix*Iz*x*y - Iy*Iz*x*y")},
                                         P("Ix*Iy*Iz"));
        s.params = {param("Ix", 1), param("Iy", 2), param("Iz", 3)};
        s.expected_energy_rate = PolyFrac(0);
        s.expected_divergence = PolyFrac(0);
        s.expected_irrotational = true;
        reg.add(s);
    }
    {
        ResistiveSystem s;
        s.name = "euler_rotor_dissipative";
        s.H = PolyFrac::over(P("1/2*Iy*Iz*x^2 + 1/2*Ix*Iz*y^2 + 1/2*Ix*Iy*z^2"),
                             P("Ix*Iy*Iz"));
        s.J = FracMat3::of(PolyMat3::skew_of({P("x"), P("y"), P("z")}));
        s.R = FracMat3::of(PolyMat3::diagonal(P("1/2"), P("1/2"), P("1/2")));
        s.reference_rhs =
            FracVec3::over({P("Ix*Iy*y*z - Ix*Iz*y*z - 1/2*Iy*Iz*x"),
                            P("Iy*Iz*x*z - Ix*Iy*x*z - 1/2*Ix*Iz*y"),
                            P("Ix*Iz*x*y - Iy*Iz*x*y - 1/2*Ix*Iy*z")},
                           P("Ix*Iy*Iz"));
        s.params = {param("Ix", 1), param("Iy", 2), param("Iz", 3)};
        s.expected_energy_rate =
            PolyFrac::over(P("-1/2*Iy^2*Iz^2*x^2 - 1/2*Ix^2*Iz^2*y^2 - 1/2*Ix^2*Iy^2*z^2"),
                           P("Ix^2*Iy^2*Iz^2"));
        s.expected_divergence =
            PolyFrac::over(P("-1/2*Ix*Iy - 1/2*Ix*Iz - 1/2*Iy*Iz"), P("Ix*Iy*Iz"));
        s.expected_irrotational = true;
        reg.add(s);
    }
    return reg;
}

}  // namespace detail

inline const SystemRegistry& registry() {
    static const SystemRegistry reg = detail::build_registry();
    return reg;
}

}  // namespace rham
