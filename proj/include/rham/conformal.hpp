#pragma once

#include "rham/systems.hpp"

#include <map>
#include <string>

namespace rham {

/// Dilatation (Euler) field Gamma = (x, y, z).
inline PolyVec3 euler_field() {
    return {Poly::var(kSymX), Poly::var(kSymY), Poly::var(kSymZ)};
}

/// Splitting of a registry field on a parameter locus: the constrained flow
/// equals J x grad(H) + a Gamma with the first part volume preserving. The
/// stored j, h, a are already written on the locus.
struct ConformalDecomposition {
    std::string system;
    PolyVec3 j;
    Poly h;
    Poly a;
    std::map<SymId, Poly> constraint;
    std::string constraint_text;
};

inline PolyVec3 conservative_part(const ConformalDecomposition& d) {
    return cross(d.j, grad(d.h));
}

/// X_H^a = J x grad(H) + a Gamma. Refuses decompositions whose conservative
/// part fails to be volume preserving.
inline PolyVec3 conformal_field(const ConformalDecomposition& d) {
    PolyVec3 cons = conservative_part(d);
    Poly dv = divergence(cons);
    if (!dv.is_zero())
        throw Error("conformal_field: conservative part has divergence " + to_string(dv));
    return cons + d.a * euler_field();
}

/// dH/dt along the conformal field collapses to a * Gamma(H), because the
/// conservative part is orthogonal to grad(H).
inline Poly euler_energy_rate(const ConformalDecomposition& d) {
    Poly rate = d.a * dot(euler_field(), grad(d.h));
    if (rate != dot(grad(d.h), conformal_field(d)))
        throw Error("internal: conformal energy rate mismatch");
    return rate;
}

inline const std::map<std::string, ConformalDecomposition>& conformal_table() {
    static const std::map<std::string, ConformalDecomposition> table = [] {
        using detail::P;
        std::map<std::string, ConformalDecomposition> t;
        t["reduced_three_wave"] = {"reduced_three_wave",
                                   {P("0"), P("z"), P("y - 1/2*d")},
                                   P("x^2 + y^2 + z"),
                                   P("-2"),
                                   {{sym("g"), Poly(-2)}},
                                   "g = -2"};
        t["chen"] = {"chen",
                     {P("-x"), P("-y"), P("-a - z")},
                     P("1/2*x^2 - a*z"),
                     P("-a"),
                     {{sym("b"), Poly::var(sym("a"))}, {sym("g"), -Poly::var(sym("a"))}},
                     "b = a, g = -a"};
        t["lu"] = {"lu",
                   {P("0"), P("-y"), P("-z")},
                   P("1/2*x^2 - a*z"),
                   P("-a"),
                   {{sym("b"), Poly::var(sym("a"))}, {sym("g"), -Poly::var(sym("a"))}},
                   "b = a, g = -a"};
        return t;
    }();
    return table;
}

/// Conformal checks for one entry: the decomposition reproduces the
/// constrained flow, its conservative part is divergence free, and the full
/// field has divergence 3a.
inline Report verify_conformal(const ResistiveSystem& s) {
    Report rep;
    rep.subject = s.name;
    auto it = conformal_table().find(s.name);
    if (it == conformal_table().end()) {
        rep.info("conformal.none", "no conformal decomposition recorded");
        return rep;
    }
    const ConformalDecomposition& d = it->second;

    if (jacobi_residual(d.j).is_zero())
        rep.pass("conformal.jacobi", "residual=0");
    else
        rep.fail("conformal.jacobi", "decomposition J fails Jacobi");

    Poly consdiv = divergence(conservative_part(d));
    if (consdiv.is_zero())
        rep.pass("conformal.consdiv", "div=0");
    else
        rep.fail("conformal.consdiv", "div=" + detail::compact(to_string(consdiv)));

    PolyVec3 field = conformal_field(d);
    FracVec3 constrained = s.substituted(d.constraint).reference_rhs;
    if (FracVec3(field) == constrained)
        rep.pass("conformal.match", "constraint: " + d.constraint_text);
    else
        rep.fail("conformal.match",
                 "field=" + detail::compact(to_string(field)) + " vs rhs=" +
                     detail::compact(to_string(constrained)));

    Poly dv = divergence(field);
    if (dv == Poly(3) * d.a)
        rep.pass("conformal.div3a", "value=" + detail::compact(to_string(dv)));
    else
        rep.fail("conformal.div3a", "div=" + detail::compact(to_string(dv)));

    return rep;
}

}  // namespace rham
