#include "rham/systems.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace rham;

namespace {
Poly P(const char* t) { return parse_poly(t); }
}  // namespace

TEST_CASE("registry holds the nine entries in order") {
    const auto& all = registry().all();
    REQUIRE(all.size() == 9);
    const char* names[] = {"reduced_three_wave", "rabinovich",  "chen",
                           "lu",                 "modified_lu", "qi",
                           "rlc_circuit",        "euler_rotor", "euler_rotor_dissipative"};
    for (size_t i = 0; i < 9; ++i) CHECK(all[i].name == names[i]);

    CHECK(&registry().find("three_wave") == &registry().find("reduced_three_wave"));
    CHECK(&registry().find("euler") == &registry().find("euler_rotor"));
    CHECK(&registry().find("rlc") == &registry().find("rlc_circuit"));
    CHECK_THROWS_AS(registry().find("lorenz"), Error);
    CHECK(registry().contains("qi"));
    CHECK_FALSE(registry().contains("qI"));
}

TEST_CASE("every entry verifies structurally") {
    for (const auto& s : registry().all()) {
        INFO(s.name);
        Report rep = verify_system(s);
        for (const auto& c : rep.checks) {
            INFO(c.id << " " << c.detail);
            CHECK(c.status != CheckStatus::fail);
        }
        // the factored form reproduces the reference field exactly
        CHECK(assemble(s) == s.reference_rhs);
        // J times its own Poisson vector vanishes (the vector is a Casimir direction)
        CHECK(s.J.mul_vec(s.poisson_vector()).is_zero());
    }
}

TEST_CASE("energy rate equals grad(H) dot rhs when no source is present") {
    for (const auto& s : registry().all()) {
        if (s.has_source()) continue;
        INFO(s.name);
        CHECK(energy_rate(s) == dot(grad(s.H), assemble(s)));
    }
    CHECK_THROWS_AS(energy_rate(registry().find("rlc_circuit")), Error);
}

TEST_CASE("recorded energy rates and divergences") {
    const auto& reg = registry();
    CHECK(energy_rate(reg.find("three_wave")) == PolyFrac(P("2*g*x^2 + 2*g*y^2 - 2*z")));
    CHECK(energy_rate(reg.find("chen")) == PolyFrac(P("a*b*z - a*x^2")));
    CHECK(energy_rate(reg.find("lu")) == PolyFrac(P("a*b*z - a*x^2")));
    CHECK(energy_rate(reg.find("modified_lu")) == PolyFrac(P("x*y*z + a*b*z - a*x^2")));
    CHECK(energy_rate(reg.find("qi")) == PolyFrac(P("x*y*z + a*b*z - a*x^2")));
    CHECK(energy_rate(reg.find("euler_rotor")).is_zero());

    CHECK(field_divergence(reg.find("three_wave")) == PolyFrac(P("2*g - 2")));
    CHECK(field_divergence(reg.find("rabinovich")) == PolyFrac(P("-k1 - k2 - k3")));
    CHECK(field_divergence(reg.find("chen")) == PolyFrac(P("-a - b + g")));
    CHECK(field_divergence(reg.find("qi")) == PolyFrac(P("-a - b - 1")));
    CHECK(field_divergence(reg.find("rlc_circuit")) == PolyFrac::over(P("-R"), P("L")));
    CHECK(field_divergence(reg.find("euler_rotor")).is_zero());

    // dissipative rotor: exact kinetic-energy decay rate
    PolyFrac rate = energy_rate(reg.find("euler_rotor_dissipative"));
    CHECK(rate == PolyFrac::over(
                      P("-1/2*Iy^2*Iz^2*x^2 - 1/2*Ix^2*Iz^2*y^2 - 1/2*Ix^2*Iy^2*z^2"),
                      P("Ix^2*Iy^2*Iz^2")));
}

TEST_CASE("brackets against the registry structures") {
    const auto& chen = registry().find("chen");
    Poly H = chen.H.as_poly();
    CHECK(poisson_bracket(P("x"), H, chen.J) == PolyFrac(P("a*y")));
    // antisymmetry and the Leibniz-side symmetry
    Poly f = P("x*y + z^2"), g = P("y - 2*x");
    CHECK(poisson_bracket(f, g, chen.J) == -poisson_bracket(g, f, chen.J));
    CHECK(symmetric_bracket(f, g, chen.R) == symmetric_bracket(g, f, chen.R));
    CHECK(poisson_bracket(f, f, chen.J).is_zero());

    // {f, H} + (f, H) recovers df/dt along the flow
    PolyFrac df = poisson_bracket(f, H, chen.J) - symmetric_bracket(f, H, chen.R);
    PolyFrac along = dot(FracVec3(grad(f)), assemble(chen));
    CHECK(df == along);
}

TEST_CASE("parameter substitution is exact and total") {
    const auto& chen = registry().find("chen");
    ResistiveSystem pinned = chen.substituted({{sym("b"), Poly::var(sym("a"))}});
    CHECK(field_divergence(pinned) == PolyFrac(P("-2*a + g")));
    CHECK(pinned.params.size() == 2);
    CHECK(verify_system(pinned).all_pass());

    ResistiveSystem numeric = chen.substituted(
        {{sym("a"), Poly(35)}, {sym("b"), Poly(3)}, {sym("g"), Poly(28)}});
    CHECK(field_divergence(numeric) == PolyFrac(Poly(-10)));
    CHECK(numeric.params.empty());
    CHECK(verify_system(numeric).all_pass());

    // denominators must not be annihilated
    CHECK_THROWS_AS(chen.substituted({{sym("a"), Poly(0)}}), Error);
}

TEST_CASE("the rlc entry stays two-dimensional") {
    const auto& rlc = registry().find("rlc_circuit");
    CHECK(rlc.dimension == 2);
    CHECK(assemble(rlc).num().z.is_zero());
    CHECK_FALSE(rlc.H.num().symbols().count(kSymZ));
    CHECK(rlc.has_source());
    ResistiveSystem off = rlc.substituted({{sym("V"), Poly(0)}});
    CHECK_FALSE(off.has_source());
    CHECK(energy_rate(off) == PolyFrac::over(P("-R*y^2"), P("L")));
}
