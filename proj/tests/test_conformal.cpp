#include <catch2/catch_amalgamated.hpp>

#include "rham/bihamiltonian.hpp"
#include "rham/conformal.hpp"

using namespace rham;

namespace {
const ResistiveSystem& get(const std::string& name) { return registry().find(name); }
Poly P(const std::string& s) { return parse_poly(s); }
}  // namespace

TEST_CASE("conformal table covers exactly the three splitting systems") {
    const auto& t = conformal_table();
    REQUIRE(t.size() == 3);
    REQUIRE(t.count("reduced_three_wave") == 1);
    REQUIRE(t.count("chen") == 1);
    REQUIRE(t.count("lu") == 1);
}

TEST_CASE("three wave conformal field") {
    const auto& d = conformal_table().at("reduced_three_wave");
    PolyVec3 cons = conservative_part(d);
    CHECK(cons == PolyVec3{P("-2*y^2 + d*y + z"), P("2*x*y - d*x"), P("-2*x*z")});
    CHECK(divergence(cons).is_zero());

    PolyVec3 field = conformal_field(d);
    CHECK(field == PolyVec3{P("-2*y^2 - 2*x + d*y + z"), P("2*x*y - d*x - 2*y"),
                            P("-2*x*z - 2*z")});

    // the flow constrained to g = -2, with d still free
    FracVec3 constrained = get("reduced_three_wave").substituted(d.constraint).reference_rhs;
    CHECK(FracVec3(field) == constrained);
    CHECK(field.x.symbols().count(sym("d")) == 1);

    CHECK(divergence(field) == Poly(-6));
}

TEST_CASE("chen conformal field") {
    const auto& d = conformal_table().at("chen");
    PolyVec3 cons = conservative_part(d);
    CHECK(cons == PolyVec3{P("a*y"), P("-2*a*x - x*z"), P("x*y")});
    CHECK(divergence(cons).is_zero());

    PolyVec3 field = conformal_field(d);
    CHECK(field == PolyVec3{P("a*y - a*x"), P("-2*a*x - a*y - x*z"), P("x*y - a*z")});
    CHECK(FracVec3(field) == get("chen").substituted(d.constraint).reference_rhs);
    CHECK(divergence(field) == P("-3*a"));

    // off the locus the registry field is not of this form
    CHECK_FALSE(FracVec3(field) == get("chen").reference_rhs);
}

TEST_CASE("lu conformal field") {
    const auto& d = conformal_table().at("lu");
    CHECK(conservative_part(d) == PolyVec3{P("a*y"), P("-x*z"), P("x*y")});
    PolyVec3 field = conformal_field(d);
    CHECK(field == PolyVec3{P("a*y - a*x"), P("-a*y - x*z"), P("x*y - a*z")});
    CHECK(FracVec3(field) == get("lu").substituted(d.constraint).reference_rhs);
    CHECK(divergence(field) == P("-3*a"));
}

TEST_CASE("conformal energy rate agrees with the resistive rate on the locus") {
    for (const char* name : {"reduced_three_wave", "chen", "lu"}) {
        const auto& d = conformal_table().at(name);
        Poly rate = euler_energy_rate(d);
        PolyFrac expected = energy_rate(get(name).substituted(d.constraint));
        CHECK(PolyFrac(rate) == expected);
    }
    CHECK(euler_energy_rate(conformal_table().at("reduced_three_wave")) ==
          P("-4*x^2 - 4*y^2 - 2*z"));
    CHECK(euler_energy_rate(conformal_table().at("chen")) == P("a^2*z - a*x^2"));
}

TEST_CASE("conformal_field rejects non volume preserving splittings") {
    ConformalDecomposition bad{"bad",
                               {P("0"), P("0"), P("x")},
                               P("y^2"),
                               Poly(1),
                               {},
                               ""};
    CHECK_THROWS_AS(conformal_field(bad), Error);
}

TEST_CASE("verify_conformal reports") {
    for (const char* name : {"reduced_three_wave", "chen", "lu"}) {
        Report rep = verify_conformal(get(name));
        INFO(name);
        CHECK(rep.all_pass());
        REQUIRE(rep.checks.size() == 4);
        CHECK(rep.checks[0].id == "conformal.jacobi");
        CHECK(rep.checks[1].id == "conformal.consdiv");
        CHECK(rep.checks[2].id == "conformal.match");
        CHECK(rep.checks[3].id == "conformal.div3a");
    }

    Report none = verify_conformal(get("rabinovich"));
    REQUIRE(none.checks.size() == 1);
    CHECK(none.checks[0].id == "conformal.none");
    CHECK(none.checks[0].status == CheckStatus::info);
    CHECK(none.all_pass());
}
