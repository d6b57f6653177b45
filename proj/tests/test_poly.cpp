#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "edrc/poly.hpp"
#include "oracles.hpp"

using namespace edrc;
using namespace edrc::poly;

TEST_CASE("arith basics") {
    auto vars = make_vars("x,y");
    auto x = MultiPoly::variable(vars, 0);
    auto one = MultiPoly::constant(vars, 1);
    CHECK((x + one) * (x - one) == x * x - one);
    CHECK((x * MultiPoly::zero(vars)).is_zero());

    auto v3 = make_vars("x1,x2,x3");
    auto f = parse_poly("x2*x3 - 1", v3);
    auto g = parse_poly("x1", v3);
    CHECK(f * g == parse_poly("x1*x2*x3 - x1", v3));
}

TEST_CASE("evaluation homomorphism on random products") {
    auto vars = make_vars("x,y,z");
    Rng rng(7);
    for (int it = 0; it < 20; ++it) {
        auto f = oracles::random_poly(vars, 4, rng);
        auto g = oracles::random_poly(vars, 4, rng);
        auto p = oracles::random_point(3, rng);
        CHECK((f * g).eval(p) == f.eval(p) * g.eval(p));
        CHECK((f + g).eval(p) == f.eval(p) + g.eval(p));
    }
}

TEST_CASE("degree bookkeeping") {
    auto vars = make_vars("x,y");
    CHECK(MultiPoly::zero(vars).total_degree() == kDegZero);
    auto f = parse_poly("x^2*y - y", vars);
    CHECK(f.total_degree() == 3);
    auto g = parse_poly("x + 1", vars);
    CHECK((f * g).total_degree() == f.total_degree() + g.total_degree());
}

TEST_CASE("partial derivative against dual numbers") {
    auto vars = make_vars("x,y");
    CHECK(partial_derivative(parse_poly("y^2 - x^3 + x", vars), 1) == parse_poly("2*y", vars));
    CHECK(partial_derivative(MultiPoly::constant(vars, 5), 0).is_zero());

    auto v3 = make_vars("x1,x2,x3");
    auto f = parse_poly("x2*x3^2 - 1", v3);  // d = 3 family member
    CHECK(partial_derivative(f, 2) == parse_poly("2*x2*x3", v3));

    Rng rng(11);
    for (int it = 0; it < 12; ++it) {
        auto g = oracles::random_poly(v3, 5, rng);
        auto p = oracles::random_point(3, rng);
        for (std::size_t v = 0; v < 3; ++v)
            CHECK(partial_derivative(g, v).eval(p) == oracles::dual_derivative(g, v, p));
    }
}

TEST_CASE("monic division") {
    auto vars = make_vars("x,y");
    auto f = parse_poly("y^3", vars);
    auto g = parse_poly("y^2 - x^3 + x", vars);
    auto [q, r] = monic_division(f, g, 1);
    CHECK(q == parse_poly("y", vars));
    CHECK(r == parse_poly("y*x^3 - y*x", vars));
    CHECK(q * g + r == f);

    auto [q2, r2] = monic_division(g, g, 1);
    CHECK(q2.is_one());
    CHECK(r2.is_zero());

    auto low = parse_poly("y + x", vars);
    auto [q3, r3] = monic_division(low, g, 1);
    CHECK(q3.is_zero());
    CHECK(r3 == low);

    CHECK_THROWS_AS(monic_division(f, parse_poly("x*y + 1", vars), 1), PreconditionError);

    Rng rng(3);
    for (int it = 0; it < 10; ++it) {
        auto a = oracles::random_poly(vars, 5, rng);
        auto [qq, rr] = monic_division(a, g, 1);
        CHECK(qq * g + rr == a);
        CHECK((rr.is_zero() || rr.degree_in(1) < g.degree_in(1)));
    }
}

TEST_CASE("substitution") {
    auto vars = make_vars("x,y");
    auto f = parse_poly("x*y", vars);
    std::vector<MultiPoly> vals{MultiPoly::variable(vars, 0), MultiPoly::variable(vars, 1)};
    CHECK(substitute(f, vals) == f);
    // constants stay put
    auto c = MultiPoly::constant(vars, scalar_of(3, 2));
    CHECK(substitute(c, vals) == c);
    CHECK_THROWS_AS(substitute(f, {MultiPoly::variable(vars, 0)}), PreconditionError);
}

TEST_CASE("linear change of coordinates") {
    auto vars = make_vars("x,y");
    auto f = parse_poly("x^2*y", vars);
    auto id = ScalarMatrix::identity(2);
    CHECK(linear_change(f, id) == f);

    ScalarMatrix swap = ScalarMatrix::identity(2);
    swap.at(0, 0) = 0;
    swap.at(1, 1) = 0;
    swap.at(0, 1) = 1;
    swap.at(1, 0) = 1;
    CHECK(linear_change(f, swap) == parse_poly("y^2*x", vars));

    ScalarMatrix shear = ScalarMatrix::identity(2);
    shear.at(0, 1) = 1;  // x -> x + y
    CHECK(linear_change(parse_poly("x^2", vars), shear) == parse_poly("x^2 + 2*x*y + y^2", vars));

    ScalarMatrix sing = ScalarMatrix::identity(2);
    sing.at(1, 1) = 0;
    CHECK_THROWS_AS(linear_change(f, sing), PreconditionError);

    // M then M^{-1} is the identity
    Rng rng(23);
    for (int it = 0; it < 8; ++it) {
        ScalarMatrix m = ScalarMatrix::identity(2);
        m.at(0, 1) = rng.rational(4);
        m.at(1, 0) = rng.rational(4);
        if (!m.inverse()) continue;
        auto g = oracles::random_poly(vars, 4, rng);
        CHECK(linear_change(linear_change(g, m), *m.inverse()) == g);
        CHECK(linear_change(g, m).total_degree() == g.total_degree());
    }
}

TEST_CASE("exact divide") {
    auto vars = make_vars("x,y");
    auto f = parse_poly("x^2 - y^2", vars);
    auto g = parse_poly("x - y", vars);
    auto q = exact_divide(f, g);
    REQUIRE(q.has_value());
    CHECK(*q == parse_poly("x + y", vars));
    CHECK(!exact_divide(parse_poly("x^2 + 1", vars), g).has_value());
}

TEST_CASE("canonical printing and parsing round trip") {
    auto vars = make_vars("x,y");
    auto f = parse_poly("-2*x*y + 1/2*x + y^2 - 1", vars);
    std::string s = f.str();
    CHECK(s == "-2*x*y + y^2 + 1/2*x - 1");
    CHECK(parse_poly(s, vars) == f);
    CHECK(MultiPoly::zero(vars).str() == "0");

    CHECK_THROWS_AS(parse_poly("x + ", vars), ParseError);
    CHECK_THROWS_AS(parse_poly("z", vars), ParseError);
    CHECK_THROWS_AS(parse_poly("x y", vars), ParseError);  // implicit multiplication forbidden
    try {
        parse_poly("x +\n  q", vars);
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.col == 3);
    }
}

TEST_CASE("canonical form has no hidden zeros") {
    auto vars = make_vars("x,y");
    auto f = parse_poly("x + y", vars);
    auto g = f - parse_poly("y", vars);
    CHECK(g.term_count() == 1);
    CHECK(g == parse_poly("x", vars));
}
