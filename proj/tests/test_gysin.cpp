#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "edrc/gysin.hpp"
#include "oracles.hpp"

using namespace edrc;
using namespace edrc::gysin;
using poly::MultiPoly;
using poly::parse_poly;
using ring::DiffForm;
using ring::LocalizedElem;

namespace {

// Z = a point: f = x, g = 1 in one variable
GysinSetupPtr point_setup() {
    auto vars = poly::make_vars("x");
    return std::make_shared<const GysinSetup>(parse_poly("x", vars), parse_poly("1", vars));
}

// Z = punctured line: f = y, g = x in two variables
GysinSetupPtr punctured_line_setup() {
    auto vars = poly::make_vars("x,y");
    return std::make_shared<const GysinSetup>(parse_poly("y", vars), parse_poly("x", vars));
}

LocalizedElem b_elem(const GysinSetupPtr& s, const std::string& num, int order) {
    return LocalizedElem::make(s->b_ring(), s->g_orig(),
                               parse_poly(num, s->b_ring()->vars()), order);
}

// random reduced B-form of degree p over the punctured-line setup
DiffForm random_b_form(const GysinSetupPtr& s, int p, Rng& rng) {
    DiffForm w = zero_b_form(*s, p);
    auto vars = s->b_ring()->vars();
    if (p == 0) {
        w.add_term({}, LocalizedElem::make(s->b_ring(), s->g_orig(),
                                           oracles::random_poly(vars, 2, rng, 3),
                                           static_cast<int>(rng.range(0, 2))));
    } else if (p == 1 && s->n() >= 2) {
        w.add_term({0}, LocalizedElem::make(s->b_ring(), s->g_orig(),
                                            oracles::random_poly(vars, 2, rng, 3),
                                            static_cast<int>(rng.range(0, 2))));
    }
    return w;
}

}  // namespace

TEST_CASE("setup validation") {
    auto vars = poly::make_vars("x,y");
    CHECK_THROWS_AS(GysinSetup(parse_poly("x*y - 1", vars), parse_poly("1", vars)),
                    PreconditionError);  // not monic in y
    CHECK_THROWS_AS(GysinSetup(parse_poly("y^2 - x", vars), parse_poly("x", vars)),
                    PreconditionError);  // df/dy = 2y does not divide x
    GysinSetup ok(parse_poly("y^2 - x^3 + x", vars), parse_poly("2*y", vars));
    CHECK(ok.d0() == 2);
    CHECK(ok.d1() == 3);
    CHECK(ok.gamma() == 2);
}

TEST_CASE("i_decompose basics") {
    auto s = punctured_line_setup();
    // t = f0 at level 1
    auto t1 = i_decompose(s->f0(), 1, *s, 2);
    CHECK(t1[{1, 0}].is_one());
    CHECK(t1[{0, 1}].is_zero());
    // t = f0 f1 + f1^2 at level 2
    auto t2 = i_decompose(s->f0() * s->f1() + s->f1() * s->f1(), 2, *s, 2);
    CHECK(t2[{1, 1}].is_one());
    CHECK(t2[{0, 2}].is_one());
    CHECK(t2[{2, 0}].is_zero());
    // 1 is not in the ideal
    CHECK_THROWS_AS(i_decompose(MultiPoly::constant(s->ambient_vars(), 1), 1, *s, 4),
                    ComputationError);
}

TEST_CASE("coordinate lift stabilizes for the point setup") {
    auto s = point_setup();
    s->ensure_level(4);
    // the classes of X0 and x are 1 and 0, so the lift is constant and every
    // later layer vanishes
    auto series0 = s->lift_series(0);
    CHECK(series0.size() == 1);
    CHECK(series0[{0, 0}].is_one());
    auto series1 = s->lift_series(1);
    CHECK(series1.empty());
    CHECK(s->max_layer_degree() <= s->gamma());
    auto y = s->lift_coordinates();
    CHECK(y[0].is_one());
    CHECK(y[1].is_zero());
}

TEST_CASE("lift layers satisfy the degree cap") {
    // generic position (deg_Xn f = deg f): the constant cap applies
    auto s = punctured_line_setup();
    CHECK(s->generic_position());
    s->ensure_level(5);
    CHECK(s->max_layer_degree() <= s->gamma());

    auto p = point_setup();
    CHECK(p->generic_position());
    p->ensure_level(5);
    CHECK(p->max_layer_degree() <= p->gamma());

    // outside that position the layer degrees grow with the level; the lift
    // still verifies its defect equations at every step
    auto vars = poly::make_vars("x,y");
    auto e = std::make_shared<const GysinSetup>(parse_poly("y^2 - x^3 + x", vars),
                                                parse_poly("2*y", vars));
    CHECK(!e->generic_position());
    e->ensure_level(4);
    CHECK(e->level() >= 4);
}

TEST_CASE("psihat_inverse on the point setup") {
    auto s = point_setup();
    auto x0 = MultiPoly::variable(s->ambient_vars(), 0);
    auto x1 = MultiPoly::variable(s->ambient_vars(), 1);
    // X0 = 1 + T0
    BiSeries b = psihat_inverse(s, x0, 2, 2);
    CHECK(loc_equal(b.at(0, 0, *s), b_elem(s, "1", 0)));
    CHECK(loc_equal(b.at(1, 0, *s), b_elem(s, "1", 0)));
    CHECK(b.at(0, 1, *s).is_zero());
    CHECK(b.at(2, 0, *s).is_zero());
    // x = T1
    BiSeries c = psihat_inverse(s, x1, 2, 2);
    CHECK(c.at(0, 0, *s).is_zero());
    CHECK(loc_equal(c.at(0, 1, *s), b_elem(s, "1", 0)));
    // X0 * x = (1 + T0) T1
    BiSeries d = psihat_inverse(s, x0 * x1, 2, 2);
    CHECK(loc_equal(d.at(0, 1, *s), b_elem(s, "1", 0)));
    CHECK(loc_equal(d.at(1, 1, *s), b_elem(s, "1", 0)));
    CHECK(d.at(0, 0, *s).is_zero());
}

TEST_CASE("psihat_inverse on the punctured line") {
    auto s = punctured_line_setup();
    // X0 = (1/x)(1 + T0)
    BiSeries b = psihat_inverse(s, MultiPoly::variable(s->ambient_vars(), 0), 2, 2);
    CHECK(loc_equal(b.at(0, 0, *s), b_elem(s, "1", 1)));
    CHECK(loc_equal(b.at(1, 0, *s), b_elem(s, "1", 1)));
    CHECK(b.at(2, 0, *s).is_zero());
    CHECK(b.at(0, 1, *s).is_zero());
    // y = T1
    BiSeries c = psihat_inverse(s, MultiPoly::variable(s->ambient_vars(), 2), 2, 2);
    CHECK(c.at(0, 0, *s).is_zero());
    CHECK(loc_equal(c.at(0, 1, *s), b_elem(s, "1", 0)));
}

TEST_CASE("residue in coordinates") {
    auto s = point_setup();
    // w = dX0 ^ dx / (f0 f1) -> Res = 1
    DiffForm w(s->ambient_ring(), s->divisor_product(), 2);
    w.add_term({0, 1}, LocalizedElem::make(s->ambient_ring(), s->divisor_product(),
                                           MultiPoly::constant(s->ambient_vars(), 1), 1));
    auto res = residue(s, QuotientForm{w});
    REQUIRE(res.form.degree_p() == 0);
    CHECK(loc_equal(res.form.coefficient({}), b_elem(s, "1", 0)));
}

TEST_CASE("lambda then residue is the identity (point)") {
    auto s = point_setup();
    Rng rng(5);
    for (int it = 0; it < 25; ++it) {
        DiffForm w = random_b_form(s, 0, rng);
        QuotientForm lw = lambda_map(s, w);
        auto res = residue(s, lw, false);
        DiffForm diff = res.form.minus(w);
        bool zero = true;
        for (const auto& [idx, c] : diff.coefficients())
            if (!loc_equal(c, b_elem(s, "0", 0))) zero = false;
        CHECK(zero);
    }
}

TEST_CASE("lambda then residue is the identity (punctured line)") {
    auto s = punctured_line_setup();
    // the generator X0 dx of H^1
    DiffForm gen = zero_b_form(*s, 1);
    gen.add_term({0}, b_elem(s, "1", 1));
    auto res = residue(s, lambda_map(s, gen));
    REQUIRE(res.form.degree_p() == 1);
    CHECK(loc_equal(res.form.coefficient({0}), b_elem(s, "1", 1)));

    Rng rng(7);
    for (int it = 0; it < 25; ++it) {
        int p = it % 2;
        DiffForm w = random_b_form(s, p, rng);
        auto out = residue(s, lambda_map(s, w), false);
        DiffForm diff = out.form.minus(w);
        bool zero = true;
        for (const auto& [idx, c] : diff.coefficients())
            if (!loc_equal(c, b_elem(s, "0", 0))) zero = false;
        CHECK(zero);
        CHECK(BigInt(out.stamp_degree) <= out.degree_bound);
    }
}

TEST_CASE("lambda of an exact form is exact in the quotient") {
    auto s = punctured_line_setup();
    Rng rng(11);
    for (int it = 0; it < 10; ++it) {
        DiffForm eta = random_b_form(s, 0, rng);
        DiffForm deta = b_exterior_d(*s, eta);
        QuotientForm l = lambda_map(s, deta);
        // d(lambda(eta)) should equal lambda(d eta) modulo the denominator
        // subspace; res of it is then d-exact, here it must vanish for p too low
        auto res = residue(s, l);
        // residue of an exact class pairs to an exact B-form: for 1-forms over
        // the punctured line, d-exact means zero constant coefficient at dx/x
        CHECK(b_form_is_zero(*s, b_exterior_d(*s, res.form)));
    }
}

TEST_CASE("psihat degree stamps respect the gamma rule") {
    auto s = punctured_line_setup();
    Rng rng(13);
    for (int it = 0; it < 10; ++it) {
        MultiPoly a = oracles::random_poly(s->ambient_vars(), 3, rng, 4);
        if (a.is_zero()) continue;
        // throws when a stamp exceeds gamma^{mu+nu} deg a
        BiSeries b = psihat_inverse(s, a, 2, 2);
        (void)b;
        CHECK(true);
    }
}
