#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "edrc/cech.hpp"
#include "edrc/hypercoh.hpp"
#include "oracles.hpp"

using namespace edrc;
using namespace edrc::cech;
using poly::MultiPoly;
using poly::parse_poly;
using ring::DiffForm;
using ring::LocalizedElem;

namespace {

// affine line covered by x and x - 1
CoverPtr line_cover() {
    auto vars = poly::make_vars("x");
    auto ring = ring::AffineRing::free_ring(vars);
    return std::make_shared<const Cover>(
        ring, std::vector<MultiPoly>{parse_poly("x", vars), parse_poly("x - 1", vars)}, BigInt(1),
        1, 4);
}

// affine plane covered by x, y, x + y - 1
CoverPtr plane_cover() {
    auto vars = poly::make_vars("x,y");
    auto ring = ring::AffineRing::free_ring(vars);
    return std::make_shared<const Cover>(
        ring,
        std::vector<MultiPoly>{parse_poly("x", vars), parse_poly("y", vars),
                               parse_poly("x + y - 1", vars)},
        BigInt(1), 2, 6);
}

// hyperbola covered by x and y
CoverPtr hyperbola_cover() {
    auto vars = poly::make_vars("x,y");
    auto ring = ring::AffineRing::capped_quotient(vars, {parse_poly("x*y - 1", vars)}, 10);
    return std::make_shared<const Cover>(
        ring, std::vector<MultiPoly>{parse_poly("x", vars), parse_poly("y", vars)}, BigInt(2), 1,
        6);
}

DiffForm monomial_form(const CoverPtr& cover, const ring::IndexTuple& divisors,
                       const ring::IndexTuple& tuple, const std::string& num, int s) {
    MultiPoly div = cover->divisor_product(divisors);
    DiffForm w(cover->ring(), div, static_cast<int>(tuple.size()));
    w.add_term(tuple, LocalizedElem::make(cover->ring(), div,
                                          parse_poly(num, cover->ring()->vars()), s));
    return w;
}

CechCochain random_cochain(const CoverPtr& cover, int q, int p, int max_order, int deg, Rng& rng) {
    CechCochain c(cover, q, p);
    int t = static_cast<int>(cover->size());
    for (const auto& idx : hypercoh::increasing_tuples(t, q + 1)) {
        MultiPoly div = cover->divisor_product(idx);
        DiffForm w(cover->ring(), div, p);
        for (const auto& tup :
             hypercoh::increasing_tuples(static_cast<int>(cover->ring()->nvars()), p)) {
            int s = static_cast<int>(rng.range(0, max_order));
            w.add_term(tup, LocalizedElem::make(
                                cover->ring(), div,
                                oracles::random_poly(cover->ring()->vars(), deg, rng, 3), s));
        }
        c.add_entry(idx, w);
    }
    return c;
}

}  // namespace

TEST_CASE("cech differential on a two-set cover") {
    auto cover = line_cover();
    CechCochain c(cover, 0, 0);
    c.add_entry({0}, monomial_form(cover, {0}, {}, "x", 0));
    c.add_entry({1}, monomial_form(cover, {1}, {}, "1", 0));
    CechCochain d = cech_d(c);
    // entry (0,1) = eta_1 - eta_0 restricted
    DiffForm e = d.entry({0, 1});
    auto coeff = e.coefficient({});
    CHECK(coeff.order() == 0);
    CHECK(coeff.numerator() == parse_poly("1 - x", cover->ring()->vars()));
}

TEST_CASE("constant cochain is closed; delta o delta = 0") {
    auto cover = plane_cover();
    CechCochain ones(cover, 0, 0);
    for (int i = 0; i < 3; ++i)
        ones.add_entry({i}, monomial_form(cover, {i}, {}, "1", 0));
    CHECK(cech_d(ones).is_zero());

    Rng rng(7);
    for (int it = 0; it < 15; ++it) {
        CechCochain c = random_cochain(cover, 0, it % 2, 2, 3, rng);
        CHECK(cech_d(cech_d(c)).is_zero());
    }
}

TEST_CASE("partial fractions preimage on the line") {
    auto cover = line_cover();
    // w = 1/(x(x-1)) as a 1-cochain at q = 1
    CechCochain w(cover, 1, 0);
    w.add_entry({0, 1}, monomial_form(cover, {0, 1}, {}, "1", 1));
    CHECK(cech_d(w).is_zero());
    CechCochain eta = cocycle_preimage(w, 1);
    CHECK(cech_d(eta).minus(w).is_zero());
    // classical split: 1/(x(x-1)) = 1/(x-1) - 1/x; check by evaluation
    auto vars = cover->ring()->vars();
    DiffForm e0 = eta.entry({0}), e1 = eta.entry({1});
    auto c0 = e0.coefficient({}), c1 = e1.coefficient({});
    Rng rng(12);
    for (int it = 0; it < 5; ++it) {
        Scalar p = rng.rational(9) + Scalar(3);  // stay away from the poles
        Scalar v0 = c0.numerator().eval({p}) / p;
        Scalar v1 = c1.numerator().eval({p}) / (p - 1);
        Scalar target = Scalar(1) / (p * (p - 1));
        CHECK(v1 - v0 == target);
    }
}

TEST_CASE("preimage contract on random coboundaries") {
    Rng rng(2718);
    auto check_cover = [&](const CoverPtr& cover, int p) {
        for (int it = 0; it < 8; ++it) {
            CechCochain c = random_cochain(cover, 0, p, 2, 3, rng);
            CechCochain w = cech_d(c);
            if (w.is_zero()) continue;
            int s = std::max(1, w.max_order());
            long d_in = w.max_degree_stamp();
            CechCochain eta = cocycle_preimage(w, s);
            CHECK(cech_d(eta).minus(w).is_zero());
            BigInt shift = cover->preimage_degree_shift(s);
            for (const auto& [idx, form] : eta.entries()) {
                auto st = ring::filtration_stamp(form);
                CHECK(st.order_s <= s);
                CHECK(BigInt(st.degree_d) <= BigInt(d_in) + shift);
            }
        }
    };
    check_cover(line_cover(), 0);
    check_cover(plane_cover(), 0);
    check_cover(plane_cover(), 1);
}

TEST_CASE("zero cochain maps to zero") {
    auto cover = line_cover();
    CechCochain zero(cover, 1, 0);
    CHECK(cocycle_preimage(zero, 1).is_zero());
}

TEST_CASE("total differential squares to zero") {
    auto cover = plane_cover();
    Rng rng(99);
    for (int it = 0; it < 20; ++it) {
        TotalCochain c(cover, 1);
        c.add_cell(random_cochain(cover, 0, 1, 1, 2, rng));
        c.add_cell(random_cochain(cover, 1, 0, 1, 2, rng));
        CHECK(total_d(total_d(c)).is_zero());
    }
    TotalCochain c(cover, 0);
    CechCochain ones(cover, 0, 0);
    for (int i = 0; i < 3; ++i) ones.add_entry({i}, monomial_form(cover, {i}, {}, "1", 0));
    c.add_cell(ones);
    CHECK(total_d(c).is_zero());
}

TEST_CASE("zigzag: bottom row already glued") {
    auto cover = line_cover();
    auto vars = cover->ring()->vars();
    // closed global 1-form on the line
    DiffForm alpha(cover->ring(), MultiPoly::constant(vars, 1), 1);
    alpha.add_term({0}, LocalizedElem::regular(cover->ring(), MultiPoly::constant(vars, 1),
                                               parse_poly("x^2 + 1", vars)));
    TotalCochain c = embed_global(cover, alpha);
    ZigzagResult z = zigzag_collapse(c);
    CHECK(z.alpha.coefficient({0}).numerator() == parse_poly("x^2 + 1", vars));
    CHECK(z.corrections.empty());
}

TEST_CASE("zigzag: trivializing cover member") {
    // hyperbola covered by g0 = x and g1 = 1; dx/x fed as a bottom-row cochain
    auto vars = poly::make_vars("x,y");
    auto ring = ring::AffineRing::capped_quotient(vars, {parse_poly("x*y - 1", vars)}, 10);
    auto cover = std::make_shared<const Cover>(
        ring, std::vector<MultiPoly>{parse_poly("x", vars), parse_poly("1", vars)}, BigInt(2), 1,
        4);
    TotalCochain c(cover, 1);
    CechCochain bottom(cover, 0, 1);
    // dx/x over U_0 and its regular representative y dx over U_1 = X
    bottom.add_entry({0}, monomial_form(cover, {0}, {0}, "1", 1));
    bottom.add_entry({1}, monomial_form(cover, {1}, {0}, "y", 0));
    c.add_cell(bottom);
    ZigzagResult z = zigzag_collapse(c);
    // the glued global form is y dx, the regular representative of dx/x
    CHECK(z.alpha.degree_p() == 1);
    CHECK(ring->is_zero_mod(z.alpha.coefficient({0}).numerator() - parse_poly("y", vars)));
}

TEST_CASE("zigzag on a hyperbola class built from patches") {
    auto cover = hyperbola_cover();
    auto vars = cover->ring()->vars();
    // H^1 generator: dx/x on U_0, -dy/y on U_1; on the overlap they agree since
    // dx/x + dy/y = d(xy)/(xy) = 0 on the curve
    CechCochain bottom(cover, 0, 1);
    bottom.add_entry({0}, monomial_form(cover, {0}, {0}, "1", 1));
    bottom.add_entry({1}, monomial_form(cover, {1}, {1}, "-1", 1));
    TotalCochain c(cover, 1);
    c.add_cell(bottom);
    TotalCochain dc = total_d(c);
    CHECK(hypercoh::total_zero_mod_relations(dc));
    ZigzagResult z = zigzag_collapse(c);
    CHECK(z.alpha.degree_p() == 1);
    // the collapsed class is closed
    CHECK(hypercoh::form_in_relation_span(ring::exterior_d(z.alpha), 3));
}
