#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "edrc/certificates.hpp"
#include "oracles.hpp"

using namespace edrc;
using namespace edrc::certs;
using poly::MultiPoly;
using poly::parse_poly;

TEST_CASE("ns_bound branch selection") {
    CHECK(ns_bound(BigInt(1), 1, 2, 1, 1) == 1);    // t>m, d<3: 2*1*1 - 1
    CHECK(ns_bound(BigInt(2), 3, 1, 2, 3) == 6);    // t<=m: D d^t
    CHECK(ns_bound(BigInt(1), 3, 3, 2, 3) == 9);    // t>m, d>=3, m>=n-1: D d^m
    CHECK_THROWS_AS(ns_bound(BigInt(1), 0, 1, 1, 1), PreconditionError);
}

TEST_CASE("partition of unity on the line") {
    auto vars = poly::make_vars("x");
    auto ring = ring::AffineRing::free_ring(vars);
    auto cert = find_certificate(ring, {parse_poly("x", vars), parse_poly("1 - x", vars)}, 4);
    REQUIRE(cert.has_value());
    CHECK(cert->achieved_degree == 1);
    CHECK(cert->cofactors[0].is_one());
    CHECK(cert->cofactors[1].is_one());
}

TEST_CASE("certificate over a quotient ring") {
    auto vars = poly::make_vars("x,y");
    auto ring = ring::AffineRing::capped_quotient(vars, {parse_poly("x*y - 1", vars)}, 8);
    auto cert = find_certificate(ring, {parse_poly("x", vars)}, 4);
    REQUIRE(cert.has_value());
    // 1 = y * x mod (xy - 1)
    CHECK(cert->cofactors[0] == parse_poly("y", vars));
    CHECK(ring->is_zero_mod(cert->cofactors[0] * parse_poly("x", vars) -
                            MultiPoly::constant(vars, 1)));
}

TEST_CASE("common zero makes the search fail") {
    auto vars = poly::make_vars("x");
    auto ring = ring::AffineRing::free_ring(vars);
    CHECK(!find_certificate(ring, {parse_poly("x", vars), parse_poly("x^2", vars)}, 8)
               .has_value());
}

TEST_CASE("minimality of the achieved degree") {
    auto vars = poly::make_vars("x");
    auto ring = ring::AffineRing::free_ring(vars);
    // x and x - 2: 1 = (x - (x - 2))/2, degree 1
    auto cert = find_certificate(ring, {parse_poly("x", vars), parse_poly("x - 2", vars)}, 6);
    REQUIRE(cert.has_value());
    CHECK(cert->achieved_degree == 1);
    // infeasible one step below the found degree: constants cannot work
    MultiPoly combo = cert->cofactors[0] * parse_poly("x", vars) +
                      cert->cofactors[1] * parse_poly("x - 2", vars);
    CHECK(combo.is_one());
}

TEST_CASE("random battery: verified certificates under the branch bound") {
    Rng rng(321);
    auto vars = poly::make_vars("x,y");
    auto ring = ring::AffineRing::free_ring(vars);
    int found = 0;
    for (int it = 0; it < 12; ++it) {
        // g1 = x - a, g2 = x - b (a != b) have no common zeros
        Scalar a = Scalar(rng.range(-3, 3)), b = a + Scalar(rng.range(1, 3));
        MultiPoly g1 = poly::MultiPoly::variable(vars, 0) - MultiPoly::constant(vars, a);
        MultiPoly g2 = poly::MultiPoly::variable(vars, 0) - MultiPoly::constant(vars, b);
        BigInt bound = ns_bound(BigInt(1), 1, 2, 2, 2);
        auto cert = find_certificate(ring, {g1, g2}, static_cast<int>(bound.get_si()));
        REQUIRE(cert.has_value());
        CHECK(BigInt(cert->achieved_degree) <= bound);
        ++found;
    }
    CHECK(found == 12);
}

namespace {

std::vector<Component> paper_family(int d) {
    auto vars = poly::make_vars("x1,x2,x3");
    // Z1 = Z(x1, x2 x3^{d-1} - 1), Z2 = Z(x1 x3^{d-1} - x2^d)
    char buf[64];
    std::snprintf(buf, sizeof(buf), "x2*x3^%d - 1", d - 1);
    std::string f2 = d == 2 ? "x2*x3 - 1" : buf;
    std::snprintf(buf, sizeof(buf), "x1*x3^%d - x2^%d", d - 1, d);
    std::string f3 = d == 2 ? "x1*x3 - x2^2" : buf;
    Component z1{{parse_poly("x1", vars), parse_poly(f2, vars)}, BigInt(d), 1};
    Component z2{{parse_poly(f3, vars)}, BigInt(d), 2};
    return {z1, z2};
}

}  // namespace

TEST_CASE("idempotents: two points on a line") {
    auto vars = poly::make_vars("x");
    Component z1{{parse_poly("x", vars)}, BigInt(1), 0};
    Component z2{{parse_poly("x - 1", vars)}, BigInt(1), 0};

    auto jel = idempotents_jelonek({z1, z2}, 1, 16);
    CHECK(verify_idempotents(jel, 16));
    CHECK(jel.idempotents[0] == parse_poly("1 - x", vars));
    CHECK(jel.idempotents[1] == parse_poly("x", vars));

    auto kol = idempotents_kollar({z1, z2}, 1, 16);
    CHECK(verify_idempotents(kol, 16));
    CHECK(kol.idempotents[0] == parse_poly("1 - x", vars));
    CHECK(kol.idempotents[1] == parse_poly("x", vars));
}

TEST_CASE("single component") {
    auto vars = poly::make_vars("x");
    Component z{{parse_poly("x", vars)}, BigInt(1), 0};
    CHECK(idempotents_jelonek({z}, 1, 8).idempotents[0].is_one());
    CHECK(idempotents_kollar({z}, 1, 8).idempotents[0].is_one());
}

TEST_CASE("paper family at d = 2") {
    auto comps = paper_family(2);

    auto jel = idempotents_jelonek(comps, 3, 40);
    CHECK(verify_idempotents(jel, 40));
    CHECK(jel.max_degree >= 4);  // sharpness floor d^2

    auto kol = idempotents_kollar(comps, 3, 40);
    CHECK(verify_idempotents(kol, 40));
    CHECK(kol.max_degree >= 4);
    CHECK(kol.max_degree <= 16);  // (n+1) D^2 / 4 with n = 3, D = 4
    CHECK(kol.bound == 16);
}
