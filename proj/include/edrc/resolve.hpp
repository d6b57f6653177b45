#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "edrc/certificates.hpp"
#include "edrc/ring.hpp"

namespace edrc::resolve {

using poly::MultiPoly;
using poly::ScalarMatrix;
using ring::AffineRingPtr;
using ring::DiffForm;
using ring::LocalizedElem;

struct VarietyData {
    poly::VarSetPtr vars;
    std::vector<MultiPoly> generators;
    int dim_m = 0;
    BigInt degree_D = 1;
    int membership_cap = 16;  // cofactor degree slack for ideal membership systems
};

// One birational chart: after the coordinate change x' = change * x, the
// projection to the first m+1 coordinates maps U = X \ Z(g) isomorphically
// onto V = Z(f) \ Z(g), with inverse X'_{m+i} = -w_i / g.
struct PatchChart {
    ScalarMatrix change, change_inv;
    poly::VarSetPtr chart_vars;       // m+1 variables
    poly::VarSetPtr transformed_vars; // all n variables after the change
    MultiPoly f;                      // in chart_vars, monic in the last one
    MultiPoly g;                      // df/dX_{m+1} in chart_vars
    std::vector<MultiPoly> w;         // w_i for X_{m+i}, i = 2..r, in chart_vars
    MultiPoly g_on_x;                 // g written in the original coordinates
    AffineRingPtr chart_ring;         // k[chart_vars]/(f)
    AffineRingPtr transformed_ring;   // k[x']/I(X) after the change
};

// Substitution with localized values sharing one ring and divisor.
LocalizedElem substitute_localized(const MultiPoly& f, const std::vector<LocalizedElem>& values);

PatchChart birational_projection(const VarietyData& x,
                                 const std::vector<std::vector<Scalar>>& avoid_points,
                                 std::uint64_t seed);

struct PatchCover {
    std::vector<PatchChart> charts;
    certs::Certificate cover_certificate;  // the chart divisors have no common zero on X
    bool heuristic_points = false;         // residual points were not all rational
};

PatchCover patch_cover(const VarietyData& x, std::uint64_t seed);

// Image H of a function h on the chart side: h(inverse map) = H / g^{deg h},
// with deg H <= deg h * deg X checked.
MultiPoly chart_image(const PatchChart& chart, const VarietyData& x, const MultiPoly& h_transformed);

// Forms on V' = Z(f) \ Z(g H) carried to U' = X \ Z(g h), written in the
// original coordinates over the divisor g_on_x * h_on_x. The stamp law
// (s, d) -> (s (deg h + 1), d) is checked.
DiffForm transport_form(const PatchChart& chart, const VarietyData& x, const MultiPoly& h_on_x,
                        const DiffForm& w_chart);

// Pullback of a form through the linear substitution x_i -> sum_j m(i,j) x_j.
DiffForm pullback_linear(const AffineRingPtr& target_ring, const MultiPoly& target_divisor,
                         const DiffForm& w, const ScalarMatrix& m);

}  // namespace edrc::resolve
