#pragma once

#include <map>
#include <vector>

#include "edrc/gysin.hpp"
#include "edrc/slices.hpp"

namespace edrc::hypercoh {

struct LevelHomologyResult {
    std::size_t dim = 0;
    std::vector<ring::DiffForm> reps;
    bool certified = false;  // dims agreed across two consecutive margins
    int margin_used = 0;
};

struct CohomologyResult {
    std::vector<std::size_t> dims;  // index p
    std::map<int, std::vector<ring::DiffForm>> representatives;
    std::map<int, std::vector<ring::FiltrationStamp>> stamps;
    std::map<int, bool> certified;
    std::map<int, BigInt> bounds;
};

// H^p of the de Rham complex of forms over (ring, divisor^s) at a truncated
// slice, with margin stabilization in both order and degree.
LevelHomologyResult truncated_cohomology(const ring::AffineRingPtr& ring,
                                         const poly::MultiPoly& divisor, int p, int base_order,
                                         int base_degree, int max_margin);

// H^p of Omega_{f0 f1} / (Omega_{f0} + Omega_{f1}) at the (p, p) truncation.
LevelHomologyResult quotient_complex_cohomology(const gysin::GysinSetupPtr& setup, int p,
                                                int max_margin);

// (p+2)(d+d'+2)(2d'-d+3)^{2p+3}
BigInt hypersurface_degree_bound(int p, int d, int dprime);

// Cohomology of V = Z(f) \ Z(g): quotient complex at level p+2, residue map,
// pull-back through X0 -> 1/g. Representatives are reduced B-forms, i.e.
// forms on V over the divisor g.
CohomologyResult hypersurface_cohomology(const poly::MultiPoly& f, const poly::MultiPoly& g,
                                         int p_max, int max_margin = 4);

struct TotalLevelResult {
    std::size_t dim = 0;
    std::vector<cech::TotalCochain> reps;
    std::vector<ring::DiffForm> global_forms;  // zig-zag collapses of the reps
    std::vector<ring::FiltrationStamp> stamps;
    bool certified = false;
    int margin_used = 0;
};

// H^level of the Cech-de Rham total complex over the cover, each class
// collapsed to a single global form.
TotalLevelResult total_complex_cohomology(const cech::CoverPtr& cover, int level, int base_order,
                                          int base_degree, int max_margin);

// true iff the cochain is zero as a section, i.e. every entry lies in the
// dI-relation span of its cell
bool cochain_zero_mod_relations(const cech::CechCochain& c);
bool total_zero_mod_relations(const cech::TotalCochain& c);

}  // namespace edrc::hypercoh
