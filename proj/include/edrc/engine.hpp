#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "edrc/certificates.hpp"
#include "edrc/hypercoh.hpp"
#include "edrc/resolve.hpp"

namespace edrc::engine {

struct BoundsInputs {
    std::optional<int> p, m, n, D, d, dprime, d0, d1, s, ell, t, deg_alpha;
    std::vector<BigInt> component_degrees;
};

// exact big-integer evaluation of every closed-form bound
struct BoundReport {
    std::map<std::string, BigInt> values;
};

BoundReport bounds_report(const BoundsInputs& in);

// main headline bound 2^{2pm+6m+2} p^{2pm+6m+1} D^{4pm+10m+1} + D^{m+1}
BigInt main_bound(int p, int m, const BigInt& D);

struct VarietySpec {
    poly::VarSetPtr vars;
    std::vector<poly::MultiPoly> generators;
    int dim_m = 0;
    BigInt degree_D = 1;
    std::vector<certs::Component> components;  // optional decomposition
    int membership_cap = 16;
};

// direct global-section de Rham computation; the cross-validation route
hypercoh::CohomologyResult closed_variety_cohomology(const VarietySpec& x, int p_max,
                                                     int max_margin = 4);

struct PatchReport {
    std::vector<std::size_t> dims;
    std::map<int, std::vector<ring::FiltrationStamp>> chart_stamps;      // hypersurface side
    std::map<int, std::vector<ring::FiltrationStamp>> transported_stamps;  // after Cor-style carry
};

struct PipelineResult {
    hypercoh::CohomologyResult cohomology;
    std::vector<PatchReport> patch_reports;  // one per chart when enabled
    std::size_t chart_count = 0;
    bool heuristic_cover_points = false;
};

// cover -> per-patch hypersurface route (optional report) -> total-complex
// zig-zag to global forms; components recombined through idempotents
PipelineResult full_pipeline(const VarietySpec& x, int p_max, std::uint64_t seed,
                             int max_margin = 4, bool patch_reports = false);

// canonical representative string used in the result JSON
std::string form_to_string(const ring::DiffForm& w);

}  // namespace edrc::engine
