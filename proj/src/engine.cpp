#include "edrc/engine.hpp"

#include <algorithm>
#include <sstream>

namespace edrc::engine {

using poly::MultiPoly;
using ring::DiffForm;

BigInt main_bound(int p, int m, const BigInt& D) {
    if (p < 0 || m < 0) throw PreconditionError("main_bound: negative inputs");
    unsigned long pm = static_cast<unsigned long>(p) * static_cast<unsigned long>(m);
    BigInt term = big_pow(BigInt(2), 2 * pm + 6 * static_cast<unsigned long>(m) + 2) *
                  big_pow(BigInt(p), 2 * pm + 6 * static_cast<unsigned long>(m) + 1) *
                  big_pow(D, 4 * pm + 10 * static_cast<unsigned long>(m) + 1);
    return term + big_pow(D, static_cast<unsigned long>(m) + 1);
}

BoundReport bounds_report(const BoundsInputs& in) {
    BoundReport out;
    auto need = [](const std::optional<int>& v, const char* name) {
        if (!v) throw PreconditionError(std::string("bounds_report: missing input ") + name);
        return *v;
    };
    if (in.p && in.m && in.D) out.values["main"] = main_bound(*in.p, *in.m, BigInt(*in.D));
    if (in.D && in.m)
        out.values["prop31"] = big_pow(BigInt(*in.D), static_cast<unsigned long>(*in.m) + 1);
    if (in.D && in.n) {
        BigInt d(*in.D);
        out.values["prop32"] = BigInt(*in.n + 1) * d * d / 4;
    }
    if (in.D && in.d && in.t && in.m && in.n)
        out.values["thm21"] =
            certs::ns_bound(BigInt(*in.D), need(in.d, "d"), *in.t, *in.m, *in.n);
    if (in.n && !in.component_degrees.empty()) {
        BigInt prod(1);
        for (const auto& deg : in.component_degrees) prod *= deg;
        out.values["thm22"] = BigInt(*in.n + 1) * prod;
    }
    if (in.D && in.s && in.d1 && in.m)
        out.values["lemma51_N"] =
            2 * BigInt(*in.D) *
            big_pow(BigInt(*in.s) * BigInt(*in.d1), static_cast<unsigned long>(*in.m));
    if (in.d && in.D && in.ell && in.s && in.d1 && in.m)
        out.values["thm53"] = BigInt(*in.d) + 2 * BigInt(*in.D) * BigInt(*in.ell + 1) *
                                                  big_pow(BigInt(*in.s + *in.ell),
                                                          static_cast<unsigned long>(*in.m)) *
                                                  big_pow(BigInt(*in.d1),
                                                          static_cast<unsigned long>(*in.m));
    if (in.d0 && in.d1 && in.s && in.deg_alpha)
        out.values["thm62"] = big_pow(BigInt(2 * *in.d0 - *in.d1 + 1),
                                      static_cast<unsigned long>(2 * *in.s - 1)) *
                              BigInt(*in.deg_alpha);
    if (in.p && in.d && in.dprime)
        out.values["thm71"] = hypercoh::hypersurface_degree_bound(*in.p, *in.d, *in.dprime);
    if (out.values.empty())
        throw PreconditionError("bounds_report: no formula computable from the given inputs");
    return out;
}

namespace {

int default_base_degree(const VarietySpec& x, int p) {
    int gd = 2;
    for (const auto& g : x.generators) gd = std::max(gd, g.total_degree());
    return p + gd + 1;
}

ring::AffineRingPtr variety_ring(const VarietySpec& x) {
    int cap = default_base_degree(x, 4) + x.membership_cap;
    return ring::AffineRing::auto_quotient(x.vars, x.generators, cap);
}

}  // namespace

hypercoh::CohomologyResult closed_variety_cohomology(const VarietySpec& x, int p_max,
                                                     int max_margin) {
    auto ring = variety_ring(x);
    MultiPoly one = MultiPoly::constant(x.vars, 1);
    hypercoh::CohomologyResult out;
    out.dims.assign(static_cast<std::size_t>(p_max) + 1, 0);
    for (int p = 0; p <= p_max; ++p) {
        auto level = hypercoh::truncated_cohomology(ring, one, p, 0, default_base_degree(x, p),
                                                    max_margin);
        out.dims[static_cast<std::size_t>(p)] = level.dim;
        out.certified[p] = level.certified;
        std::vector<ring::FiltrationStamp> stamps;
        for (const auto& r : level.reps) stamps.push_back(ring::filtration_stamp(r));
        out.stamps[p] = std::move(stamps);
        out.representatives[p] = std::move(level.reps);
        out.bounds[p] = main_bound(p, x.dim_m, x.degree_D);
    }
    return out;
}

namespace {

PipelineResult pipeline_single_component(const VarietySpec& x, int p_max, std::uint64_t seed,
                                         int max_margin, bool patch_reports) {
    PipelineResult out;
    resolve::VarietyData data{x.vars, x.generators, x.dim_m, x.degree_D, x.membership_cap};
    resolve::PatchCover cover_data = resolve::patch_cover(data, seed);
    out.chart_count = cover_data.charts.size();
    out.heuristic_cover_points = cover_data.heuristic_points;

    auto ring = variety_ring(x);
    std::vector<MultiPoly> divisors;
    for (const auto& c : cover_data.charts) divisors.push_back(c.g_on_x);
    int cert_cap = static_cast<int>(cover_data.cover_certificate.achieved_degree) +
                   x.membership_cap;
    auto cover = std::make_shared<const cech::Cover>(
        ring, divisors, x.degree_D, x.dim_m, std::max(cert_cap, 2));

    // per-patch hypersurface route, reported and used to seed truncations
    int seed_degree = 0;
    if (patch_reports) {
        for (const auto& chart : cover_data.charts) {
            PatchReport report;
            auto coh = hypercoh::hypersurface_cohomology(chart.f, chart.g, p_max, max_margin);
            report.dims = coh.dims;
            for (const auto& [p, stamps] : coh.stamps) {
                report.chart_stamps[p] = stamps;
                std::vector<ring::FiltrationStamp> carried;
                for (const auto& st : stamps) {
                    // transport law with h = 1: orders carry, degrees carry
                    carried.push_back(st);
                    seed_degree = std::max(seed_degree, st.degree_d);
                }
                report.transported_stamps[p] = std::move(carried);
            }
            out.patch_reports.push_back(std::move(report));
        }
    }

    auto& coh = out.cohomology;
    coh.dims.assign(static_cast<std::size_t>(p_max) + 1, 0);
    for (int ell = 0; ell <= p_max; ++ell) {
        int base_degree = std::max(default_base_degree(x, ell), seed_degree > 0 ? seed_degree : 0);
        auto level = hypercoh::total_complex_cohomology(cover, ell, ell + 1, base_degree,
                                                        max_margin);
        coh.dims[static_cast<std::size_t>(ell)] = level.dim;
        coh.certified[ell] = level.certified;
        coh.stamps[ell] = level.stamps;
        coh.representatives[ell] = level.global_forms;
        coh.bounds[ell] = main_bound(ell, x.dim_m, x.degree_D);
    }
    return out;
}

}  // namespace

PipelineResult full_pipeline(const VarietySpec& x, int p_max, std::uint64_t seed, int max_margin,
                             bool patch_reports) {
    if (x.components.size() <= 1) {
        VarietySpec single = x;
        if (x.components.size() == 1) {
            single.generators = x.components[0].generators;
            single.dim_m = x.components[0].dim;
            single.degree_D = x.components[0].degree;
        }
        return pipeline_single_component(single, p_max, seed, max_margin, patch_reports);
    }

    // reducible case: idempotents split the computation by component
    int ambient_n = static_cast<int>(x.vars->size());
    auto idem = certs::idempotents_kollar(x.components, ambient_n, 64);
    if (!certs::verify_idempotents(idem, 64))
        throw ComputationError("engine", "idempotent identities failed to verify");

    PipelineResult out;
    auto& coh = out.cohomology;
    coh.dims.assign(static_cast<std::size_t>(p_max) + 1, 0);
    for (int p = 0; p <= p_max; ++p) coh.certified[p] = true;

    for (std::size_t ci = 0; ci < x.components.size(); ++ci) {
        VarietySpec comp;
        comp.vars = x.vars;
        comp.generators = x.components[ci].generators;
        comp.dim_m = x.components[ci].dim;
        comp.degree_D = x.components[ci].degree;
        comp.membership_cap = x.membership_cap;
        PipelineResult part;
        if (comp.dim_m == 0) {
            // points: H^0 = k, higher cohomology vanishes
            part.cohomology.dims.assign(static_cast<std::size_t>(p_max) + 1, 0);
            part.cohomology.dims[0] = 1;
            auto ring = variety_ring(comp);
            DiffForm one_form(ring, MultiPoly::constant(comp.vars, 1), 0);
            one_form.add_term({}, ring::LocalizedElem::regular(
                                      ring, MultiPoly::constant(comp.vars, 1),
                                      MultiPoly::constant(comp.vars, 1)));
            part.cohomology.representatives[0] = {one_form};
            for (int p = 0; p <= p_max; ++p) part.cohomology.certified[p] = true;
        } else {
            part = pipeline_single_component(comp, p_max, seed + 7919 * ci, max_margin,
                                             patch_reports);
        }
        out.chart_count += part.chart_count;
        out.heuristic_cover_points |= part.heuristic_cover_points;
        for (int p = 0; p <= p_max; ++p) {
            coh.dims[static_cast<std::size_t>(p)] +=
                part.cohomology.dims[static_cast<std::size_t>(p)];
            coh.certified[p] = coh.certified[p] && part.cohomology.certified.count(p) &&
                               part.cohomology.certified.at(p);
            auto it = part.cohomology.representatives.find(p);
            if (it == part.cohomology.representatives.end()) continue;
            auto xring = variety_ring(x);
            for (const auto& rep : it->second) {
                // carry the class into X by the component idempotent
                DiffForm lifted(xring, MultiPoly::constant(x.vars, 1), rep.degree_p());
                for (const auto& [idx, c] : rep.coefficients())
                    lifted.add_term(idx, ring::LocalizedElem::make(
                                             xring, MultiPoly::constant(x.vars, 1),
                                             c.numerator() * idem.idempotents[ci], c.order()));
                coh.representatives[p].push_back(lifted);
                coh.stamps[p].push_back(ring::filtration_stamp(lifted));
            }
        }
    }
    BigInt quad = BigInt(static_cast<long>(x.vars->size()) + 1) * x.degree_D * x.degree_D / 4;
    BigInt powb = big_pow(x.degree_D, static_cast<unsigned long>(x.dim_m) + 1);
    BigInt extra = quad < powb ? quad : powb;
    for (int p = 0; p <= p_max; ++p)
        coh.bounds[p] = main_bound(p, x.dim_m, x.degree_D) + extra;
    return out;
}

std::string form_to_string(const DiffForm& w) {
    if (w.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [idx, c] : w.coefficients()) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.numerator().str() << ")";
        if (c.order() > 0) os << "/(" << c.divisor().str() << ")^" << c.order();
        for (std::size_t k = 0; k < idx.size(); ++k) {
            os << (k == 0 ? " " : "^");
            os << "d" << w.ring()->vars()->name(static_cast<std::size_t>(idx[k]));
        }
    }
    return os.str();
}

}  // namespace edrc::engine
