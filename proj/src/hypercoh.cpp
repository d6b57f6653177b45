#include "edrc/hypercoh.hpp"

#include <algorithm>
#include <limits>

namespace edrc::hypercoh {

using poly::MultiPoly;
using ring::AffineRingPtr;
using ring::DiffForm;

namespace {

// Window around level p. Boundary witnesses may carry the same order as the
// classes they kill while their images sit one order higher, so the quotient
// is taken in an arena one order above the class slice.
struct DeRhamWindow {
    std::unique_ptr<FormSlice> below, here, arena, above;
};

DeRhamWindow make_window(const AffineRingPtr& ring, const MultiPoly& divisor, int p, int s, int d) {
    DeRhamWindow w;
    if (p > 0) w.below = std::make_unique<FormSlice>(ring, divisor, p - 1, s, d);
    w.here = std::make_unique<FormSlice>(ring, divisor, p, s, d);
    w.arena = std::make_unique<FormSlice>(ring, divisor, p, s + 1, d);
    if (p + 1 <= static_cast<int>(ring->nvars()))
        w.above = std::make_unique<FormSlice>(ring, divisor, p + 1, s + 2, d);
    return w;
}

WindowHomology solve_window(const DeRhamWindow& w,
                            const std::vector<linsolve::SparseVec>& extra_sub_arena,
                            const std::vector<linsolve::SparseVec>& extra_sub_above) {
    // closed candidates live in the class slice
    std::vector<linsolve::SparseVec> d_here, sub_above;
    std::size_t above_dim = 0;
    if (w.above) {
        above_dim = w.above->dim();
        for (std::size_t c = 0; c < w.here->dim(); ++c)
            d_here.push_back(w.above->encode(ring::exterior_d(w.here->column_form(c))));
        sub_above = w.above->relation_generators();
        sub_above.insert(sub_above.end(), extra_sub_above.begin(), extra_sub_above.end());
    } else {
        d_here.assign(w.here->dim(), {});
    }
    std::vector<std::pair<long, long>> weights;
    weights.reserve(w.here->dim());
    for (std::size_t c = 0; c < w.here->dim(); ++c) weights.push_back(w.here->weight(c));
    WindowHomology closed = window_homology({}, w.here->dim(), d_here, above_dim, {}, sub_above,
                                            weights);

    // quotient by boundaries in the arena
    linsolve::SubspaceBasis big;
    big.ambient_dim = w.arena->dim();
    std::vector<std::pair<long, long>> cand_weights;
    for (const auto& v : closed.reps) {
        big.basis.push_back(w.arena->encode(w.here->decode(v)));
        std::pair<long, long> wt{0, 0};
        for (const auto& [col, val] : v) wt = std::max(wt, weights[col]);
        cand_weights.push_back(wt);
    }
    linsolve::SubspaceBasis small;
    small.ambient_dim = w.arena->dim();
    if (w.below)
        for (std::size_t c = 0; c < w.below->dim(); ++c)
            small.basis.push_back(w.arena->encode(ring::exterior_d(w.below->column_form(c))));
    for (auto& g : w.arena->relation_generators()) small.basis.push_back(std::move(g));
    small.basis.insert(small.basis.end(), extra_sub_arena.begin(), extra_sub_arena.end());

    // boundaries need not lie in the candidate span, so quotient V+B by B
    std::size_t n_candidates = big.basis.size();
    for (const auto& v : small.basis) {
        big.basis.push_back(v);
        cand_weights.emplace_back(std::numeric_limits<long>::max(),
                                  std::numeric_limits<long>::max());
    }
    auto q = linsolve::quotient_basis(big, small, cand_weights);
    WindowHomology out;
    out.dim = q.dim;
    for (auto i : q.representative_indices) {
        if (i >= n_candidates)
            throw ComputationError("hypercoh", "window: boundary escaped the quotient");
        out.reps.push_back(closed.reps[i]);
    }
    return out;
}

}  // namespace

LevelHomologyResult truncated_cohomology(const AffineRingPtr& ring, const MultiPoly& divisor,
                                         int p, int base_order, int base_degree, int max_margin) {
    if (p < 0 || p > static_cast<int>(ring->nvars())) return {0, {}, true, 0};
    LevelHomologyResult out;
    std::size_t prev_dim = 0;
    bool have_prev = false;
    for (int m = 0; m <= max_margin; ++m) {
        DeRhamWindow w = make_window(ring, divisor, p, base_order + m, base_degree + m);
        WindowHomology h = solve_window(w, {}, {});
        if (have_prev && h.dim == prev_dim) {
            out.certified = true;
            out.margin_used = m;
            out.dim = h.dim;
            out.reps.clear();
            for (const auto& v : h.reps) out.reps.push_back(w.here->decode(v));
            return out;
        }
        prev_dim = h.dim;
        have_prev = true;
        out.dim = h.dim;
        out.margin_used = m;
        out.reps.clear();
        for (const auto& v : h.reps) out.reps.push_back(w.here->decode(v));
    }
    out.certified = false;
    return out;
}

LevelHomologyResult quotient_complex_cohomology(const gysin::GysinSetupPtr& setup, int p,
                                                int max_margin) {
    const auto& ring = setup->ambient_ring();
    if (p < 0 || p > static_cast<int>(ring->nvars())) return {0, {}, true, 0};
    MultiPoly div = setup->divisor_product();
    LevelHomologyResult out;
    std::size_t prev_dim = 0;
    bool have_prev = false;
    for (int m = 0; m <= max_margin; ++m) {
        int s = p + m, d = p + m;
        DeRhamWindow w = make_window(ring, div, p, s, d);
        std::vector<linsolve::SparseVec> sub_arena, sub_above;
        auto add_multiples = [&](const FormSlice& slice, std::vector<linsolve::SparseVec>& dst) {
            auto a = slice.multiple_generators(
                setup->f1().pow(static_cast<unsigned>(slice.order())));
            auto b = slice.multiple_generators(
                setup->f0().pow(static_cast<unsigned>(slice.order())));
            dst.insert(dst.end(), a.begin(), a.end());
            dst.insert(dst.end(), b.begin(), b.end());
        };
        add_multiples(*w.arena, sub_arena);
        if (w.above) add_multiples(*w.above, sub_above);
        WindowHomology h = solve_window(w, sub_arena, sub_above);
        bool stable = have_prev && h.dim == prev_dim;
        prev_dim = h.dim;
        have_prev = true;
        out.dim = h.dim;
        out.margin_used = m;
        out.reps.clear();
        for (const auto& v : h.reps) out.reps.push_back(w.here->decode(v));
        if (stable) {
            out.certified = true;
            return out;
        }
    }
    out.certified = false;
    return out;
}

BigInt hypersurface_degree_bound(int p, int d, int dprime) {
    BigInt base(2 * dprime - d + 3);
    return BigInt(p + 2) * BigInt(d + dprime + 2) *
           big_pow(base, static_cast<unsigned long>(2 * p + 3));
}

CohomologyResult hypersurface_cohomology(const MultiPoly& f, const MultiPoly& g, int p_max,
                                         int max_margin) {
    CohomologyResult out;
    if (f.is_zero()) throw PreconditionError("hypersurface_cohomology: f = 0");
    if (g.is_zero()) throw PreconditionError("hypersurface_cohomology: g = 0");
    const int n = static_cast<int>(f.nvars());
    out.dims.assign(static_cast<std::size_t>(p_max) + 1, 0);

    // empty V: constant nonzero f, or Z(f) contained in Z(g)
    bool empty = !f.is_zero() && f.total_degree() == 0;
    if (!empty && poly::exact_divide(g, f)) empty = true;
    if (empty) {
        for (int p = 0; p <= p_max; ++p) out.certified[p] = true;
        return out;
    }

    auto setup = std::make_shared<const gysin::GysinSetup>(f, g);
    const int d = f.total_degree(), dprime = std::max(g.total_degree(), 0);

    // H^0 of an irreducible nonempty V
    out.dims[0] = 1;
    DiffForm one = gysin::zero_b_form(*setup, 0);
    one.add_term({}, ring::LocalizedElem::regular(setup->b_ring(), setup->g_orig(),
                                                  MultiPoly::constant(setup->b_ring()->vars(), 1)));
    out.representatives[0] = {one};
    out.stamps[0] = {ring::filtration_stamp(one)};
    out.certified[0] = true;
    out.bounds[0] = hypersurface_degree_bound(0, d, dprime);

    for (int P = 1; P <= p_max; ++P) {
        out.bounds[P] = hypersurface_degree_bound(P, d, dprime);
        const int p = P + 2;  // quotient-complex level
        if (p > n + 1 || P > n - 1) {
            out.certified[P] = true;
            continue;
        }
        LevelHomologyResult level = quotient_complex_cohomology(setup, p, max_margin);
        out.dims[static_cast<std::size_t>(P)] = level.dim;
        out.certified[P] = level.certified;
        std::vector<DiffForm> reps;
        std::vector<ring::FiltrationStamp> stamps;
        for (const auto& rep : level.reps) {
            gysin::ResidueResult res = gysin::residue(setup, gysin::QuotientForm{rep});
            auto st = ring::filtration_stamp(res.form);
            stamps.push_back(st);
            reps.push_back(std::move(res.form));
        }
        out.representatives[P] = std::move(reps);
        out.stamps[P] = std::move(stamps);
    }
    return out;
}

bool cochain_zero_mod_relations(const cech::CechCochain& c) {
    for (const auto& [idx, w] : c.entries()) {
        if (w.is_zero()) continue;
        if (!form_in_relation_span(w, 2)) return false;
    }
    return true;
}

bool total_zero_mod_relations(const cech::TotalCochain& c) {
    for (const auto& [q, cell] : c.cells())
        if (!cochain_zero_mod_relations(cell)) return false;
    return true;
}

TotalLevelResult total_complex_cohomology(const cech::CoverPtr& cover, int level, int base_order,
                                          int base_degree, int max_margin) {
    TotalLevelResult out;
    std::size_t prev_dim = 0;
    bool have_prev = false;
    std::vector<linsolve::SparseVec> reps;
    std::unique_ptr<TotalSlice> here_keep;
    for (int m = 0; m <= max_margin; ++m) {
        int s = base_order + m, deg = base_degree + m;
        TotalSlice here(cover, level, s, deg);
        TotalSlice above(cover, level + 1, s + 1, deg);
        TotalSlice below(cover, level - 1, std::max(s - 1, 0), deg);

        std::vector<linsolve::SparseVec> d_below, d_here;
        for (std::size_t c = 0; c < below.dim(); ++c)
            d_below.push_back(below.d_tot_column(c, here));
        for (std::size_t c = 0; c < here.dim(); ++c) d_here.push_back(here.d_tot_column(c, above));
        std::vector<std::pair<long, long>> weights;
        for (std::size_t c = 0; c < here.dim(); ++c) weights.push_back(here.weight(c));

        WindowHomology h = window_homology(d_below, here.dim(), d_here, above.dim(),
                                           here.relation_generators(), above.relation_generators(),
                                           weights);
        bool stable = have_prev && h.dim == prev_dim;
        prev_dim = h.dim;
        have_prev = true;
        out.dim = h.dim;
        out.margin_used = m;
        reps = h.reps;
        here_keep = std::make_unique<TotalSlice>(cover, level, s, deg);
        if (stable) {
            out.certified = true;
            break;
        }
    }
    for (const auto& v : reps) {
        cech::TotalCochain rep = here_keep->decode(v);
        cech::ZigzagResult z = cech::zigzag_collapse(rep);
        out.stamps.push_back(ring::filtration_stamp(z.alpha));
        out.global_forms.push_back(std::move(z.alpha));
        out.reps.push_back(std::move(rep));
    }
    return out;
}

}  // namespace edrc::hypercoh
