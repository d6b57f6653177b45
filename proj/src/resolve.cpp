#include "edrc/resolve.hpp"

#include <algorithm>

#include "edrc/rng.hpp"

namespace edrc::resolve {

using poly::Monomial;
using ring::MonomialTable;

LocalizedElem substitute_localized(const MultiPoly& f, const std::vector<LocalizedElem>& values) {
    if (values.size() != f.nvars())
        throw PreconditionError("substitute_localized: value per variable required");
    if (values.empty()) throw PreconditionError("substitute_localized: no variables");
    const auto& ring = values[0].ring();
    const MultiPoly& div = values[0].divisor();
    LocalizedElem acc = LocalizedElem::make(ring, div, MultiPoly(ring->vars()), 0);
    for (const auto& [mon, c] : f.terms()) {
        LocalizedElem term =
            LocalizedElem::regular(ring, div, MultiPoly::constant(ring->vars(), c));
        for (std::size_t i = 0; i < mon.exp.size(); ++i)
            for (std::uint32_t e = 0; e < mon.exp[i]; ++e) term = term.times(values[i]);
        acc = acc.plus(term);
    }
    return acc;
}

namespace {

int degree_as_int(const BigInt& d, int fallback) {
    if (d > fallback) return fallback;
    return static_cast<int>(d.get_si());
}

// candidate coordinate changes: identity, single-variable swaps with the
// pivot position, then seeded small random unimodular shears
ScalarMatrix candidate_change(std::size_t n, std::size_t pivot_row, int attempt, Rng& rng) {
    ScalarMatrix m = ScalarMatrix::identity(n);
    if (attempt == 0) return m;
    if (attempt <= static_cast<int>(n)) {
        std::size_t j = static_cast<std::size_t>(attempt - 1);
        if (j != pivot_row) {
            m.at(pivot_row, pivot_row) = 0;
            m.at(j, j) = 0;
            m.at(pivot_row, j) = 1;
            m.at(j, pivot_row) = 1;
        }
        return m;
    }
    long box = 2 + attempt / 4;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && (rng.next() & 3u) == 0) m.at(i, j) = Scalar(rng.range(-box, box));
    if (!m.inverse()) return ScalarMatrix::identity(n);
    return m;
}

struct RelationSearch {
    MultiPoly f;
    std::vector<MultiPoly> cofactors;
};

// minimal monic relation of X_{m+1} over k[X_1..X_m] inside the transformed ideal
std::optional<RelationSearch> monic_relation(const poly::VarSetPtr& tvars,
                                             const std::vector<MultiPoly>& gens, int m,
                                             int deg_cap, int cofactor_cap) {
    const std::size_t n = tvars->size();
    const std::size_t pivot = static_cast<std::size_t>(m);  // X_{m+1}
    for (int e = 1; e <= deg_cap; ++e) {
        // unknown tail monomials: degree <= e, pivot-degree < e, vars X_1..X_{m+1}
        std::vector<Monomial> tail;
        MonomialTable mons(n, e);
        for (std::size_t k = mons.size(); k-- > 0;) {
            const Monomial& mon = mons.at(k);
            bool chart_only = true;
            for (std::size_t v = pivot + 1; v < n; ++v)
                if (mon.exp[v] > 0) chart_only = false;
            if (chart_only && static_cast<int>(mon.exp[pivot]) < e) tail.push_back(mon);
        }
        struct Col {
            bool ideal;
            std::size_t which;
            Monomial mon;
        };
        std::vector<Col> cols;
        for (std::size_t t = 0; t < tail.size(); ++t) cols.push_back({false, t, tail[t]});
        int work = std::max(e, cofactor_cap);
        for (std::size_t gi = 0; gi < gens.size(); ++gi) {
            int room = work - gens[gi].total_degree();
            if (room < 0) continue;
            MonomialTable qm(n, room);
            for (std::size_t k = qm.size(); k-- > 0;) cols.push_back({true, gi, qm.at(k)});
        }
        MonomialTable rows(n, work);
        linsolve::SparseMatrix mat(rows.size(), cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].ideal) {
                MultiPoly prod = gens[cols[j].which] * MultiPoly::term(tvars, cols[j].mon, Scalar(1));
                for (const auto& [mon, c] : prod.terms()) mat.set(*rows.index(mon), j, -c);
            } else {
                mat.set(*rows.index(cols[j].mon), j, Scalar(1));
            }
        }
        // rhs: -X_{m+1}^e  (so that X_{m+1}^e + tail = sum q_i gens_i)
        Monomial lead = Monomial::one(n);
        lead.exp[pivot] = static_cast<std::uint32_t>(e);
        std::vector<Scalar> rhs(rows.size(), Scalar(0));
        rhs[*rows.index(lead)] = Scalar(-1);
        auto sol = linsolve::solve_particular(mat, rhs);
        if (!sol) continue;
        MultiPoly f(tvars);
        f.add_term(lead, Scalar(1));
        std::vector<MultiPoly> cof(gens.size(), MultiPoly(tvars));
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (is_zero((*sol)[j])) continue;
            if (cols[j].ideal)
                cof[cols[j].which].add_term(cols[j].mon, (*sol)[j]);
            else
                f.add_term(cols[j].mon, (*sol)[j]);
        }
        // exact witness
        MultiPoly total(tvars);
        for (std::size_t gi = 0; gi < gens.size(); ++gi) total = total + cof[gi] * gens[gi];
        if (!(total == f)) continue;
        return RelationSearch{f, cof};
    }
    return std::nullopt;
}

MultiPoly restrict_vars(const MultiPoly& f, const poly::VarSetPtr& sub, std::size_t count) {
    MultiPoly out(sub);
    for (const auto& [mon, c] : f.terms()) {
        Monomial m = Monomial::one(count);
        for (std::size_t i = 0; i < count; ++i) m.exp[i] = mon.exp[i];
        for (std::size_t i = count; i < mon.exp.size(); ++i)
            if (mon.exp[i] > 0) throw PreconditionError("restrict_vars: unexpected variable");
        out.add_term(m, c);
    }
    return out;
}

MultiPoly extend_vars(const MultiPoly& f, const poly::VarSetPtr& big) {
    MultiPoly out(big);
    for (const auto& [mon, c] : f.terms()) {
        Monomial m = Monomial::one(big->size());
        for (std::size_t i = 0; i < mon.exp.size(); ++i) m.exp[i] = mon.exp[i];
        out.add_term(m, c);
    }
    return out;
}

}  // namespace

PatchChart birational_projection(const VarietyData& x,
                                 const std::vector<std::vector<Scalar>>& avoid_points,
                                 std::uint64_t seed) {
    const std::size_t n = x.vars->size();
    const int m = x.dim_m;
    if (m < 0 || m >= static_cast<int>(n))
        throw PreconditionError("birational_projection: dimension out of range");
    const std::size_t r = n - static_cast<std::size_t>(m);
    const int deg_cap = degree_as_int(x.degree_D, 64);
    Rng rng(seed);

    std::vector<std::string> chart_names(x.vars->names().begin(),
                                         x.vars->names().begin() + m + 1);
    auto chart_vars = poly::make_vars(chart_names);

    const int max_attempts = 24;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        ScalarMatrix change = candidate_change(n, static_cast<std::size_t>(m), attempt, rng);
        auto change_inv_opt = change.inverse();
        if (!change_inv_opt) continue;
        ScalarMatrix change_inv = *change_inv_opt;

        std::vector<MultiPoly> tgens;
        for (const auto& gen : x.generators) tgens.push_back(poly::linear_change(gen, change_inv));

        auto rel = monic_relation(x.vars, tgens, m, deg_cap,
                                  deg_cap + x.membership_cap);
        if (!rel) continue;
        MultiPoly f = restrict_vars(rel->f, chart_vars, static_cast<std::size_t>(m) + 1);
        MultiPoly g = poly::partial_derivative(f, static_cast<std::size_t>(m));
        if (g.is_zero()) continue;

        // inverse data: g X_{m+i} + w_i in the transformed ideal, deg w_i <= deg f
        auto transformed_ring = ring::AffineRing::capped_quotient(
            x.vars, tgens, f.total_degree() + x.membership_cap);
        std::vector<MultiPoly> w;
        bool ok = true;
        MultiPoly g_ext = extend_vars(g, x.vars);
        for (std::size_t i = 1; i < r; ++i) {
            // variables beyond the chart: indices m+1 .. n-1
            std::size_t var = static_cast<std::size_t>(m) + 1 + (i - 1);
            MultiPoly target = g_ext * MultiPoly::variable(x.vars, var);
            // linear system: w + sum q_j gens_j = -target, w in chart vars
            std::vector<Monomial> wmons;
            MonomialTable mons(n, f.total_degree());
            for (std::size_t k = mons.size(); k-- > 0;) {
                const Monomial& mon = mons.at(k);
                bool chart_only = true;
                for (std::size_t v = static_cast<std::size_t>(m) + 1; v < n; ++v)
                    if (mon.exp[v] > 0) chart_only = false;
                if (chart_only) wmons.push_back(mon);
            }
            int work = std::max(target.total_degree(), f.total_degree()) + x.membership_cap;
            struct Col {
                bool ideal;
                std::size_t which;
                Monomial mon;
            };
            std::vector<Col> cols;
            for (std::size_t t = 0; t < wmons.size(); ++t) cols.push_back({false, t, wmons[t]});
            for (std::size_t gi = 0; gi < tgens.size(); ++gi) {
                int room = work - tgens[gi].total_degree();
                if (room < 0) continue;
                MonomialTable qm(n, room);
                for (std::size_t k = qm.size(); k-- > 0;) cols.push_back({true, gi, qm.at(k)});
            }
            MonomialTable rows(n, work);
            linsolve::SparseMatrix mat(rows.size(), cols.size());
            for (std::size_t j = 0; j < cols.size(); ++j) {
                if (cols[j].ideal) {
                    MultiPoly prod =
                        tgens[cols[j].which] * MultiPoly::term(x.vars, cols[j].mon, Scalar(1));
                    for (const auto& [mon, c] : prod.terms()) mat.set(*rows.index(mon), j, c);
                } else {
                    mat.set(*rows.index(cols[j].mon), j, Scalar(1));
                }
            }
            std::vector<Scalar> rhs(rows.size(), Scalar(0));
            for (const auto& [mon, c] : target.terms()) rhs[*rows.index(mon)] = -c;
            auto wsol = linsolve::solve_particular(mat, rhs);
            if (!wsol) {
                ok = false;
                break;
            }
            MultiPoly wi(chart_vars);
            for (std::size_t j = 0; j < cols.size(); ++j) {
                if (cols[j].ideal || is_zero((*wsol)[j])) continue;
                Monomial mon = Monomial::one(static_cast<std::size_t>(m) + 1);
                for (std::size_t v = 0; v <= static_cast<std::size_t>(m); ++v)
                    mon.exp[v] = cols[j].mon.exp[v];
                wi.add_term(mon, (*wsol)[j]);
            }
            w.push_back(std::move(wi));
        }
        if (!ok) continue;

        auto chart_ring = ring::AffineRing::monic_quotient(chart_vars, {f}, 0,
                                                           static_cast<std::size_t>(m));

        // chart consistency: the inverse parameterization kills every generator
        std::vector<LocalizedElem> values;
        MultiPoly g_chart = restrict_vars(g, chart_vars, static_cast<std::size_t>(m) + 1);
        for (std::size_t v = 0; v <= static_cast<std::size_t>(m); ++v)
            values.push_back(LocalizedElem::regular(chart_ring, g_chart,
                                                    MultiPoly::variable(chart_vars, v)));
        for (std::size_t i = 1; i < r; ++i)
            values.push_back(LocalizedElem::make(chart_ring, g_chart, -w[i - 1], 1));
        bool consistent = true;
        for (const auto& gen : tgens)
            if (!substitute_localized(gen, values).is_zero()) {
                consistent = false;
                break;
            }
        if (!consistent) continue;

        // avoid the marked points: g must not vanish at their chart images
        MultiPoly g_on_x = poly::linear_change(g_ext, change);
        bool avoids = true;
        for (const auto& pt : avoid_points) {
            if (pt.size() != n) throw PreconditionError("birational_projection: bad point arity");
            if (edrc::is_zero(g_on_x.eval(pt))) {
                avoids = false;
                break;
            }
        }
        if (!avoids) continue;

        PatchChart chart;
        chart.change = change;
        chart.change_inv = change_inv;
        chart.chart_vars = chart_vars;
        chart.transformed_vars = x.vars;
        chart.f = f;
        chart.g = g_chart;
        chart.w = w;
        chart.g_on_x = g_on_x;
        chart.chart_ring = chart_ring;
        chart.transformed_ring = transformed_ring;
        return chart;
    }
    throw ComputationError("resolve", "birational_projection: retry cap exhausted");
}

namespace {

// rational roots of a univariate polynomial with rational coefficients
std::vector<Scalar> rational_roots(const std::vector<Scalar>& coeffs) {
    std::vector<Scalar> roots;
    int deg = -1;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (!is_zero(coeffs[i])) deg = static_cast<int>(i);
    if (deg <= 0) return roots;
    // clear denominators
    BigInt lcm(1);
    for (const auto& c : coeffs) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
    std::vector<BigInt> ic(static_cast<std::size_t>(deg) + 1);
    for (int i = 0; i <= deg; ++i) {
        Scalar scaled = coeffs[static_cast<std::size_t>(i)] * Scalar(lcm);
        ic[static_cast<std::size_t>(i)] = scaled.get_num();
    }
    int low = 0;
    while (low < deg && ic[static_cast<std::size_t>(low)] == 0) ++low;
    if (low > 0) roots.push_back(Scalar(0));
    BigInt a0 = abs(ic[static_cast<std::size_t>(low)]), ad = abs(ic[static_cast<std::size_t>(deg)]);
    if (a0 == 0 || ad == 0) return roots;
    auto divisors = [](const BigInt& v) {
        std::vector<BigInt> out;
        if (v > 50000) {  // bounded enumeration
            out.push_back(1);
            out.push_back(v);
            return out;
        }
        for (BigInt d(1); d * d <= v; ++d)
            if (v % d == 0) {
                out.push_back(d);
                out.push_back(v / d);
            }
        return out;
    };
    auto eval = [&](const Scalar& t) {
        Scalar acc(0);
        for (int i = deg; i >= 0; --i) acc = acc * t + Scalar(ic[static_cast<std::size_t>(i)]);
        return acc;
    };
    for (const auto& p : divisors(a0))
        for (const auto& q : divisors(ad))
            for (int sign : {1, -1}) {
                Scalar cand(sign * p, q);
                cand.canonicalize();
                if (is_zero(eval(cand))) {
                    if (std::find(roots.begin(), roots.end(), cand) == roots.end())
                        roots.push_back(cand);
                }
            }
    return roots;
}

}  // namespace

PatchCover patch_cover(const VarietyData& x, std::uint64_t seed) {
    PatchCover cover;
    std::vector<std::vector<Scalar>> points;
    const std::size_t n = x.vars->size();
    auto ring = ring::AffineRing::capped_quotient(
        x.vars, x.generators,
        degree_as_int(x.degree_D, 32) + x.membership_cap);
    Rng rng(seed ^ 0xc0ffee);

    int attempts_left = 4 * (x.dim_m + 2);
    while (attempts_left-- > 0) {
        PatchChart chart = birational_projection(x, points, seed + static_cast<std::uint64_t>(
                                                                       cover.charts.size() * 131 +
                                                                       attempts_left));
        cover.charts.push_back(std::move(chart));
        std::vector<MultiPoly> divisors;
        for (const auto& c : cover.charts) divisors.push_back(c.g_on_x);
        int cap = 2 * degree_as_int(x.degree_D, 32) + x.membership_cap;
        auto cert = certs::find_certificate(ring, divisors, cap);
        if (cert) {
            cover.cover_certificate = std::move(*cert);
            return cover;
        }
        if (static_cast<int>(cover.charts.size()) > x.dim_m) cover.charts.pop_back();

        // best-effort rational points on the residual set by random line slicing
        bool found_point = false;
        std::vector<MultiPoly> residual = x.generators;
        for (const auto& c : cover.charts) residual.push_back(c.g_on_x);
        for (int line = 0; line < 6 && !found_point; ++line) {
            std::vector<Scalar> base(n), dir(n);
            for (std::size_t i = 0; i < n; ++i) {
                base[i] = Scalar(rng.range(-3, 3));
                dir[i] = Scalar(rng.range(-2, 2));
            }
            if (std::all_of(dir.begin(), dir.end(), [](const Scalar& c) { return is_zero(c); }))
                continue;
            // restrict the first nontrivial residual generator to the line
            auto tvars = poly::make_vars(std::vector<std::string>{"t"});
            std::vector<MultiPoly> line_vals;
            for (std::size_t i = 0; i < n; ++i)
                line_vals.push_back(MultiPoly::constant(tvars, base[i]) +
                                    MultiPoly::variable(tvars, 0) * dir[i]);
            std::vector<Scalar> cand_roots;
            for (const auto& gen : residual) {
                MultiPoly restricted = poly::substitute(gen, line_vals);
                if (restricted.is_zero()) continue;
                std::vector<Scalar> coeffs(
                    static_cast<std::size_t>(std::max(restricted.total_degree(), 0)) + 1, Scalar(0));
                for (const auto& [mon, c] : restricted.terms()) coeffs[mon.exp[0]] = c;
                cand_roots = rational_roots(coeffs);
                break;
            }
            for (const auto& t : cand_roots) {
                std::vector<Scalar> pt(n);
                for (std::size_t i = 0; i < n; ++i) pt[i] = base[i] + t * dir[i];
                bool on_residual = true;
                for (const auto& gen : residual)
                    if (!is_zero(gen.eval(pt))) {
                        on_residual = false;
                        break;
                    }
                if (on_residual) {
                    points.push_back(pt);
                    found_point = true;
                    break;
                }
            }
        }
        if (!found_point) cover.heuristic_points = true;
    }
    throw ComputationError("resolve", "patch_cover: could not certify a cover");
}

MultiPoly chart_image(const PatchChart& chart, const VarietyData& x,
                      const MultiPoly& h_transformed) {
    const std::size_t m1 = chart.chart_vars->size();
    const std::size_t n = chart.transformed_vars->size();
    std::vector<LocalizedElem> values;
    for (std::size_t v = 0; v < m1; ++v)
        values.push_back(LocalizedElem::regular(chart.chart_ring, chart.g,
                                                MultiPoly::variable(chart.chart_vars, v)));
    for (std::size_t i = 0; i < n - m1; ++i)
        values.push_back(LocalizedElem::make(chart.chart_ring, chart.g, -chart.w[i], 1));
    LocalizedElem image = substitute_localized(h_transformed, values);
    int k = std::max(h_transformed.total_degree(), 0);
    MultiPoly h_image = image.at_order(k).numerator();
    int bound = degree_as_int(h_transformed.total_degree() * x.degree_D, 1 << 20);
    if (h_image.total_degree() > bound)
        throw ComputationError("resolve", "chart_image: degree bound deg(h) deg(X) violated");
    return h_image;
}

DiffForm pullback_linear(const AffineRingPtr& target_ring, const MultiPoly& target_divisor,
                         const DiffForm& w, const ScalarMatrix& m) {
    DiffForm out(target_ring, target_divisor, w.degree_p());
    const auto& vars = target_ring->vars();
    for (const auto& [idx, c] : w.coefficients()) {
        MultiPoly num = poly::linear_change(c.numerator(), m);
        LocalizedElem base = LocalizedElem::make(target_ring, target_divisor, num, c.order());
        // dX_i -> sum_j m(i,j) dX_j, expanded across the tuple
        std::vector<std::pair<ring::IndexTuple, Scalar>> expanded{{{}, Scalar(1)}};
        for (int i : idx) {
            std::vector<std::pair<ring::IndexTuple, Scalar>> next;
            for (const auto& [tuple, coef] : expanded) {
                for (std::size_t j = 0; j < vars->size(); ++j) {
                    const Scalar& mij = m.at(static_cast<std::size_t>(i), j);
                    if (is_zero(mij)) continue;
                    ring::IndexTuple merged;
                    int sign = ring::merge_sign(tuple, {static_cast<int>(j)}, merged);
                    if (sign == 0) continue;
                    next.emplace_back(merged, coef * mij * sign);
                }
            }
            expanded = std::move(next);
        }
        for (const auto& [tuple, coef] : expanded) out.add_term(tuple, base.times_scalar(coef));
    }
    return out;
}

DiffForm transport_form(const PatchChart& chart, const VarietyData& x, const MultiPoly& h_on_x,
                        const DiffForm& w_chart) {
    const std::size_t n = x.vars->size();
    const int k = std::max(h_on_x.total_degree(), 0);
    // the transported divisor in transformed coordinates
    MultiPoly h_t = poly::linear_change(h_on_x, chart.change_inv);
    MultiPoly g_t = extend_vars(chart.g, x.vars);
    MultiPoly div_t = g_t * h_t;
    auto tring = chart.transformed_ring;

    DiffForm on_transformed(tring, div_t, w_chart.degree_p());
    for (const auto& [idx, c] : w_chart.coefficients()) {
        // a/(gH)^s = a h^{s k} / (g h)^{s(k+1)} on U'
        int s = c.order();
        MultiPoly num = extend_vars(c.numerator(), x.vars) * h_t.pow(static_cast<unsigned>(s * k));
        on_transformed.add_term(idx, LocalizedElem::make(tring, div_t, num, s * (k + 1)));
    }
    // back to the original coordinates
    auto xring = ring::AffineRing::capped_quotient(
        x.vars, x.generators, degree_as_int(x.degree_D, 32) + x.membership_cap);
    MultiPoly div_x = chart.g_on_x * h_on_x;
    DiffForm out = pullback_linear(xring, div_x, on_transformed, chart.change);

    // stamp law (s, d) -> (s (deg h + 1), d)
    auto before = ring::filtration_stamp(w_chart);
    auto after = ring::filtration_stamp(out);
    if (after.order_s > before.order_s * (k + 1) || after.degree_d > before.degree_d)
        throw ComputationError("resolve", "transport_form: stamp law violated");
    (void)n;
    return out;
}

}  // namespace edrc::resolve
