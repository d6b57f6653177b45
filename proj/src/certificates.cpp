#include "edrc/certificates.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace edrc::certs {

using poly::Monomial;
using ring::MonomialTable;

BigInt ns_bound(const BigInt& D, int d, int t, int m, int n) {
    if (d < 1) throw PreconditionError("ns_bound: d must be >= 1");
    BigInt dd(d);
    if (t <= m) return D * big_pow(dd, static_cast<unsigned long>(t));
    if (d >= 3 && m >= n - 1) return D * big_pow(dd, static_cast<unsigned long>(m));
    return 2 * D * big_pow(dd, static_cast<unsigned long>(m)) - 1;
}

std::optional<Certificate> find_certificate(const AffineRingPtr& ring,
                                            const std::vector<MultiPoly>& g, int degree_cap) {
    if (degree_cap < 0) throw PreconditionError("find_certificate: negative cap");
    for (const auto& gi : g)
        if (gi.is_zero()) throw PreconditionError("find_certificate: zero member");
    const auto& vars = ring->vars();
    const auto& gens = ring->generators();

    for (int delta = 0; delta <= degree_cap; ++delta) {
        // unknowns: coefficients of h_i with deg(h_i g_i) <= delta, plus ideal
        // cofactors q_j with deg(q_j f_j) <= delta
        struct Col {
            bool ideal;
            std::size_t which;
            Monomial mon;
        };
        std::vector<Col> cols;
        auto add_cols = [&](const std::vector<MultiPoly>& list, bool ideal) {
            for (std::size_t i = 0; i < list.size(); ++i) {
                int room = delta - list[i].total_degree();
                if (room < 0) continue;
                MonomialTable mons(vars->size(), room);
                for (std::size_t k = mons.size(); k-- > 0;) cols.push_back({ideal, i, mons.at(k)});
            }
        };
        add_cols(g, false);
        add_cols(gens, true);
        if (cols.empty()) continue;

        MonomialTable rows(vars->size(), delta);
        linsolve::SparseMatrix m(rows.size(), cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            const MultiPoly& base = cols[j].ideal ? gens[cols[j].which] : g[cols[j].which];
            MultiPoly prod = base * MultiPoly::term(vars, cols[j].mon, Scalar(1));
            for (const auto& [mon, c] : prod.terms()) m.set(*rows.index(mon), j, c);
        }
        std::vector<Scalar> rhs(rows.size(), Scalar(0));
        rhs[*rows.index(Monomial::one(vars->size()))] = 1;
        auto sol = linsolve::solve_particular(m, rhs);
        if (!sol) continue;

        Certificate cert;
        cert.cofactors.assign(g.size(), MultiPoly(vars));
        cert.ideal_cofactors.assign(gens.size(), MultiPoly(vars));
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (is_zero((*sol)[j])) continue;
            auto& target = cols[j].ideal ? cert.ideal_cofactors[cols[j].which]
                                         : cert.cofactors[cols[j].which];
            target.add_term(cols[j].mon, (*sol)[j]);
        }
        // exact witness: sum h_i g_i + sum q_j f_j = 1
        MultiPoly total(vars);
        int achieved = 0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            MultiPoly prod = cert.cofactors[i] * g[i];
            if (!prod.is_zero()) achieved = std::max(achieved, prod.total_degree());
            total = total + prod;
        }
        for (std::size_t j = 0; j < gens.size(); ++j) total = total + cert.ideal_cofactors[j] * gens[j];
        if (!total.is_one())
            throw ComputationError("certificates", "certificate witness failed to recompose");
        cert.achieved_degree = achieved;
        cert.bound_used = degree_cap;
        return cert;
    }
    return std::nullopt;
}

namespace {

poly::VarSetPtr common_vars(const std::vector<Component>& components) {
    if (components.empty()) throw PreconditionError("idempotents: no components");
    for (const auto& c : components)
        if (c.generators.empty()) throw PreconditionError("idempotents: component without generators");
    return components[0].generators[0].vars();
}

int clip_big(const BigInt& b, int hard_cap) {
    if (b > hard_cap) return hard_cap;
    return static_cast<int>(b.get_si());
}

}  // namespace

IdempotentSet idempotents_jelonek(const std::vector<Component>& components, int ambient_n,
                                  int membership_cap) {
    auto vars = common_vars(components);
    const std::size_t t = components.size();
    IdempotentSet out;
    out.components = components;
    BigInt total_degree(0);
    for (const auto& c : components) total_degree += c.degree;

    if (t == 1) {
        out.idempotents = {MultiPoly::constant(vars, 1)};
        out.max_degree = 0;
        out.bound = big_pow(total_degree, static_cast<unsigned long>(components[0].dim + 1));
        return out;
    }

    // phi[i][j]: 1 on Z_i, 0 on Z_j  (a combination of the generators of Z_j)
    std::vector<std::vector<MultiPoly>> phi(t, std::vector<MultiPoly>(t, MultiPoly(vars)));
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < t; ++i)
        for (std::size_t j = 0; j < t; ++j)
            if (i != j) pairs.emplace_back(i, j);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (linsolve::parallel_rows() > 1)
#endif
    for (long k = 0; k < static_cast<long>(pairs.size()); ++k) {
        auto [i, j] = pairs[static_cast<std::size_t>(k)];
        const auto& zi = components[i];
        const auto& zj = components[j];
        auto ring_i = ring::AffineRing::capped_quotient(vars, zi.generators, membership_cap);
        int dj = 1;
        for (const auto& f : zj.generators) dj = std::max(dj, f.total_degree());
        BigInt cap_b = ns_bound(zi.degree, dj, static_cast<int>(zj.generators.size()), zi.dim,
                                ambient_n);
        auto cert = find_certificate(ring_i, zj.generators, clip_big(cap_b, membership_cap));
        if (!cert)
            throw ComputationError("certificates",
                                   "pair certificate failed; components may intersect");
        MultiPoly p(vars);
        for (std::size_t v = 0; v < zj.generators.size(); ++v)
            p = p + cert->cofactors[v] * zj.generators[v];
        phi[i][j] = p;
    }

    out.idempotents.reserve(t);
    int maxdeg = 0;
    for (std::size_t i = 0; i < t; ++i) {
        MultiPoly e = MultiPoly::constant(vars, 1);
        for (std::size_t j = 0; j < t; ++j)
            if (j != i) e = e * phi[i][j];
        maxdeg = std::max(maxdeg, e.total_degree());
        out.idempotents.push_back(std::move(e));
    }
    out.max_degree = maxdeg;
    int m = 0;
    for (const auto& c : components) m = std::max(m, c.dim);
    out.bound = big_pow(total_degree, static_cast<unsigned long>(m + 1));
    return out;
}

IdempotentSet idempotents_kollar(const std::vector<Component>& components, int ambient_n,
                                 int membership_cap) {
    auto vars = common_vars(components);
    const std::size_t t = components.size();
    IdempotentSet out;
    out.components = components;
    BigInt total_degree(0);
    for (const auto& c : components) total_degree += c.degree;
    out.bound = BigInt(ambient_n + 1) * total_degree * total_degree / 4;

    if (t == 1) {
        out.idempotents = {MultiPoly::constant(vars, 1)};
        out.max_degree = 0;
        return out;
    }

    auto free_ring = ring::AffineRing::free_ring(vars);
    // for i < j: 1 = phi_ij + psi_ij with phi_ij in (gens of Z_i), psi_ij in (gens of Z_j)
    std::vector<std::vector<MultiPoly>> phi(t, std::vector<MultiPoly>(t, MultiPoly(vars)));
    std::vector<std::vector<MultiPoly>> psi(t, std::vector<MultiPoly>(t, MultiPoly(vars)));
    for (std::size_t i = 0; i < t; ++i)
        for (std::size_t j = i + 1; j < t; ++j) {
            const auto& zi = components[i];
            const auto& zj = components[j];
            std::vector<MultiPoly> joint = zi.generators;
            joint.insert(joint.end(), zj.generators.begin(), zj.generators.end());
            BigInt cap_b = BigInt(ambient_n + 1) * zi.degree * zj.degree;
            auto cert = find_certificate(free_ring, joint, clip_big(cap_b, membership_cap));
            if (!cert)
                throw ComputationError("certificates",
                                       "ideal split failed; components may intersect");
            MultiPoly p(vars);
            for (std::size_t v = 0; v < zi.generators.size(); ++v)
                p = p + cert->cofactors[v] * zi.generators[v];
            phi[i][j] = p;
            psi[i][j] = MultiPoly::constant(vars, 1) - p;
        }

    out.idempotents.reserve(t);
    int maxdeg = 0;
    for (std::size_t i = 0; i < t; ++i) {
        MultiPoly e = MultiPoly::constant(vars, 1);
        for (std::size_t j = 0; j < i; ++j) e = e * phi[j][i];
        for (std::size_t j = i + 1; j < t; ++j) e = e * psi[i][j];
        maxdeg = std::max(maxdeg, e.total_degree());
        out.idempotents.push_back(std::move(e));
    }
    out.max_degree = maxdeg;
    return out;
}

bool verify_idempotents(const IdempotentSet& set, int membership_cap) {
    const std::size_t t = set.idempotents.size();
    if (t != set.components.size()) return false;
    auto vars = common_vars(set.components);
    MultiPoly one = MultiPoly::constant(vars, 1);
    MultiPoly sum(vars);
    for (const auto& e : set.idempotents) sum = sum + e;

    for (std::size_t k = 0; k < t; ++k) {
        auto ring_k = ring::AffineRing::capped_quotient(vars, set.components[k].generators,
                                                        membership_cap);
        auto vanishes = [&](const MultiPoly& f) {
            if (f.is_zero()) return true;
            int cap = std::max(membership_cap, f.total_degree());
            return ring_k->ideal_membership(f, cap).has_value();
        };
        for (std::size_t i = 0; i < t; ++i) {
            const MultiPoly& ei = set.idempotents[i];
            MultiPoly expect = (i == k) ? one : MultiPoly(vars);
            if (!vanishes(ei - expect)) return false;
            if (!vanishes(ei * ei - ei)) return false;
            for (std::size_t j = i + 1; j < t; ++j)
                if (!vanishes(ei * set.idempotents[j])) return false;
        }
        if (!vanishes(sum - one)) return false;
    }
    return true;
}

}  // namespace edrc::certs
