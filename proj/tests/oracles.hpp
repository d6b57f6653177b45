#pragma once

// Test-side oracles, independent of the library paths they check.

#include <vector>

#include "edrc/poly.hpp"
#include "edrc/rng.hpp"

namespace edrc::oracles {

// dual number a + b*eps with eps^2 = 0; evaluation gives exact derivatives
struct Dual {
    Scalar a, b;
    Dual operator+(const Dual& o) const { return {a + o.a, b + o.b}; }
    Dual operator*(const Dual& o) const { return {a * o.a, a * o.b + b * o.a}; }
};

// derivative of f in direction var at a point, through dual-number evaluation
inline Scalar dual_derivative(const poly::MultiPoly& f, std::size_t var,
                              const std::vector<Scalar>& point) {
    Dual acc{Scalar(0), Scalar(0)};
    for (const auto& [m, c] : f.terms()) {
        Dual t{c, Scalar(0)};
        for (std::size_t i = 0; i < m.exp.size(); ++i) {
            Dual x{point[i], Scalar(i == var ? 1 : 0)};
            for (std::uint32_t k = 0; k < m.exp[i]; ++k) t = t * x;
        }
        acc = acc + t;
    }
    return acc.b;
}

inline poly::MultiPoly random_poly(const poly::VarSetPtr& vars, int deg, Rng& rng, int terms = 6) {
    poly::MultiPoly f(vars);
    for (int t = 0; t < terms; ++t) {
        poly::Monomial m = poly::Monomial::one(vars->size());
        int budget = static_cast<int>(rng.range(0, deg));
        for (int k = 0; k < budget; ++k) {
            std::size_t v = static_cast<std::size_t>(rng.range(0, static_cast<long>(vars->size()) - 1));
            m.exp[v] += 1;
        }
        f.add_term(m, rng.rational(5));
    }
    return f;
}

inline std::vector<Scalar> random_point(std::size_t n, Rng& rng) {
    std::vector<Scalar> p;
    for (std::size_t i = 0; i < n; ++i) p.push_back(rng.rational(7));
    return p;
}

}  // namespace edrc::oracles
