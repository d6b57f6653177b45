#pragma once

#include <optional>
#include <vector>

#include "edrc/ring.hpp"

namespace edrc::certs {

using poly::MultiPoly;
using ring::AffineRingPtr;

// Cofactors h_i with sum h_i g_i = 1 modulo the ring's ideal, with an exact
// polynomial witness: sum h_i g_i + sum q_j f_j = 1 in R.
struct Certificate {
    std::vector<MultiPoly> cofactors;
    std::vector<MultiPoly> ideal_cofactors;
    int achieved_degree = 0;  // max_i deg(h_i g_i), the minimal feasible value
    BigInt bound_used = 0;
};

// Degree cap for cofactor products over an m-dimensional variety of degree D,
// for t polynomials of degree at most d in ambient dimension n.
BigInt ns_bound(const BigInt& D, int d, int t, int m, int n);

// Ascending-degree search; nullopt when no certificate exists up to degree_cap.
std::optional<Certificate> find_certificate(const AffineRingPtr& ring,
                                            const std::vector<MultiPoly>& g, int degree_cap);

struct Component {
    std::vector<MultiPoly> generators;
    BigInt degree;  // deg Z_i
    int dim = 0;    // dim Z_i
};

struct IdempotentSet {
    std::vector<MultiPoly> idempotents;
    std::vector<Component> components;
    int max_degree = 0;
    BigInt bound = 0;
};

// e_i built from one certificate per ordered pair: phi_ij = 1 on Z_i, 0 on Z_j.
IdempotentSet idempotents_jelonek(const std::vector<Component>& components, int ambient_n,
                                  int membership_cap);

// e_i built from degree-1-split certificates 1 = phi + psi with phi in I(Z_i),
// psi in I(Z_j).
IdempotentSet idempotents_kollar(const std::vector<Component>& components, int ambient_n,
                                 int membership_cap);

// exact check of e_i^2 = e_i, e_i e_j = 0, sum e_i = 1 on every component ring
bool verify_idempotents(const IdempotentSet& set, int membership_cap);

}  // namespace edrc::certs
