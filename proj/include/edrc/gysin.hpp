#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "edrc/ring.hpp"

namespace edrc::gysin {

using poly::MultiPoly;
using poly::VarSetPtr;
using ring::AffineRingPtr;
using ring::DiffForm;
using ring::LocalizedElem;

// Data for the codimension-2 complete intersection Z = Z(g X0 - 1, f) in
// A^{n+1}. B = k[Z] is realized as (k[X1..Xn]/(f))_g via X0 -> 1/g, which gives
// decidable equality through monic reduction in X_n.
class GysinSetup {
  public:
    // f, g in the user's n variables; f monic in the last one, df/dX_n | g
    GysinSetup(const MultiPoly& f, const MultiPoly& g);

    int n() const { return n_; }
    int d0() const { return d0_; }
    int d1() const { return d1_; }
    int gamma() const { return gamma_; }
    // layer cap d0 + deg h + 1; equals gamma when deg_{X_n} f = deg f
    int working_gamma() const { return working_gamma_; }
    // true when deg_{X_n} f = deg f, the position the constant caps presume
    bool generic_position() const { return generic_position_; }
    const VarSetPtr& ambient_vars() const { return amb_vars_; }  // X0 first, then user vars
    const AffineRingPtr& ambient_ring() const { return amb_ring_; }
    const AffineRingPtr& b_ring() const { return b_ring_; }
    const MultiPoly& f0() const { return f0_; }
    const MultiPoly& f1() const { return f1_; }
    const MultiPoly& g_ambient() const { return g_amb_; }
    const MultiPoly& g_orig() const { return g_orig_; }
    const MultiPoly& h_orig() const { return h_orig_; }
    MultiPoly to_ambient(const MultiPoly& f_orig) const;  // reindex user vars
    MultiPoly divisor_product() const { return f0_ * f1_; }

    // class of an ambient polynomial in B: X0 -> 1/g, reduced mod f
    LocalizedElem project_to_b(const MultiPoly& a) const;
    // polynomial representative in ambient variables: numerator * X0^order
    MultiPoly b_to_ambient(const LocalizedElem& b) const;

    // coordinate lift: polynomials Y with f0(Y), f1(Y) in I^N; grown on demand
    void ensure_level(int N) const;
    int level() const;
    std::vector<MultiPoly> lift_coordinates() const;
    // layer tables a^(i)_{mu,nu} including the base layer (0,0) -> X_i;
    // sum over the table times f0^mu f1^nu equals the lift coordinate exactly
    std::map<std::pair<int, int>, MultiPoly> lift_series(int var_i) const;
    int max_layer_degree() const;  // over all built layers past the base

    // substitution dX_n -> -(h/g) sum_{i<n} df/dX_i dX_i, as B-ring coefficients
    const std::vector<LocalizedElem>& dxn_elimination() const { return dxn_elim_; }

  private:
    void lift_step() const;  // one level, caller holds the lock

    int n_, d0_, d1_, gamma_, working_gamma_;
    bool generic_position_ = true;
    VarSetPtr orig_vars_, amb_vars_;
    AffineRingPtr amb_ring_, b_ring_;
    MultiPoly f_orig_, g_orig_, h_orig_;
    MultiPoly f0_, f1_, g_amb_, h_amb_;
    std::vector<LocalizedElem> dxn_elim_;

    mutable std::mutex mu_;
    mutable int level_ = 1;
    mutable std::vector<MultiPoly> y_;
    mutable std::vector<std::map<std::pair<int, int>, MultiPoly>> series_;
    mutable int max_layer_degree_ = 0;
};

using GysinSetupPtr = std::shared_ptr<const GysinSetup>;

// p_{mu,nu} with t = sum p f0^mu f1^nu, mu+nu = N, cofactor degrees capped.
// Throws ComputationError when t is not in I^N at the cap.
std::map<std::pair<int, int>, MultiPoly> i_decompose(const MultiPoly& t, int N,
                                                     const GysinSetup& setup, int degree_cap);

// Truncated power series in T0, T1 with coefficients in B.
struct BiSeries {
    int m0 = 0, m1 = 0;  // truncation window: mu <= m0, nu <= m1
    std::map<std::pair<int, int>, LocalizedElem> coeff;

    bool is_zero() const { return coeff.empty(); }
    LocalizedElem at(int mu, int nu, const GysinSetup& setup) const;
};

// Coefficients of psi-hat^{-1}(a): b_{mu,nu} in B with
// sum psi(b) f0^mu f1^nu = a mod I^{m0+m1+1}; Lemma-style degree stamps checked.
BiSeries psihat_inverse(const GysinSetupPtr& setup, const MultiPoly& a_ambient, int m0, int m1);

// Form over divisor f0*f1 considered modulo forms with only one denominator.
struct QuotientForm {
    DiffForm rep;
};

// membership in Omega_{f0} + Omega_{f1} at bounded degree
bool in_denominator_subspace(const DiffForm& w, const GysinSetup& setup, int degree_slack);

// canonical B-form: eliminate dX_n, leaving the free basis dX_1..dX_{n-1}
DiffForm reduce_b_form(const GysinSetup& setup, const DiffForm& w);
DiffForm b_exterior_d(const GysinSetup& setup, const DiffForm& w);
DiffForm zero_b_form(const GysinSetup& setup, int p);
bool b_form_is_zero(const GysinSetup& setup, const DiffForm& w);

// w (reduced B-form of degree p-2) -> [df0/f0 ^ df1/f1 ^ lift(w)]
QuotientForm lambda_map(const GysinSetupPtr& setup, const DiffForm& w);

struct ResidueResult {
    DiffForm form;           // reduced (p-2)-form over B
    BigInt degree_bound;     // gamma^{2s-1} * deg(alpha)
    int stamp_degree = 0;    // observed representative degree
};

// Extracts the dT0^dT1 coefficient at T0^{-1}T1^{-1} of the bi-series
// expansion; checks closedness of the result and the degree bound. The
// quotient-closedness precondition may be waived for identity testing on
// arbitrary forms.
ResidueResult residue(const GysinSetupPtr& setup, const QuotientForm& w,
                      bool require_closed = true);

}  // namespace edrc::gysin
