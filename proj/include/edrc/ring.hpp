#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "edrc/linsolve.hpp"
#include "edrc/poly.hpp"

namespace edrc::ring {

using poly::Monomial;
using poly::MultiPoly;
using poly::VarSetPtr;

// Monomials of total degree <= cap, ranked in descending graded lex so that
// rank 0 is the largest monomial and row reduction rewrites leading terms.
class MonomialTable {
  public:
    MonomialTable(std::size_t nvars, int cap);
    std::size_t size() const { return list_.size(); }
    int cap() const { return cap_; }
    const Monomial& at(std::size_t idx) const { return list_[idx]; }
    std::optional<std::size_t> index(const Monomial& m) const;

  private:
    int cap_;
    std::vector<Monomial> list_;
    std::map<Monomial, std::size_t, poly::GradedLexLess> rank_;
};

linsolve::SparseVec encode_poly(const MultiPoly& f, const MonomialTable& table);
MultiPoly decode_poly(const linsolve::SparseVec& v, const MonomialTable& table, const VarSetPtr& vars);

enum class Strategy { none, monic_in_last, linear_system };

// Coordinate ring A = R/I with a normal-form reduction rule. Values are
// immutable; the lazily grown reduction row space is guarded by a mutex.
class AffineRing {
  public:
    static std::shared_ptr<const AffineRing> free_ring(VarSetPtr vars);
    static std::shared_ptr<const AffineRing> monic_quotient(VarSetPtr vars,
                                                            std::vector<MultiPoly> gens,
                                                            std::size_t gen_index,
                                                            std::size_t var_index);
    static std::shared_ptr<const AffineRing> capped_quotient(VarSetPtr vars,
                                                             std::vector<MultiPoly> gens,
                                                             int degree_cap);
    // picks monic_in_last when some generator is monic in some variable (single
    // generator case), otherwise linear_system
    static std::shared_ptr<const AffineRing> auto_quotient(VarSetPtr vars,
                                                           std::vector<MultiPoly> gens,
                                                           int degree_cap);

    const VarSetPtr& vars() const { return vars_; }
    std::size_t nvars() const { return vars_->size(); }
    const std::vector<MultiPoly>& generators() const { return gens_; }
    Strategy strategy() const { return strategy_; }
    std::size_t monic_var() const { return monic_var_; }
    const MultiPoly& monic_generator() const { return gens_[monic_gen_]; }
    bool trivial_ideal() const { return gens_.empty(); }

    MultiPoly normal_form(const MultiPoly& f) const;
    bool is_zero_mod(const MultiPoly& f) const { return normal_form(f).is_zero(); }

    // normal-form monomial basis up to total degree c
    std::vector<Monomial> reduced_monomials(int c) const;

    // f = sum q_i * gens_i with deg(q_i * gens_i) <= cap; exact witness or nullopt
    std::optional<std::vector<MultiPoly>> ideal_membership(const MultiPoly& f, int cap) const;

  private:
    AffineRing(VarSetPtr vars, std::vector<MultiPoly> gens, Strategy s, std::size_t gi,
               std::size_t vi, int cap);
    void grow_reduction(int c) const;

    VarSetPtr vars_;
    std::vector<MultiPoly> gens_;
    Strategy strategy_;
    std::size_t monic_gen_ = 0, monic_var_ = 0;
    int base_cap_ = 0;

    mutable std::mutex mu_;
    mutable int built_cap_ = -1;
    mutable std::shared_ptr<MonomialTable> table_;
    mutable std::shared_ptr<linsolve::RowSpace> reduction_;
};

using AffineRingPtr = std::shared_ptr<const AffineRing>;

struct FiltrationStamp {
    int order_s = 0;
    int degree_d = 0;
    bool leq(const FiltrationStamp& o) const { return order_s <= o.order_s && degree_d <= o.degree_d; }
    FiltrationStamp plus(const FiltrationStamp& o) const {
        return {order_s + o.order_s, degree_d + o.degree_d};
    }
};

// Ring element numerator / divisor^order with normal-formed numerator.
class LocalizedElem {
  public:
    LocalizedElem() = default;
    static LocalizedElem make(AffineRingPtr ring, MultiPoly divisor, MultiPoly numerator, int order);
    static LocalizedElem regular(AffineRingPtr ring, MultiPoly divisor, MultiPoly f) {
        return make(std::move(ring), std::move(divisor), std::move(f), 0);
    }

    const AffineRingPtr& ring() const { return ring_; }
    const MultiPoly& divisor() const { return divisor_; }
    const MultiPoly& numerator() const { return num_; }
    int order() const { return order_; }
    bool is_zero() const { return num_.is_zero(); }

    LocalizedElem plus(const LocalizedElem& o) const;
    LocalizedElem minus(const LocalizedElem& o) const;
    LocalizedElem negated() const;
    LocalizedElem times(const LocalizedElem& o) const;
    LocalizedElem times_poly(const MultiPoly& f) const;
    LocalizedElem times_scalar(const Scalar& c) const;
    LocalizedElem at_order(int s) const;  // raise representation to order s >= order()

    // representative degree per the localized degree convention
    int degree() const;
    // best-effort cancellation of divisor powers via bounded divisibility systems
    LocalizedElem reduce_order() const;

    std::string str() const;

  private:
    AffineRingPtr ring_;
    MultiPoly divisor_;
    MultiPoly num_;
    int order_ = 0;
};

bool loc_equal(const LocalizedElem& a, const LocalizedElem& b);

// strictly increasing variable indices
using IndexTuple = std::vector<int>;

int merge_sign(const IndexTuple& a, const IndexTuple& b, IndexTuple& merged);  // 0 on collision
int insert_sign(const IndexTuple& t, int idx, IndexTuple& out);                // 0 when idx in t

// p-form with LocalizedElem coefficients over a shared ring and divisor.
class DiffForm {
  public:
    DiffForm() = default;
    DiffForm(AffineRingPtr ring, MultiPoly divisor, int p);

    const AffineRingPtr& ring() const { return ring_; }
    const MultiPoly& divisor() const { return divisor_; }
    int degree_p() const { return p_; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::map<IndexTuple, LocalizedElem>& coefficients() const { return coeffs_; }

    void add_term(const IndexTuple& idx, const LocalizedElem& c);
    LocalizedElem coefficient(const IndexTuple& idx) const;

    DiffForm plus(const DiffForm& o) const;
    DiffForm minus(const DiffForm& o) const;
    DiffForm negated() const;
    DiffForm times_scalar(const Scalar& c) const;
    DiffForm times_elem(const LocalizedElem& c) const;
    int max_order() const;  // 0 for the zero form

    std::string str() const;

  private:
    AffineRingPtr ring_;
    MultiPoly divisor_;
    int p_ = 0;
    std::map<IndexTuple, LocalizedElem> coeffs_;
};

DiffForm exterior_d(const DiffForm& w);
DiffForm wedge(const DiffForm& a, const DiffForm& b);
// same form over divisor * extra; numerators pick up extra^order, orders unchanged
DiffForm restrict_form(const DiffForm& w, const MultiPoly& extra_divisor);
FiltrationStamp filtration_stamp(const DiffForm& w);
bool equal_coefficientwise(const DiffForm& a, const DiffForm& b);

// d f = sum_i (partial f / partial X_i) dX_i as a 1-form over the given divisor
DiffForm d_of_poly(const AffineRingPtr& ring, const MultiPoly& divisor, const MultiPoly& f);

}  // namespace edrc::ring
