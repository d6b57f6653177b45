#pragma once

#include <utility>
#include <vector>

#include "edrc/cech.hpp"
#include "edrc/linsolve.hpp"
#include "edrc/ring.hpp"

namespace edrc::hypercoh {

using poly::Monomial;
using poly::MultiPoly;
using ring::AffineRingPtr;
using ring::DiffForm;
using ring::IndexTuple;

// Finite-dimensional slice of p-forms num/g^s dX_I with reduced numerator
// monomials of degree <= numerator_cap. Columns are (tuple, monomial) pairs.
class FormSlice {
  public:
    FormSlice(AffineRingPtr ring, MultiPoly divisor, int form_p, int order_s, int degree_cap);

    std::size_t dim() const { return tuples_.size() * monomials_.size(); }
    int form_p() const { return p_; }
    int order() const { return s_; }
    int degree_cap() const { return d_; }
    int numerator_cap() const { return num_cap_; }
    const AffineRingPtr& ring() const { return ring_; }
    const MultiPoly& divisor() const { return divisor_; }
    const std::vector<IndexTuple>& tuples() const { return tuples_; }
    const std::vector<Monomial>& monomials() const { return monomials_; }

    DiffForm column_form(std::size_t col) const;
    std::pair<long, long> weight(std::size_t col) const;
    linsolve::SparseVec encode(const DiffForm& w) const;  // throws on slice overflow
    DiffForm decode(const linsolve::SparseVec& v) const;

    // generators of dI wedge Omega^{p-1} inside this slice
    std::vector<linsolve::SparseVec> relation_generators() const;
    // generators of { m * extra dX_I } inside this slice (numerators that are
    // multiples of extra), at this slice's order
    std::vector<linsolve::SparseVec> multiple_generators(const MultiPoly& extra) const;

  private:
    AffineRingPtr ring_;
    MultiPoly divisor_;
    int p_, s_, d_, num_cap_;
    std::vector<IndexTuple> tuples_;
    std::vector<Monomial> monomials_;
    std::map<IndexTuple, std::size_t> tuple_rank_;
    std::map<Monomial, std::size_t, poly::GradedLexLess> mon_rank_;
};

std::vector<IndexTuple> increasing_tuples(int n, int p);

// true iff w lies in the span of the dI-relation generators at its own stamps
bool form_in_relation_span(const DiffForm& w, int degree_slack);

// Slice of the Cech-de Rham total complex at one level: every cell (p,q) holds
// a FormSlice over the product divisor at the given order and degree cap.
class TotalSlice {
  public:
    TotalSlice(cech::CoverPtr cover, int level, int order_s, int degree_cap);

    std::size_t dim() const { return total_dim_; }
    int level() const { return level_; }
    const cech::CoverPtr& cover() const { return cover_; }

    linsolve::SparseVec encode(const cech::TotalCochain& c) const;
    cech::TotalCochain decode(const linsolve::SparseVec& v) const;
    std::pair<long, long> weight(std::size_t col) const;
    std::vector<linsolve::SparseVec> relation_generators() const;
    // d_tot of the col-th basis cochain, encoded in the target slice
    linsolve::SparseVec d_tot_column(std::size_t col, const TotalSlice& target) const;

  private:
    struct Cell {
        int q;
        IndexTuple idx;  // cover indices
        FormSlice slice;
        std::size_t offset;
    };
    cech::CoverPtr cover_;
    int level_, s_, d_;
    std::vector<Cell> cells_;
    std::size_t total_dim_ = 0;
    cech::TotalCochain column_cochain(std::size_t col) const;
};

// One cohomology computation in a fixed window. d_below/d_here map basis
// columns; sub_* span the subspace quotiented away at each level. Returns the
// dimension and weight-minimal closed representatives modulo boundaries.
struct WindowHomology {
    std::size_t dim = 0;
    std::vector<linsolve::SparseVec> reps;
};

WindowHomology window_homology(const std::vector<linsolve::SparseVec>& d_below_cols,
                               std::size_t here_dim,
                               const std::vector<linsolve::SparseVec>& d_here_cols,
                               std::size_t above_dim,
                               const std::vector<linsolve::SparseVec>& sub_here,
                               const std::vector<linsolve::SparseVec>& sub_above,
                               const std::vector<std::pair<long, long>>& weights);

}  // namespace edrc::hypercoh
