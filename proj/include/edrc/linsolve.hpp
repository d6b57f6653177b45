#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "edrc/scalar.hpp"

namespace edrc::linsolve {

// Sparse vector: (index, value) pairs sorted by index, no stored zeros.
using SparseVec = std::vector<std::pair<std::size_t, Scalar>>;

SparseVec sv_scaled_add(const SparseVec& a, const Scalar& f, const SparseVec& b);  // a + f*b
void sv_normalize_content(SparseVec& v);  // divide by gcd of numerators / lcm of denominators
bool sv_is_zero(const SparseVec& v);

struct SparseMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<SparseVec> row;

    SparseMatrix() = default;
    SparseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), row(r) {}
    void set(std::size_t r, std::size_t c, const Scalar& v);
    Scalar get(std::size_t r, std::size_t c) const;
    std::size_t nnz() const;
};

struct RrefResult {
    SparseMatrix rref;                 // canonical reduced row echelon form, zero rows dropped
    std::vector<std::size_t> pivots;   // pivot column of each rref row, increasing
    std::size_t rank = 0;
};

// Fraction-managed Gaussian elimination. Pivot rule: smallest column index,
// then sparsest row, then lowest row index. The parallel kernel runs the row
// updates under OpenMP and is bit-identical to the serial reference.
RrefResult rref_serial(SparseMatrix m);
RrefResult rref_parallel(SparseMatrix m);
RrefResult rref(SparseMatrix m);  // dispatches on the configured mode

// Process-wide kernel selection; initialized from EDRC_THREADS (0 or unset = serial).
void set_parallel_rows(int threads);
int parallel_rows();

// One exact solution of m*x = rhs with free variables set to 0, or nullopt.
std::optional<std::vector<Scalar>> solve_particular(const SparseMatrix& m,
                                                    const std::vector<Scalar>& rhs);

struct SubspaceBasis {
    std::size_t ambient_dim = 0;
    std::vector<SparseVec> basis;
};

SubspaceBasis kernel_basis(const SparseMatrix& m);

// Incremental row space in rref form; the workhorse for span and membership.
class RowSpace {
  public:
    explicit RowSpace(std::size_t ambient) : ambient_(ambient) {}
    SparseVec reduce(SparseVec v) const;
    bool add(SparseVec v);  // true when v was independent of the current span
    bool contains(const SparseVec& v) const { return sv_is_zero(reduce(v)); }
    std::size_t dim() const { return rows_.size(); }
    std::size_t ambient() const { return ambient_; }
    const std::map<std::size_t, SparseVec>& rows() const { return rows_; }

  private:
    std::size_t ambient_;
    std::map<std::size_t, SparseVec> rows_;  // pivot column -> normalized row
};

struct QuotientResult {
    std::size_t dim = 0;
    std::vector<std::size_t> representative_indices;  // into big.basis
};

// Representatives of big/small, greedily chosen from big's basis vectors in
// ascending weight order. weights may be empty (keeps the given order).
QuotientResult quotient_basis(const SubspaceBasis& big, const SubspaceBasis& small,
                              const std::vector<std::pair<long, long>>& weights);

// Hard cap on matrix extent, settable via EDRC_MAX_MATRIX.
std::size_t max_matrix_extent();

}  // namespace edrc::linsolve
