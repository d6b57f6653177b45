#include "edrc/linsolve.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace edrc::linsolve {

SparseVec sv_scaled_add(const SparseVec& a, const Scalar& f, const SparseVec& b) {
    SparseVec out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            Scalar v = f * b[j].second;
            if (!is_zero(v)) out.emplace_back(b[j].first, std::move(v));
            ++j;
        } else {
            Scalar v = a[i].second + f * b[j].second;
            if (!is_zero(v)) out.emplace_back(a[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    return out;
}

void sv_normalize_content(SparseVec& v) {
    if (v.empty()) return;
    BigInt g(0), l(1);
    for (const auto& [idx, val] : v) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), val.get_num().get_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), val.get_den().get_mpz_t());
    }
    if (g == 0) return;
    Scalar f(l, g);
    f.canonicalize();
    if (f == 1) return;
    for (auto& [idx, val] : v) val *= f;
}

bool sv_is_zero(const SparseVec& v) { return v.empty(); }

void SparseMatrix::set(std::size_t r, std::size_t c, const Scalar& v) {
    if (r >= rows || c >= cols) throw PreconditionError("SparseMatrix::set out of bounds");
    auto& rw = row[r];
    auto it = std::lower_bound(rw.begin(), rw.end(), c,
                               [](const auto& p, std::size_t col) { return p.first < col; });
    if (it != rw.end() && it->first == c) {
        if (is_zero(v))
            rw.erase(it);
        else
            it->second = v;
    } else if (!is_zero(v)) {
        rw.insert(it, {c, v});
    }
}

Scalar SparseMatrix::get(std::size_t r, std::size_t c) const {
    const auto& rw = row[r];
    auto it = std::lower_bound(rw.begin(), rw.end(), c,
                               [](const auto& p, std::size_t col) { return p.first < col; });
    return (it != rw.end() && it->first == c) ? it->second : Scalar(0);
}

std::size_t SparseMatrix::nnz() const {
    std::size_t n = 0;
    for (const auto& r : row) n += r.size();
    return n;
}

std::size_t max_matrix_extent() {
    static std::size_t cap = [] {
        const char* e = std::getenv("EDRC_MAX_MATRIX");
        if (!e) return static_cast<std::size_t>(2'000'000);
        long v = std::atol(e);
        return v > 0 ? static_cast<std::size_t>(v) : static_cast<std::size_t>(2'000'000);
    }();
    return cap;
}

namespace {
int g_parallel_rows = [] {
    const char* e = std::getenv("EDRC_THREADS");
    return e ? std::atoi(e) : 0;
}();

RrefResult rref_impl(SparseMatrix m, bool parallel) {
    if (m.rows > max_matrix_extent() || m.cols > max_matrix_extent())
        throw ComputationError("linsolve", "matrix exceeds EDRC_MAX_MATRIX");
    const std::size_t nrows = m.rows;
    std::vector<bool> used(nrows, false);
    std::vector<std::size_t> pivot_rows, pivot_cols;

    // head[r]: first not-yet-pivotal column position of row r; rows stay col-sorted,
    // so entries left of head are known zeros for the remaining columns.
    for (std::size_t col = 0; col < m.cols; ++col) {
        // pivot: sparsest unused row with a nonzero in this column, lowest index on ties
        std::size_t best = nrows, best_sz = 0;
        for (std::size_t r = 0; r < nrows; ++r) {
            if (used[r] || m.row[r].empty()) continue;
            if (m.row[r].front().first != col) continue;
            std::size_t sz = m.row[r].size();
            if (best == nrows || sz < best_sz) {
                best = r;
                best_sz = sz;
            }
        }
        if (best == nrows) continue;
        used[best] = true;
        pivot_rows.push_back(best);
        pivot_cols.push_back(col);
        // normalize pivot row
        {
            Scalar inv = 1 / m.row[best].front().second;
            if (!(inv == 1))
                for (auto& [idx, val] : m.row[best]) val *= inv;
        }
        const SparseVec& prow = m.row[best];
        auto eliminate = [&](std::size_t r) {
            if (r == best || m.row[r].empty()) return;
            const auto& rw = m.row[r];
            auto it = std::lower_bound(rw.begin(), rw.end(), col,
                                       [](const auto& p, std::size_t c) { return p.first < c; });
            if (it == rw.end() || it->first != col) return;
            Scalar f = -it->second;
            m.row[r] = sv_scaled_add(rw, f, prow);
            if (!used[r]) sv_normalize_content(m.row[r]);
        };
        if (parallel && g_parallel_rows > 1) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) num_threads(g_parallel_rows)
            for (long r = 0; r < static_cast<long>(nrows); ++r)
                eliminate(static_cast<std::size_t>(r));
#else
            for (std::size_t r = 0; r < nrows; ++r) eliminate(r);
#endif
        } else {
            for (std::size_t r = 0; r < nrows; ++r) eliminate(r);
        }
    }

    // canonical order: sort pivot rows by pivot column
    std::vector<std::size_t> order(pivot_rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return pivot_cols[a] < pivot_cols[b]; });
    RrefResult out;
    out.rank = pivot_rows.size();
    out.rref = SparseMatrix(out.rank, m.cols);
    out.pivots.reserve(out.rank);
    for (std::size_t i = 0; i < order.size(); ++i) {
        out.rref.row[i] = std::move(m.row[pivot_rows[order[i]]]);
        out.pivots.push_back(pivot_cols[order[i]]);
    }
    return out;
}

}  // namespace

void set_parallel_rows(int threads) { g_parallel_rows = threads; }
int parallel_rows() { return g_parallel_rows; }

RrefResult rref_serial(SparseMatrix m) { return rref_impl(std::move(m), false); }
RrefResult rref_parallel(SparseMatrix m) { return rref_impl(std::move(m), true); }
RrefResult rref(SparseMatrix m) { return rref_impl(std::move(m), g_parallel_rows > 1); }

std::optional<std::vector<Scalar>> solve_particular(const SparseMatrix& m,
                                                    const std::vector<Scalar>& rhs) {
    if (rhs.size() != m.rows) throw PreconditionError("solve_particular: dimension mismatch");
    SparseMatrix aug(m.rows, m.cols + 1);
    aug.row = m.row;
    for (std::size_t r = 0; r < m.rows; ++r)
        if (!is_zero(rhs[r])) aug.row[r].emplace_back(m.cols, rhs[r]);
    RrefResult rr = rref(std::move(aug));
    std::vector<Scalar> x(m.cols, Scalar(0));
    for (std::size_t i = 0; i < rr.rank; ++i) {
        if (rr.pivots[i] == m.cols) return std::nullopt;  // 0 = 1 row
        const auto& row = rr.rref.row[i];
        if (!row.empty() && row.back().first == m.cols) x[rr.pivots[i]] = row.back().second;
    }
    return x;
}

SubspaceBasis kernel_basis(const SparseMatrix& m) {
    RrefResult rr = rref(m);
    SubspaceBasis out;
    out.ambient_dim = m.cols;
    std::vector<bool> is_pivot(m.cols, false);
    for (auto p : rr.pivots) is_pivot[p] = true;
    for (std::size_t f = 0; f < m.cols; ++f) {
        if (is_pivot[f]) continue;
        SparseVec v;
        for (std::size_t i = 0; i < rr.rank; ++i) {
            Scalar e = rr.rref.get(i, f);
            if (!is_zero(e)) v.emplace_back(rr.pivots[i], -e);
        }
        v.emplace_back(f, Scalar(1));
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        out.basis.push_back(std::move(v));
    }
    return out;
}

SparseVec RowSpace::reduce(SparseVec v) const {
    // Rows are kept in echelon form only. Eliminating the entry at position
    // v[k] introduces entries strictly to the right, which the walk reaches
    // later, so a single left-to-right pass terminates.
    std::size_t k = 0;
    while (k < v.size()) {
        auto it = rows_.find(v[k].first);
        if (it == rows_.end()) {
            ++k;
            continue;
        }
        Scalar f = -v[k].second;
        v = sv_scaled_add(v, f, it->second);
    }
    return v;
}

bool RowSpace::add(SparseVec v) {
    v = reduce(std::move(v));
    if (v.empty()) return false;
    Scalar inv = 1 / v.front().second;
    if (!(inv == 1))
        for (auto& [i, val] : v) val *= inv;
    rows_.emplace(v.front().first, std::move(v));
    return true;
}

QuotientResult quotient_basis(const SubspaceBasis& big, const SubspaceBasis& small,
                              const std::vector<std::pair<long, long>>& weights) {
    if (small.ambient_dim != big.ambient_dim && !small.basis.empty())
        throw PreconditionError("quotient_basis: ambient mismatch");
    RowSpace big_space(big.ambient_dim);
    for (const auto& v : big.basis) big_space.add(v);
    RowSpace acc(big.ambient_dim);
    for (const auto& v : small.basis) {
        if (!big_space.contains(v)) throw PreconditionError("quotient_basis: small not contained in big");
        acc.add(v);
    }
    std::size_t small_dim = acc.dim();

    std::vector<std::size_t> order(big.basis.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    if (!weights.empty()) {
        if (weights.size() != big.basis.size())
            throw PreconditionError("quotient_basis: weight per basis vector required");
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return weights[a] < weights[b]; });
    }
    QuotientResult out;
    for (auto i : order)
        if (acc.add(big.basis[i])) out.representative_indices.push_back(i);
    out.dim = big_space.dim() - small_dim;
    if (out.dim != out.representative_indices.size())
        throw ComputationError("linsolve", "quotient_basis: inconsistent dimension count");
    return out;
}

}  // namespace edrc::linsolve
