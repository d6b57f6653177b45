#include "edrc/slices.hpp"

#include <algorithm>

namespace edrc::hypercoh {

using ring::LocalizedElem;

std::vector<IndexTuple> increasing_tuples(int n, int p) {
    std::vector<IndexTuple> out;
    if (p < 0 || p > n) return out;
    IndexTuple cur(p);
    // lexicographic enumeration of p-subsets of {0..n-1}
    for (int i = 0; i < p; ++i) cur[i] = i;
    while (true) {
        out.push_back(cur);
        if (p == 0) break;
        int k = p - 1;
        while (k >= 0 && cur[k] == n - p + k) --k;
        if (k < 0) break;
        ++cur[k];
        for (int i = k + 1; i < p; ++i) cur[i] = cur[i - 1] + 1;
    }
    return out;
}

FormSlice::FormSlice(AffineRingPtr ring, MultiPoly divisor, int form_p, int order_s, int degree_cap)
    : ring_(std::move(ring)), divisor_(std::move(divisor)), p_(form_p), s_(order_s), d_(degree_cap) {
    if (p_ < 0 || s_ < 0) throw PreconditionError("FormSlice: negative order or degree");
    int dg = divisor_.total_degree();
    if (dg == poly::kDegZero) throw PreconditionError("FormSlice: zero divisor");
    num_cap_ = d_ - p_ + s_ * dg;
    tuples_ = increasing_tuples(static_cast<int>(ring_->nvars()), p_);
    if (num_cap_ >= 0 && !tuples_.empty()) monomials_ = ring_->reduced_monomials(num_cap_);
    for (std::size_t i = 0; i < tuples_.size(); ++i) tuple_rank_.emplace(tuples_[i], i);
    for (std::size_t i = 0; i < monomials_.size(); ++i) mon_rank_.emplace(monomials_[i], i);
    if (dim() > linsolve::max_matrix_extent())
        throw ComputationError("hypercoh", "slice too large (EDRC_MAX_MATRIX)");
}

DiffForm FormSlice::column_form(std::size_t col) const {
    std::size_t t = col / monomials_.size(), m = col % monomials_.size();
    DiffForm w(ring_, divisor_, p_);
    w.add_term(tuples_[t],
               LocalizedElem::make(ring_, divisor_,
                                   MultiPoly::term(ring_->vars(), monomials_[m], Scalar(1)), s_));
    return w;
}

std::pair<long, long> FormSlice::weight(std::size_t col) const {
    std::size_t m = col % monomials_.size();
    int dg = divisor_.total_degree();
    return {s_, monomials_[m].total_degree() - s_ * dg + p_};
}

linsolve::SparseVec FormSlice::encode(const DiffForm& w) const {
    if (w.degree_p() != p_) throw PreconditionError("FormSlice::encode: degree mismatch");
    linsolve::SparseVec v;
    for (const auto& [idx, c] : w.coefficients()) {
        if (c.order() > s_) throw ComputationError("hypercoh", "slice overflow: order too large");
        LocalizedElem lifted = c.at_order(s_);
        auto t = tuple_rank_.find(idx);
        if (t == tuple_rank_.end()) throw ComputationError("hypercoh", "slice overflow: bad tuple");
        for (const auto& [mon, coef] : lifted.numerator().terms()) {
            auto r = mon_rank_.find(mon);
            if (r == mon_rank_.end())
                throw ComputationError("hypercoh", "slice overflow: numerator degree");
            v.emplace_back(t->second * monomials_.size() + r->second, coef);
        }
    }
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return v;
}

DiffForm FormSlice::decode(const linsolve::SparseVec& v) const {
    DiffForm w(ring_, divisor_, p_);
    for (const auto& [col, c] : v) {
        std::size_t t = col / monomials_.size(), m = col % monomials_.size();
        w.add_term(tuples_[t],
                   LocalizedElem::make(
                       ring_, divisor_,
                       MultiPoly::term(ring_->vars(), monomials_[m], Scalar(1)) * c, s_));
    }
    return w;
}

std::vector<linsolve::SparseVec> FormSlice::relation_generators() const {
    std::vector<linsolve::SparseVec> out;
    if (p_ == 0 || ring_->trivial_ideal()) return out;
    auto lower = increasing_tuples(static_cast<int>(ring_->nvars()), p_ - 1);
    for (const auto& f : ring_->generators()) {
        DiffForm df = ring::d_of_poly(ring_, divisor_, f);
        if (df.is_zero()) continue;
        int df_deg = f.total_degree() - 1;
        int room = num_cap_ - df_deg;
        if (room < 0) continue;
        auto mons = ring_->reduced_monomials(room);
        for (const auto& idx : lower) {
            for (const auto& m : mons) {
                DiffForm base(ring_, divisor_, p_ - 1);
                base.add_term(idx, LocalizedElem::make(ring_, divisor_,
                                                       MultiPoly::term(ring_->vars(), m, Scalar(1)),
                                                       s_));
                DiffForm gen = ring::wedge(df, base);
                if (gen.is_zero()) continue;
                out.push_back(encode(gen));
            }
        }
    }
    return out;
}

std::vector<linsolve::SparseVec> FormSlice::multiple_generators(const MultiPoly& extra) const {
    std::vector<linsolve::SparseVec> out;
    int room = num_cap_ - extra.total_degree();
    if (room < 0) return out;
    ring::MonomialTable mons(ring_->nvars(), room);
    for (const auto& idx : tuples_) {
        for (std::size_t k = mons.size(); k-- > 0;) {
            DiffForm gen(ring_, divisor_, p_);
            gen.add_term(idx, LocalizedElem::make(
                                  ring_, divisor_,
                                  extra * MultiPoly::term(ring_->vars(), mons.at(k), Scalar(1)), s_));
            if (gen.is_zero()) continue;
            out.push_back(encode(gen));
        }
    }
    return out;
}

bool form_in_relation_span(const DiffForm& w, int degree_slack) {
    if (w.is_zero()) return true;
    auto stamp = ring::filtration_stamp(w);
    FormSlice slice(w.ring(), w.divisor(), w.degree_p(), stamp.order_s,
                    stamp.degree_d + degree_slack);
    linsolve::RowSpace span(slice.dim());
    for (auto& g : slice.relation_generators()) span.add(std::move(g));
    return span.contains(slice.encode(w));
}

TotalSlice::TotalSlice(cech::CoverPtr cover, int level, int order_s, int degree_cap)
    : cover_(std::move(cover)), level_(level), s_(order_s), d_(degree_cap) {
    int t = static_cast<int>(cover_->size());
    for (int q = 0; q <= std::min(level_, t - 1); ++q) {
        int p = level_ - q;
        if (p > static_cast<int>(cover_->ring()->nvars())) continue;
        for (const auto& idx : increasing_tuples(t, q + 1)) {
            FormSlice fs(cover_->ring(), cover_->divisor_product(idx), p, s_, d_);
            if (fs.dim() == 0) continue;
            cells_.push_back({q, idx, std::move(fs), total_dim_});
            total_dim_ += cells_.back().slice.dim();
        }
    }
}

linsolve::SparseVec TotalSlice::encode(const cech::TotalCochain& c) const {
    if (c.level() != level_) throw PreconditionError("TotalSlice::encode: level mismatch");
    linsolve::SparseVec v;
    for (const auto& [q, cochain] : c.cells()) {
        for (const auto& [idx, form] : cochain.entries()) {
            if (form.is_zero()) continue;
            bool found = false;
            for (const auto& cell : cells_) {
                if (cell.q == q && cell.idx == idx) {
                    for (auto& [col, val] : cell.slice.encode(form))
                        v.emplace_back(cell.offset + col, val);
                    found = true;
                    break;
                }
            }
            if (!found) throw ComputationError("hypercoh", "total slice overflow: missing cell");
        }
    }
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return v;
}

cech::TotalCochain TotalSlice::decode(const linsolve::SparseVec& v) const {
    cech::TotalCochain out(cover_, level_);
    std::map<int, cech::CechCochain> cells;
    auto cell_of = [&](std::size_t col) -> const Cell& {
        std::size_t lo = 0, hi = cells_.size();
        while (lo + 1 < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (cells_[mid].offset <= col)
                lo = mid;
            else
                hi = mid;
        }
        return cells_[lo];
    };
    for (const auto& [col, val] : v) {
        const Cell& cell = cell_of(col);
        DiffForm f = cell.slice.decode({{col - cell.offset, val}});
        auto it = cells.find(cell.q);
        if (it == cells.end())
            it = cells.emplace(cell.q, cech::CechCochain(cover_, cell.q, level_ - cell.q)).first;
        it->second.add_entry(cell.idx, f);
    }
    for (auto& [q, cochain] : cells) out.add_cell(cochain);
    return out;
}

std::pair<long, long> TotalSlice::weight(std::size_t col) const {
    for (std::size_t ci = cells_.size(); ci-- > 0;) {
        if (cells_[ci].offset <= col) return cells_[ci].slice.weight(col - cells_[ci].offset);
    }
    throw PreconditionError("TotalSlice::weight: bad column");
}

std::vector<linsolve::SparseVec> TotalSlice::relation_generators() const {
    std::vector<linsolve::SparseVec> out;
    for (const auto& cell : cells_) {
        for (auto& g : cell.slice.relation_generators()) {
            linsolve::SparseVec shifted;
            shifted.reserve(g.size());
            for (auto& [col, val] : g) shifted.emplace_back(cell.offset + col, val);
            out.push_back(std::move(shifted));
        }
    }
    return out;
}

cech::TotalCochain TotalSlice::column_cochain(std::size_t col) const {
    cech::TotalCochain out(cover_, level_);
    for (std::size_t ci = cells_.size(); ci-- > 0;) {
        if (cells_[ci].offset <= col) {
            const Cell& cell = cells_[ci];
            cech::CechCochain c(cover_, cell.q, level_ - cell.q);
            c.add_entry(cell.idx, cell.slice.column_form(col - cell.offset));
            out.add_cell(c);
            return out;
        }
    }
    throw PreconditionError("TotalSlice: bad column");
}

linsolve::SparseVec TotalSlice::d_tot_column(std::size_t col, const TotalSlice& target) const {
    return target.encode(cech::total_d(column_cochain(col)));
}

WindowHomology window_homology(const std::vector<linsolve::SparseVec>& d_below_cols,
                               std::size_t here_dim,
                               const std::vector<linsolve::SparseVec>& d_here_cols,
                               std::size_t above_dim,
                               const std::vector<linsolve::SparseVec>& sub_here,
                               const std::vector<linsolve::SparseVec>& sub_above,
                               const std::vector<std::pair<long, long>>& weights) {
    if (d_here_cols.size() != here_dim)
        throw PreconditionError("window_homology: one image per basis column required");

    // closed vectors: v with d(v) in span(sub_above), via kernel of [d | sub_above]
    linsolve::SparseMatrix closed_m(above_dim, here_dim + sub_above.size());
    for (std::size_t j = 0; j < here_dim; ++j)
        for (const auto& [r, val] : d_here_cols[j]) closed_m.row[r].emplace_back(j, val);
    for (std::size_t k = 0; k < sub_above.size(); ++k)
        for (const auto& [r, val] : sub_above[k]) closed_m.row[r].emplace_back(here_dim + k, val);
    for (auto& row : closed_m.row)
        std::sort(row.begin(), row.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    auto kern = linsolve::kernel_basis(closed_m);

    linsolve::SubspaceBasis big;
    big.ambient_dim = here_dim;
    std::vector<std::pair<long, long>> cand_weights;
    for (const auto& kv : kern.basis) {
        linsolve::SparseVec proj;
        for (const auto& [col, val] : kv)
            if (col < here_dim) proj.emplace_back(col, val);
        if (proj.empty()) continue;
        std::pair<long, long> w{0, 0};
        for (const auto& [col, val] : proj) w = std::max(w, weights[col]);
        big.basis.push_back(std::move(proj));
        cand_weights.push_back(w);
    }

    linsolve::SubspaceBasis small;
    small.ambient_dim = here_dim;
    small.basis = d_below_cols;
    small.basis.insert(small.basis.end(), sub_here.begin(), sub_here.end());

    auto q = linsolve::quotient_basis(big, small, cand_weights);
    WindowHomology out;
    out.dim = q.dim;
    for (auto i : q.representative_indices) out.reps.push_back(big.basis[i]);
    return out;
}

}  // namespace edrc::hypercoh
