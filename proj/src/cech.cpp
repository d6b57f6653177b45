#include "edrc/cech.hpp"

#include <algorithm>

#include "edrc/slices.hpp"

namespace edrc::cech {

using ring::LocalizedElem;

Cover::Cover(AffineRingPtr ring, std::vector<MultiPoly> divisors, BigInt degree_D, int dim_m,
             int certificate_cap)
    : ring_(std::move(ring)), divisors_(std::move(divisors)), degree_D_(std::move(degree_D)),
      dim_m_(dim_m) {
    if (divisors_.empty()) throw PreconditionError("Cover: no divisors");
    d1_ = 1;
    for (const auto& g : divisors_) {
        if (g.is_zero()) throw PreconditionError("Cover: zero divisor");
        d1_ = std::max(d1_, g.total_degree());
    }
    auto cert = certs::find_certificate(ring_, divisors_, certificate_cap);
    if (!cert)
        throw ComputationError("cech", "cover property certificate not found; not a cover?");
    power_certs_.emplace(1, std::move(*cert));
}

MultiPoly Cover::divisor_product(const IndexTuple& idx) const {
    MultiPoly g = MultiPoly::constant(ring_->vars(), 1);
    for (auto i : idx) g = g * divisors_.at(static_cast<std::size_t>(i));
    return g;
}

BigInt Cover::preimage_degree_shift(int s) const {
    return 2 * degree_D_ * big_pow(BigInt(s) * d1_, static_cast<unsigned long>(dim_m_));
}

const Certificate& Cover::power_certificate(int s) const {
    if (s < 1) throw PreconditionError("power_certificate: order must be >= 1");
    std::lock_guard<std::mutex> lock(mu_);
    auto it = power_certs_.find(s);
    if (it != power_certs_.end()) return it->second;
    std::vector<MultiPoly> powers;
    powers.reserve(divisors_.size());
    for (const auto& g : divisors_) powers.push_back(g.pow(static_cast<unsigned>(s)));
    BigInt cap_b = preimage_degree_shift(s);
    int cap = cap_b > 4096 ? 4096 : static_cast<int>(cap_b.get_si());
    auto cert = certs::find_certificate(ring_, powers, cap);
    if (!cert) throw ComputationError("cech", "power certificate not found at the bound cap");
    return power_certs_.emplace(s, std::move(*cert)).first->second;
}

bool CechCochain::is_zero() const {
    for (const auto& [idx, w] : entries_)
        if (!w.is_zero()) return false;
    return true;
}

void CechCochain::add_entry(const IndexTuple& idx, const DiffForm& w) {
    if (static_cast<int>(idx.size()) != q_ + 1)
        throw PreconditionError("CechCochain: tuple arity mismatch");
    for (std::size_t i = 0; i + 1 < idx.size(); ++i)
        if (idx[i] >= idx[i + 1]) throw PreconditionError("CechCochain: tuple not increasing");
    if (!idx.empty() && idx.back() >= static_cast<int>(cover_->size()))
        throw PreconditionError("CechCochain: cover index out of range");
    if (w.degree_p() != p_) throw PreconditionError("CechCochain: form degree mismatch");
    if (w.is_zero()) return;
    auto it = entries_.find(idx);
    if (it == entries_.end()) {
        entries_.emplace(idx, w);
    } else {
        DiffForm sum = it->second.plus(w);
        if (sum.is_zero())
            entries_.erase(it);
        else
            it->second = std::move(sum);
    }
}

DiffForm CechCochain::entry(const IndexTuple& idx) const {
    auto it = entries_.find(idx);
    if (it != entries_.end()) return it->second;
    return DiffForm(cover_->ring(), cover_->divisor_product(idx), p_);
}

CechCochain CechCochain::plus(const CechCochain& o) const {
    if (q_ != o.q_ || p_ != o.p_) throw PreconditionError("CechCochain::plus: shape mismatch");
    CechCochain r = *this;
    for (const auto& [idx, w] : o.entries_) r.add_entry(idx, w);
    return r;
}

CechCochain CechCochain::minus(const CechCochain& o) const { return plus(o.negated()); }

CechCochain CechCochain::negated() const {
    CechCochain r = *this;
    for (auto& [idx, w] : r.entries_) w = w.negated();
    return r;
}

CechCochain CechCochain::scaled(const Scalar& c) const {
    CechCochain r(cover_, q_, p_);
    if (edrc::is_zero(c)) return r;
    for (const auto& [idx, w] : entries_) r.add_entry(idx, w.times_scalar(c));
    return r;
}

int CechCochain::max_order() const {
    int s = 0;
    for (const auto& [idx, w] : entries_) s = std::max(s, w.max_order());
    return s;
}

int CechCochain::max_degree_stamp() const {
    int d = 0;
    for (const auto& [idx, w] : entries_) d = std::max(d, ring::filtration_stamp(w).degree_d);
    return d;
}

CechCochain cech_d(const CechCochain& c) {
    const auto& cover = c.cover();
    CechCochain out(cover, c.level_q() + 1, c.form_p());
    for (const auto& [idx, w] : c.entries()) {
        for (int j = 0; j < static_cast<int>(cover->size()); ++j) {
            if (std::find(idx.begin(), idx.end(), j) != idx.end()) continue;
            IndexTuple target;
            target.reserve(idx.size() + 1);
            std::size_t pos = 0;
            while (pos < idx.size() && idx[pos] < j) target.push_back(idx[pos++]);
            std::size_t j_pos = target.size();
            target.push_back(j);
            while (pos < idx.size()) target.push_back(idx[pos++]);
            DiffForm restricted = ring::restrict_form(w, cover->divisors()[static_cast<std::size_t>(j)]);
            out.add_entry(target, (j_pos % 2 == 0) ? restricted : restricted.negated());
        }
    }
    return out;
}

CechCochain entrywise_d(const CechCochain& c) {
    CechCochain out(c.cover(), c.level_q(), c.form_p() + 1);
    for (const auto& [idx, w] : c.entries()) out.add_entry(idx, ring::exterior_d(w));
    return out;
}

DiffForm numerator_form(const DiffForm& w, int s) {
    auto one = MultiPoly::constant(w.ring()->vars(), 1);
    DiffForm out(w.ring(), one, w.degree_p());
    for (const auto& [idx, c] : w.coefficients())
        out.add_term(idx, LocalizedElem::regular(w.ring(), one, c.at_order(s).numerator()));
    return out;
}

namespace {

// zero as a section: every entry lies in the dI-relation span of its cell
bool cochain_zero_as_section(const CechCochain& c) {
    for (const auto& [idx, w] : c.entries()) {
        if (w.is_zero()) continue;
        if (!hypercoh::form_in_relation_span(w, 2)) return false;
    }
    return true;
}

bool total_zero_as_section(const TotalCochain& c) {
    for (const auto& [q, cell] : c.cells())
        if (!cochain_zero_as_section(cell)) return false;
    return true;
}

}  // namespace

CechCochain cocycle_preimage(const CechCochain& w, int s) {
    const auto& cover = w.cover();
    if (w.level_q() < 1) throw PreconditionError("cocycle_preimage: level must be >= 1");
    if (w.max_order() > s) throw PreconditionError("cocycle_preimage: entries exceed common order");
    if (!cochain_zero_as_section(cech_d(w)))
        throw ComputationError("cech", "cocycle_preimage: input not closed");

    const Certificate& cert = cover->power_certificate(s);
    const int q = w.level_q();
    const auto& ring = cover->ring();
    auto one = MultiPoly::constant(ring->vars(), 1);

    // eta_T = (1/g_T^s) sum_i h_i * eps * alpha_{sort(T u i)}
    std::map<IndexTuple, DiffForm> acc;  // numerator forms per target tuple
    for (const auto& [U, form] : w.entries()) {
        DiffForm num = numerator_form(form, s);
        for (std::size_t nu = 0; nu < U.size(); ++nu) {
            int i = U[nu];
            IndexTuple T;
            for (std::size_t k = 0; k < U.size(); ++k)
                if (k != nu) T.push_back(U[k]);
            // sign of sorting (i, T...): i moves right past the elements below it
            int eps = (nu % 2 == 0) ? 1 : -1;
            const MultiPoly& h = cert.cofactors[static_cast<std::size_t>(i)];
            if (h.is_zero()) continue;
            DiffForm contrib(ring, one, w.form_p());
            for (const auto& [fidx, c] : num.coefficients())
                contrib.add_term(fidx, LocalizedElem::regular(
                                           ring, one,
                                           eps > 0 ? c.numerator() * h : -(c.numerator() * h)));
            auto it = acc.find(T);
            if (it == acc.end())
                acc.emplace(T, std::move(contrib));
            else
                it->second = it->second.plus(contrib);
        }
    }

    CechCochain eta(cover, q - 1, w.form_p());
    for (const auto& [T, num] : acc) {
        MultiPoly gT = cover->divisor_product(T);
        DiffForm entry(ring, gT, w.form_p());
        for (const auto& [fidx, c] : num.coefficients())
            entry.add_term(fidx, LocalizedElem::make(ring, gT, c.numerator(), s));
        eta.add_entry(T, entry);
    }

    // contract: cech_d(eta) = w and stamp growth bounded by (s, d + N)
    CechCochain check = cech_d(eta).minus(w);
    if (!check.is_zero() && !cochain_zero_as_section(check))
        throw ComputationError("cech", "cocycle_preimage: preimage check failed");
    BigInt shift = cover->preimage_degree_shift(s);
    long d_in = w.max_degree_stamp();
    for (const auto& [T, entry] : eta.entries()) {
        auto st = ring::filtration_stamp(entry);
        if (st.order_s > s || BigInt(st.degree_d) > d_in + shift)
            throw ComputationError("cech", "cocycle_preimage: stamp bound violated");
    }
    return eta;
}

bool TotalCochain::is_zero() const {
    for (const auto& [q, c] : cells_)
        if (!c.is_zero()) return false;
    return true;
}

void TotalCochain::add_cell(const CechCochain& c) {
    if (c.level_q() + c.form_p() != level_) throw PreconditionError("TotalCochain: level mismatch");
    if (c.is_zero()) return;
    auto it = cells_.find(c.level_q());
    if (it == cells_.end()) {
        cells_.emplace(c.level_q(), c);
    } else {
        CechCochain sum = it->second.plus(c);
        if (sum.is_zero())
            cells_.erase(it);
        else
            it->second = std::move(sum);
    }
}

CechCochain TotalCochain::cell(int q) const {
    auto it = cells_.find(q);
    if (it != cells_.end()) return it->second;
    return CechCochain(cover_, q, level_ - q);
}

TotalCochain TotalCochain::plus(const TotalCochain& o) const {
    if (level_ != o.level_) throw PreconditionError("TotalCochain::plus: level mismatch");
    TotalCochain r = *this;
    for (const auto& [q, c] : o.cells_) r.add_cell(c);
    return r;
}

TotalCochain TotalCochain::minus(const TotalCochain& o) const {
    TotalCochain r = o;
    for (auto& [q, c] : r.cells_) c = c.negated();
    return plus(r);
}

TotalCochain total_d(const TotalCochain& c) {
    TotalCochain out(c.cover(), c.level() + 1);
    for (const auto& [q, cell] : c.cells()) {
        out.add_cell(cech_d(cell));
        CechCochain dc = entrywise_d(cell);
        out.add_cell(q % 2 == 0 ? dc : dc.negated());
    }
    return out;
}

TotalCochain embed_global(const CoverPtr& cover, const DiffForm& alpha) {
    TotalCochain out(cover, alpha.degree_p());
    CechCochain bottom(cover, 0, alpha.degree_p());
    for (int i = 0; i < static_cast<int>(cover->size()); ++i)
        bottom.add_entry({i}, ring::restrict_form(alpha, cover->divisors()[static_cast<std::size_t>(i)]));
    out.add_cell(bottom);
    return out;
}

ZigzagResult zigzag_collapse(const TotalCochain& c) {
    const auto& cover = c.cover();
    const int level = c.level();
    TotalCochain dc = total_d(c);
    if (!dc.is_zero() && !total_zero_as_section(dc))
        throw ComputationError("cech", "zigzag: input not closed");

    TotalCochain work = c;
    std::vector<TotalCochain> chain;
    for (int q_top = level; q_top >= 1; --q_top) {
        CechCochain top = work.cell(q_top);
        if (top.is_zero()) continue;
        int s = std::max(1, top.max_order());
        CechCochain eta = cocycle_preimage(top, s);
        TotalCochain correction(cover, level - 1);
        correction.add_cell(eta);
        chain.push_back(correction);
        // subtract d_tot(correction): clears the top cell, adjusts the next one
        work = work.minus(total_d(correction));
        CechCochain residue = work.cell(q_top);
        if (!residue.is_zero()) {
            // only a relation-span representative may remain; drop it
            if (!cochain_zero_as_section(residue))
                throw ComputationError("cech", "zigzag: top row failed to clear");
            TotalCochain cleaned(cover, level);
            for (const auto& [q, cell] : work.cells())
                if (q != q_top) cleaned.add_cell(cell);
            work = std::move(cleaned);
        }
    }

    // glue the bottom row: entries agree on overlaps, certificate lifts the order
    CechCochain bottom = work.cell(0);
    if (!cochain_zero_as_section(cech_d(bottom)))
        throw ComputationError("cech", "zigzag: bottom row entries disagree on overlaps");
    const auto& ring = cover->ring();
    auto one = MultiPoly::constant(ring->vars(), 1);
    int p = level;
    DiffForm alpha(ring, one, p);
    if (!bottom.is_zero()) {
        int s = std::max(1, bottom.max_order());
        const Certificate& cert = cover->power_certificate(s);
        for (int i = 0; i < static_cast<int>(cover->size()); ++i) {
            IndexTuple ti{i};
            DiffForm num = numerator_form(bottom.entry(ti), s);
            const MultiPoly& h = cert.cofactors[static_cast<std::size_t>(i)];
            if (h.is_zero()) continue;
            for (const auto& [fidx, cc] : num.coefficients())
                alpha.add_term(fidx, LocalizedElem::regular(ring, one, cc.numerator() * h));
        }
        // the glued form restricts back to each entry
        for (int i = 0; i < static_cast<int>(cover->size()); ++i) {
            IndexTuple ti{i};
            DiffForm back = ring::restrict_form(alpha, cover->divisors()[static_cast<std::size_t>(i)]);
            DiffForm diff = back.minus(bottom.entry(ti));
            if (!diff.is_zero() && !hypercoh::form_in_relation_span(diff, 2))
                throw ComputationError("cech", "zigzag: glued form fails to restrict to an entry");
        }
    }

    // exactness witness: c = embed(alpha) + sum d_tot(chain)
    TotalCochain recomposed = embed_global(cover, alpha);
    for (const auto& corr : chain) recomposed = recomposed.plus(total_d(corr));
    TotalCochain defect = recomposed.minus(c);
    if (!defect.is_zero() && !total_zero_as_section(defect))
        throw ComputationError("cech", "zigzag: exactness witness failed");

    // global closedness modulo the ideal relations
    DiffForm dalpha = ring::exterior_d(alpha);
    if (!dalpha.is_zero() && !hypercoh::form_in_relation_span(dalpha, 2))
        throw ComputationError("cech", "zigzag: glued form is not closed");

    return {std::move(alpha), std::move(chain)};
}

}  // namespace edrc::cech
