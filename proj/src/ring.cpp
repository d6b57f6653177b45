#include "edrc/ring.hpp"

#include <algorithm>
#include <sstream>

namespace edrc::ring {

namespace {

void enumerate_monomials(std::size_t nvars, int cap, std::vector<Monomial>& out) {
    Monomial cur = Monomial::one(nvars);
    // iterative odometer over exponent vectors with total degree <= cap
    std::size_t i = 0;
    (void)i;
    std::vector<std::uint32_t> exp(nvars, 0);
    while (true) {
        out.push_back(Monomial{exp});
        // next vector in product order with degree cap
        std::size_t k = nvars;
        while (k > 0) {
            --k;
            exp[k] += 1;
            int deg = 0;
            for (auto e : exp) deg += static_cast<int>(e);
            if (deg <= cap) break;
            exp[k] = 0;
            if (k == 0) return;
        }
        if (nvars == 0) return;
    }
}

}  // namespace

MonomialTable::MonomialTable(std::size_t nvars, int cap) : cap_(cap < 0 ? -1 : cap) {
    if (cap_ < 0) return;
    enumerate_monomials(nvars, cap_, list_);
    std::sort(list_.begin(), list_.end(), [](const Monomial& a, const Monomial& b) {
        return poly::GradedLexLess{}(b, a);  // descending
    });
    for (std::size_t i = 0; i < list_.size(); ++i) rank_.emplace(list_[i], i);
}

std::optional<std::size_t> MonomialTable::index(const Monomial& m) const {
    auto it = rank_.find(m);
    if (it == rank_.end()) return std::nullopt;
    return it->second;
}

linsolve::SparseVec encode_poly(const MultiPoly& f, const MonomialTable& table) {
    linsolve::SparseVec v;
    for (const auto& [m, c] : f.terms()) {
        auto idx = table.index(m);
        if (!idx) throw ComputationError("ring", "polynomial exceeds monomial table cap");
        v.emplace_back(*idx, c);
    }
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return v;
}

MultiPoly decode_poly(const linsolve::SparseVec& v, const MonomialTable& table, const VarSetPtr& vars) {
    MultiPoly f(vars);
    for (const auto& [idx, c] : v) f.add_term(table.at(idx), c);
    return f;
}

AffineRing::AffineRing(VarSetPtr vars, std::vector<MultiPoly> gens, Strategy s, std::size_t gi,
                       std::size_t vi, int cap)
    : vars_(std::move(vars)), gens_(std::move(gens)), strategy_(s), monic_gen_(gi), monic_var_(vi),
      base_cap_(cap) {
    for (const auto& g : gens_)
        if (g.is_zero()) throw PreconditionError("AffineRing: zero ideal generator");
}

std::shared_ptr<const AffineRing> AffineRing::free_ring(VarSetPtr vars) {
    return std::shared_ptr<const AffineRing>(
        new AffineRing(std::move(vars), {}, Strategy::none, 0, 0, 0));
}

std::shared_ptr<const AffineRing> AffineRing::monic_quotient(VarSetPtr vars,
                                                             std::vector<MultiPoly> gens,
                                                             std::size_t gen_index,
                                                             std::size_t var_index) {
    if (gen_index >= gens.size()) throw PreconditionError("monic_quotient: bad generator index");
    if (!poly::is_monic_in(gens[gen_index], var_index))
        throw PreconditionError("monic_quotient: generator not monic in variable");
    return std::shared_ptr<const AffineRing>(new AffineRing(
        std::move(vars), std::move(gens), Strategy::monic_in_last, gen_index, var_index, 0));
}

std::shared_ptr<const AffineRing> AffineRing::capped_quotient(VarSetPtr vars,
                                                              std::vector<MultiPoly> gens,
                                                              int degree_cap) {
    if (gens.empty()) return free_ring(std::move(vars));
    return std::shared_ptr<const AffineRing>(new AffineRing(
        std::move(vars), std::move(gens), Strategy::linear_system, 0, 0, degree_cap));
}

std::shared_ptr<const AffineRing> AffineRing::auto_quotient(VarSetPtr vars,
                                                            std::vector<MultiPoly> gens,
                                                            int degree_cap) {
    if (gens.empty()) return free_ring(std::move(vars));
    if (gens.size() == 1) {
        for (std::size_t v = vars->size(); v-- > 0;) {
            MultiPoly g = gens[0];
            if (!poly::is_monic_in(g, v)) {
                // allow a scalar multiple that is monic
                int d = g.degree_in(v);
                if (d > 0) {
                    MultiPoly lead(g.vars());
                    for (const auto& [m, c] : g.terms())
                        if (static_cast<int>(m.exp[v]) == d) {
                            Monomial q = m;
                            q.exp[v] = 0;
                            lead.add_term(q, c);
                        }
                    if (lead.term_count() == 1 && lead.terms().begin()->first.is_one())
                        g = g * (1 / lead.terms().begin()->second);
                }
            }
            if (poly::is_monic_in(g, v)) return monic_quotient(std::move(vars), {g}, 0, v);
        }
    }
    return capped_quotient(std::move(vars), std::move(gens), degree_cap);
}

void AffineRing::grow_reduction(int c) const {
    if (c <= built_cap_) return;
    auto table = std::make_shared<MonomialTable>(vars_->size(), c);
    auto space = std::make_shared<linsolve::RowSpace>(table->size());
    // generator multiples in ascending degree order for determinism
    std::vector<MultiPoly> rows;
    for (const auto& g : gens_) {
        int room = c - g.total_degree();
        if (room < 0) continue;
        MonomialTable mons(vars_->size(), room);
        for (std::size_t i = 0; i < mons.size(); ++i)
            rows.push_back(g * MultiPoly::term(vars_, mons.at(i), Scalar(1)));
    }
    std::sort(rows.begin(), rows.end(), [](const MultiPoly& a, const MultiPoly& b) {
        if (a.total_degree() != b.total_degree()) return a.total_degree() < b.total_degree();
        return false;
    });
    for (const auto& r : rows) space->add(encode_poly(r, *table));
    table_ = std::move(table);
    reduction_ = std::move(space);
    built_cap_ = c;
}

MultiPoly AffineRing::normal_form(const MultiPoly& f) const {
    switch (strategy_) {
        case Strategy::none:
            if (gens_.empty()) return f;
            throw PreconditionError("normal_form: ring has no reduction strategy");
        case Strategy::monic_in_last:
            return poly::monic_division(f, gens_[monic_gen_], monic_var_).remainder;
        case Strategy::linear_system: {
            if (f.is_zero()) return f;
            std::lock_guard<std::mutex> lock(mu_);
            int c = std::max(base_cap_, f.total_degree());
            grow_reduction(c);
            return decode_poly(reduction_->reduce(encode_poly(f, *table_)), *table_, vars_);
        }
    }
    return f;
}

std::vector<Monomial> AffineRing::reduced_monomials(int c) const {
    std::vector<Monomial> out;
    if (c < 0) return out;
    if (strategy_ == Strategy::monic_in_last) {
        int dv = gens_[monic_gen_].degree_in(monic_var_);
        MonomialTable all(vars_->size(), c);
        for (std::size_t i = all.size(); i-- > 0;) {  // ascending graded lex
            const Monomial& m = all.at(i);
            if (static_cast<int>(m.exp[monic_var_]) < dv) out.push_back(m);
        }
        return out;
    }
    if (strategy_ == Strategy::linear_system) {
        std::lock_guard<std::mutex> lock(mu_);
        grow_reduction(std::max(base_cap_, c));
        for (std::size_t i = table_->size(); i-- > 0;) {
            const Monomial& m = table_->at(i);
            if (m.total_degree() > c) continue;
            if (reduction_->rows().count(i) == 0) out.push_back(m);
        }
        return out;
    }
    MonomialTable all(vars_->size(), c);
    for (std::size_t i = all.size(); i-- > 0;) out.push_back(all.at(i));
    return out;
}

std::optional<std::vector<MultiPoly>> AffineRing::ideal_membership(const MultiPoly& f,
                                                                   int cap) const {
    if (f.is_zero()) return std::vector<MultiPoly>(gens_.size(), MultiPoly(vars_));
    if (gens_.empty()) return std::nullopt;
    int work = std::max(cap, f.total_degree());
    MonomialTable rows_table(vars_->size(), work);
    // columns: (generator, cofactor monomial)
    struct Col {
        std::size_t gen;
        Monomial mon;
    };
    std::vector<Col> cols;
    for (std::size_t gi = 0; gi < gens_.size(); ++gi) {
        int room = work - gens_[gi].total_degree();
        if (room < 0) continue;
        MonomialTable mons(vars_->size(), room);
        for (std::size_t i = mons.size(); i-- > 0;) cols.push_back({gi, mons.at(i)});
    }
    linsolve::SparseMatrix m(rows_table.size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        MultiPoly prod = gens_[cols[j].gen] * MultiPoly::term(vars_, cols[j].mon, Scalar(1));
        for (const auto& [mon, c] : prod.terms()) m.set(*rows_table.index(mon), j, c);
    }
    std::vector<Scalar> rhs(rows_table.size(), Scalar(0));
    for (const auto& [mon, c] : f.terms()) rhs[*rows_table.index(mon)] = c;
    auto sol = linsolve::solve_particular(m, rhs);
    if (!sol) return std::nullopt;
    std::vector<MultiPoly> cof(gens_.size(), MultiPoly(vars_));
    for (std::size_t j = 0; j < cols.size(); ++j)
        if (!is_zero((*sol)[j])) cof[cols[j].gen].add_term(cols[j].mon, (*sol)[j]);
    return cof;
}

LocalizedElem LocalizedElem::make(AffineRingPtr ring, MultiPoly divisor, MultiPoly numerator,
                                  int order) {
    if (order < 0) throw PreconditionError("LocalizedElem: negative order");
    LocalizedElem e;
    e.ring_ = std::move(ring);
    e.divisor_ = std::move(divisor);
    e.num_ = e.ring_->normal_form(numerator);
    e.order_ = e.num_.is_zero() ? 0 : order;
    return e;
}

LocalizedElem LocalizedElem::at_order(int s) const {
    if (s < order_) throw PreconditionError("at_order: cannot lower order");
    if (s == order_) return *this;
    return make(ring_, divisor_, num_ * divisor_.pow(static_cast<unsigned>(s - order_)), s);
}

LocalizedElem LocalizedElem::plus(const LocalizedElem& o) const {
    int s = std::max(order_, o.order_);
    LocalizedElem a = at_order(s), b = o.at_order(s);
    return make(ring_, divisor_, a.num_ + b.num_, s);
}

LocalizedElem LocalizedElem::minus(const LocalizedElem& o) const { return plus(o.negated()); }

LocalizedElem LocalizedElem::negated() const {
    LocalizedElem e = *this;
    e.num_ = -e.num_;
    return e;
}

LocalizedElem LocalizedElem::times(const LocalizedElem& o) const {
    return make(ring_, divisor_, num_ * o.num_, order_ + o.order_);
}

LocalizedElem LocalizedElem::times_poly(const MultiPoly& f) const {
    return make(ring_, divisor_, num_ * f, order_);
}

LocalizedElem LocalizedElem::times_scalar(const Scalar& c) const {
    if (edrc::is_zero(c)) return make(ring_, divisor_, MultiPoly(num_.vars()), 0);
    LocalizedElem e = *this;
    e.num_ = e.num_ * c;
    return e;
}

int LocalizedElem::degree() const {
    if (num_.is_zero()) return poly::kDegZero;
    int dg = divisor_.total_degree();
    return num_.total_degree() - order_ * (dg == poly::kDegZero ? 0 : dg);
}

LocalizedElem LocalizedElem::reduce_order() const {
    LocalizedElem cur = *this;
    if (cur.num_.is_zero()) {
        cur.order_ = 0;
        return cur;
    }
    while (cur.order_ > 0) {
        // numerator = divisor * u + (ideal part), cofactor degrees bounded
        auto q = poly::exact_divide(cur.num_, cur.divisor_);
        if (q) {
            cur = make(cur.ring_, cur.divisor_, *q, cur.order_ - 1);
            continue;
        }
        if (cur.ring_->trivial_ideal()) break;
        int slack = cur.divisor_.total_degree();
        for (const auto& g : cur.ring_->generators()) slack = std::max(slack, g.total_degree());
        int cap = cur.num_.total_degree() + slack + 1;
        std::vector<MultiPoly> gens = cur.ring_->generators();
        gens.insert(gens.begin(), cur.divisor_);
        auto scratch = AffineRing::capped_quotient(cur.ring_->vars(), gens, cap);
        auto cof = scratch->ideal_membership(cur.num_, cap);
        if (!cof) break;
        cur = make(cur.ring_, cur.divisor_, (*cof)[0], cur.order_ - 1);
    }
    return cur;
}

std::string LocalizedElem::str() const {
    std::ostringstream os;
    os << "(" << num_.str() << ")";
    if (order_ > 0) os << "/(" << divisor_.str() << ")^" << order_;
    return os.str();
}

bool loc_equal(const LocalizedElem& a, const LocalizedElem& b) {
    if (a.ring() != b.ring() && !(a.ring()->vars() == b.ring()->vars() ||
                                  *a.ring()->vars() == *b.ring()->vars()))
        throw PreconditionError("loc_equal: ring mismatch");
    if (!(a.divisor() == b.divisor())) throw PreconditionError("loc_equal: divisor mismatch");
    int s = std::max(a.order(), b.order());
    LocalizedElem x = a.at_order(s), y = b.at_order(s);
    return a.ring()->is_zero_mod(x.numerator() - y.numerator());
}

int merge_sign(const IndexTuple& a, const IndexTuple& b, IndexTuple& merged) {
    merged.clear();
    merged.reserve(a.size() + b.size());
    int inversions = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i] < b[j])) {
            merged.push_back(a[i++]);
        } else if (i == a.size() || b[j] < a[i]) {
            // b[j] jumps over the remaining entries of a
            inversions += static_cast<int>(a.size() - i);
            merged.push_back(b[j++]);
        } else {
            return 0;  // repeated index
        }
    }
    return (inversions % 2 == 0) ? 1 : -1;
}

int insert_sign(const IndexTuple& t, int idx, IndexTuple& out) {
    IndexTuple single{idx};
    return merge_sign(single, t, out) * 1;
}

DiffForm::DiffForm(AffineRingPtr ring, MultiPoly divisor, int p)
    : ring_(std::move(ring)), divisor_(std::move(divisor)), p_(p) {
    if (p_ < 0) throw PreconditionError("DiffForm: negative degree");
}

void DiffForm::add_term(const IndexTuple& idx, const LocalizedElem& c) {
    if (static_cast<int>(idx.size()) != p_) throw PreconditionError("DiffForm: tuple arity mismatch");
    for (std::size_t i = 0; i + 1 < idx.size(); ++i)
        if (idx[i] >= idx[i + 1]) throw PreconditionError("DiffForm: tuple not strictly increasing");
    if (!idx.empty() && idx.back() >= static_cast<int>(ring_->nvars()))
        throw PreconditionError("DiffForm: index out of range");
    if (c.is_zero()) return;
    auto it = coeffs_.find(idx);
    if (it == coeffs_.end()) {
        coeffs_.emplace(idx, c);
    } else {
        LocalizedElem sum = it->second.plus(c);
        if (sum.is_zero())
            coeffs_.erase(it);
        else
            it->second = std::move(sum);
    }
}

LocalizedElem DiffForm::coefficient(const IndexTuple& idx) const {
    auto it = coeffs_.find(idx);
    if (it != coeffs_.end()) return it->second;
    return LocalizedElem::make(ring_, divisor_, MultiPoly(ring_->vars()), 0);
}

DiffForm DiffForm::plus(const DiffForm& o) const {
    if (p_ != o.p_) throw PreconditionError("DiffForm::plus: degree mismatch");
    DiffForm r = *this;
    for (const auto& [idx, c] : o.coeffs_) r.add_term(idx, c);
    return r;
}

DiffForm DiffForm::minus(const DiffForm& o) const { return plus(o.negated()); }

DiffForm DiffForm::negated() const {
    DiffForm r = *this;
    for (auto& [idx, c] : r.coeffs_) c = c.negated();
    return r;
}

DiffForm DiffForm::times_scalar(const Scalar& c) const {
    DiffForm r(ring_, divisor_, p_);
    if (edrc::is_zero(c)) return r;
    for (const auto& [idx, v] : coeffs_) r.coeffs_.emplace(idx, v.times_scalar(c));
    return r;
}

DiffForm DiffForm::times_elem(const LocalizedElem& c) const {
    DiffForm r(ring_, divisor_, p_);
    if (c.is_zero()) return r;
    for (const auto& [idx, v] : coeffs_) {
        LocalizedElem prod = v.times(c);
        if (!prod.is_zero()) r.coeffs_.emplace(idx, std::move(prod));
    }
    return r;
}

int DiffForm::max_order() const {
    int s = 0;
    for (const auto& [idx, c] : coeffs_) s = std::max(s, c.order());
    return s;
}

std::string DiffForm::str() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [idx, c] : coeffs_) {
        if (!first) os << " + ";
        first = false;
        os << c.str();
        for (auto i : idx) os << (" d" + ring_->vars()->name(static_cast<std::size_t>(i)));
    }
    return os.str();
}

DiffForm exterior_d(const DiffForm& w) {
    const auto& ring = w.ring();
    DiffForm out(ring, w.divisor(), w.degree_p() + 1);
    const MultiPoly& g = w.divisor();
    for (const auto& [idx, c] : w.coefficients()) {
        for (std::size_t v = 0; v < ring->nvars(); ++v) {
            LocalizedElem dc;
            if (c.order() == 0) {
                dc = LocalizedElem::make(ring, g, poly::partial_derivative(c.numerator(), v), 0);
            } else {
                // quotient rule: d(a/g^s) = (g da - s a dg) / g^{s+1}
                MultiPoly num = g * poly::partial_derivative(c.numerator(), v) -
                                c.numerator() * poly::partial_derivative(g, v) *
                                    Scalar(static_cast<long>(c.order()));
                dc = LocalizedElem::make(ring, g, num, c.order() + 1);
            }
            if (dc.is_zero()) continue;
            IndexTuple merged;
            int sign = insert_sign(idx, static_cast<int>(v), merged);
            if (sign == 0) continue;
            out.add_term(merged, sign < 0 ? dc.negated() : dc);
        }
    }
    return out;
}

DiffForm wedge(const DiffForm& a, const DiffForm& b) {
    if (a.ring() != b.ring() || !(a.divisor() == b.divisor()))
        throw PreconditionError("wedge: ring or divisor mismatch");
    DiffForm out(a.ring(), a.divisor(), a.degree_p() + b.degree_p());
    for (const auto& [ia, ca] : a.coefficients())
        for (const auto& [ib, cb] : b.coefficients()) {
            IndexTuple merged;
            int sign = merge_sign(ia, ib, merged);
            if (sign == 0) continue;
            LocalizedElem c = ca.times(cb);
            out.add_term(merged, sign < 0 ? c.negated() : c);
        }
    return out;
}

DiffForm restrict_form(const DiffForm& w, const MultiPoly& extra_divisor) {
    if (extra_divisor.is_one()) return w;
    DiffForm out(w.ring(), w.divisor() * extra_divisor, w.degree_p());
    for (const auto& [idx, c] : w.coefficients()) {
        MultiPoly num = c.numerator() * extra_divisor.pow(static_cast<unsigned>(c.order()));
        out.add_term(idx, LocalizedElem::make(w.ring(), out.divisor(), num, c.order()));
    }
    return out;
}

FiltrationStamp filtration_stamp(const DiffForm& w) {
    FiltrationStamp st{0, 0};
    bool any = false;
    int dg = w.divisor().total_degree();
    if (dg == poly::kDegZero) dg = 0;
    for (const auto& [idx, c] : w.coefficients()) {
        if (c.is_zero()) continue;
        any = true;
        st.order_s = std::max(st.order_s, c.order());
        st.degree_d =
            std::max(st.degree_d, c.numerator().total_degree() - c.order() * dg + w.degree_p());
    }
    if (!any) return {0, 0};
    return st;
}

bool equal_coefficientwise(const DiffForm& a, const DiffForm& b) {
    if (a.degree_p() != b.degree_p()) return false;
    DiffForm diff = a.minus(b);
    for (const auto& [idx, c] : diff.coefficients()) {
        LocalizedElem r = c;
        if (!a.ring()->is_zero_mod(r.numerator())) return false;
    }
    return true;
}

DiffForm d_of_poly(const AffineRingPtr& ring, const MultiPoly& divisor, const MultiPoly& f) {
    DiffForm out(ring, divisor, 1);
    for (std::size_t v = 0; v < ring->nvars(); ++v) {
        MultiPoly df = poly::partial_derivative(f, v);
        if (df.is_zero()) continue;
        out.add_term({static_cast<int>(v)}, LocalizedElem::make(ring, divisor, df, 0));
    }
    return out;
}

}  // namespace edrc::ring
