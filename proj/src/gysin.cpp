#include "edrc/gysin.hpp"

#include <algorithm>
#include <sstream>

#include "edrc/slices.hpp"

namespace edrc::gysin {

using poly::Monomial;
using ring::IndexTuple;
using ring::MonomialTable;

namespace {

std::string fresh_name(const std::vector<std::string>& taken, std::string base) {
    std::string name = base;
    while (std::find(taken.begin(), taken.end(), name) != taken.end()) name += "_";
    return name;
}

}  // namespace

GysinSetup::GysinSetup(const MultiPoly& f, const MultiPoly& g) {
    orig_vars_ = f.vars();
    n_ = static_cast<int>(orig_vars_->size());
    if (n_ < 1) throw PreconditionError("GysinSetup: need at least one variable");
    f_orig_ = f;
    g_orig_ = g;
    if (f_orig_.is_zero() || g_orig_.is_zero())
        throw PreconditionError("GysinSetup: f and g must be nonzero");
    // allow a scalar-normalized monic representative
    std::size_t xn = static_cast<std::size_t>(n_ - 1);
    if (!poly::is_monic_in(f_orig_, xn)) {
        int dv = f_orig_.degree_in(xn);
        MultiPoly lead(orig_vars_);
        if (dv > 0)
            for (const auto& [m, c] : f_orig_.terms())
                if (static_cast<int>(m.exp[xn]) == dv) {
                    Monomial q = m;
                    q.exp[xn] = 0;
                    lead.add_term(q, c);
                }
        if (lead.term_count() == 1 && lead.terms().begin()->first.is_one())
            f_orig_ = f_orig_ * (1 / lead.terms().begin()->second);
    }
    if (!poly::is_monic_in(f_orig_, xn))
        throw PreconditionError("GysinSetup: f not monic in the last variable");
    MultiPoly dfn = poly::partial_derivative(f_orig_, xn);
    if (dfn.is_zero()) throw PreconditionError("GysinSetup: df/dX_n vanishes");
    auto h = poly::exact_divide(g_orig_, dfn);
    if (!h) throw PreconditionError("GysinSetup: df/dX_n does not divide g");
    h_orig_ = *h;

    std::vector<std::string> names;
    names.push_back(fresh_name(orig_vars_->names(), "X0"));
    for (const auto& nm : orig_vars_->names()) names.push_back(nm);
    amb_vars_ = poly::make_vars(names);
    amb_ring_ = ring::AffineRing::free_ring(amb_vars_);
    b_ring_ = ring::AffineRing::monic_quotient(orig_vars_, {f_orig_}, 0, xn);

    f1_ = to_ambient(f_orig_);
    g_amb_ = to_ambient(g_orig_);
    h_amb_ = to_ambient(h_orig_);
    f0_ = g_amb_ * MultiPoly::variable(amb_vars_, 0) - MultiPoly::constant(amb_vars_, 1);
    d0_ = f0_.total_degree();
    d1_ = f1_.total_degree();
    gamma_ = 2 * d0_ - d1_ + 1;
    if (gamma_ < 1) throw PreconditionError("GysinSetup: degree data inconsistent");
    working_gamma_ = std::max(gamma_, d0_ + std::max(h_orig_.total_degree(), 0) + 1);
    generic_position_ = f_orig_.degree_in(xn) == d1_;

    // dX_n = -(h/g) * sum_{i<n} df/dX_i dX_i over B
    for (int i = 0; i + 1 < n_; ++i) {
        MultiPoly dfi = poly::partial_derivative(f_orig_, static_cast<std::size_t>(i));
        dxn_elim_.push_back(
            LocalizedElem::make(b_ring_, g_orig_, -(h_orig_ * dfi), 1));
    }

    y_.clear();
    series_.assign(static_cast<std::size_t>(n_) + 1, {});
    for (int i = 0; i <= n_; ++i) {
        // base representative: the canonical B-side image of X_i
        MultiPoly xi = MultiPoly::variable(amb_vars_, static_cast<std::size_t>(i));
        MultiPoly base = b_to_ambient(project_to_b(xi));
        y_.push_back(base);
        if (!base.is_zero()) series_[static_cast<std::size_t>(i)].emplace(std::make_pair(0, 0), base);
    }
}

MultiPoly GysinSetup::to_ambient(const MultiPoly& f) const {
    MultiPoly out(amb_vars_);
    for (const auto& [m, c] : f.terms()) {
        Monomial shifted = Monomial::one(static_cast<std::size_t>(n_) + 1);
        for (int i = 0; i < n_; ++i) shifted.exp[static_cast<std::size_t>(i) + 1] = m.exp[i];
        out.add_term(shifted, c);
    }
    return out;
}

LocalizedElem GysinSetup::project_to_b(const MultiPoly& a) const {
    // a = sum_k c_k(X1..Xn) X0^k  ->  sum_k c_k / g^k
    int sigma = a.degree_in(0);
    if (sigma == poly::kDegZero) sigma = 0;
    MultiPoly num(orig_vars_);
    for (const auto& [m, c] : a.terms()) {
        Monomial lower = Monomial::one(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) lower.exp[i] = m.exp[static_cast<std::size_t>(i) + 1];
        int k = static_cast<int>(m.exp[0]);
        MultiPoly t = MultiPoly::term(orig_vars_, lower, c) *
                      g_orig_.pow(static_cast<unsigned>(sigma - k));
        num = num + t;
    }
    return LocalizedElem::make(b_ring_, g_orig_, num, sigma).reduce_order();
}

MultiPoly GysinSetup::b_to_ambient(const LocalizedElem& b) const {
    return to_ambient(b.numerator()) *
           MultiPoly::variable(amb_vars_, 0).pow(static_cast<unsigned>(b.order()));
}

int GysinSetup::level() const {
    std::lock_guard<std::mutex> lock(mu_);
    return level_;
}

std::vector<MultiPoly> GysinSetup::lift_coordinates() const {
    std::lock_guard<std::mutex> lock(mu_);
    return y_;
}

std::map<std::pair<int, int>, MultiPoly> GysinSetup::lift_series(int var_i) const {
    std::lock_guard<std::mutex> lock(mu_);
    return series_[static_cast<std::size_t>(var_i)];
}

int GysinSetup::max_layer_degree() const {
    std::lock_guard<std::mutex> lock(mu_);
    return max_layer_degree_;
}

void GysinSetup::ensure_level(int N) const {
    std::lock_guard<std::mutex> lock(mu_);
    while (level_ < N) lift_step();
}

namespace {

// truncated series in T0, T1 with ambient polynomial coefficients
using PolySeries = std::map<std::pair<int, int>, MultiPoly>;

void series_add_into(PolySeries& acc, int mu, int nu, const MultiPoly& v) {
    if (v.is_zero()) return;
    auto it = acc.find({mu, nu});
    if (it == acc.end()) {
        acc.emplace(std::make_pair(mu, nu), v);
    } else {
        it->second = it->second + v;
        if (it->second.is_zero()) acc.erase(it);
    }
}

PolySeries series_mul(const PolySeries& a, const PolySeries& b, int total_cap) {
    PolySeries out;
    for (const auto& [ka, va] : a)
        for (const auto& [kb, vb] : b) {
            int mu = ka.first + kb.first, nu = ka.second + kb.second;
            if (mu + nu > total_cap) continue;
            series_add_into(out, mu, nu, va * vb);
        }
    return out;
}

// exact composition f(series...) collected by powers of T0, T1, levels <= cap
PolySeries series_compose(const poly::VarSetPtr& vars, const MultiPoly& f,
                          const std::vector<PolySeries>& tables, int total_cap) {
    PolySeries acc;
    for (const auto& [mon, c] : f.terms()) {
        PolySeries term;
        term.emplace(std::make_pair(0, 0), MultiPoly::constant(vars, c));
        for (std::size_t i = 0; i < mon.exp.size(); ++i)
            for (std::uint32_t e = 0; e < mon.exp[i]; ++e)
                term = series_mul(term, tables[i], total_cap);
        for (const auto& [k, v] : term) series_add_into(acc, k.first, k.second, v);
    }
    return acc;
}

MultiPoly series_level_value(const GysinSetup& s, const PolySeries& c, int level) {
    MultiPoly t(s.ambient_vars());
    for (const auto& [k, v] : c)
        if (k.first + k.second == level)
            t = t + v * s.f0().pow(static_cast<unsigned>(k.first)) *
                    s.f1().pow(static_cast<unsigned>(k.second));
    return t;
}

std::map<std::pair<int, int>, MultiPoly> ascending_decompose(const MultiPoly& t, int N,
                                                             const GysinSetup& s, int tight) {
    int room = std::max(0, t.total_degree() - N * std::min(s.d0(), s.d1()));
    int cap = std::max(tight, 0);
    while (true) {
        try {
            return i_decompose(t, N, s, cap);
        } catch (const ComputationError&) {
            if (cap > room)
                throw ComputationError("gysin", "decomposition failed at level " +
                                                    std::to_string(N));
            cap = cap < 4 ? cap + 1 : cap + std::max(2, cap / 2);
        }
    }
}

// push every level below target up, one level at a time; afterwards the series
// has no support below target
void push_series_to(const GysinSetup& s, PolySeries& c, int target) {
    for (int l = 0; l < target; ++l) {
        MultiPoly t = series_level_value(s, c, l);
        for (auto it = c.begin(); it != c.end();)
            it = (it->first.first + it->first.second == l) ? c.erase(it) : std::next(it);
        if (t.is_zero()) continue;
        // covering the top-degree terms already forces this cofactor degree
        int tight = std::max(0, t.total_degree() - (l + 1) * std::max(s.d0(), s.d1()));
        auto table = ascending_decompose(t, l + 1, s, tight);
        for (const auto& [k, v] : table) series_add_into(c, k.first, k.second, v);
    }
}

}  // namespace

void GysinSetup::lift_step() const {
    const int N = level_;
    // exact defect series of f0(Y) and f1(Y) through the layer tables, with
    // everything below level N pushed up; the level-N coefficients then give
    // exact decompositions without ever expanding f_j(Y) as a polynomial
    PolySeries comp0 = series_compose(amb_vars_, f0_, series_, N);
    PolySeries comp1 = series_compose(amb_vars_, f1_, series_, N);
    push_series_to(*this, comp0, N);
    push_series_to(*this, comp1, N);
    std::map<std::pair<int, int>, MultiPoly> p_tab, q_tab;
    for (const auto& [k, v] : comp0)
        if (k.first + k.second == N) p_tab.emplace(k, v);
    for (const auto& [k, v] : comp1)
        if (k.first + k.second == N) q_tab.emplace(k, v);

    // closed-form layer; zero for the middle variables
    MultiPoly x0 = MultiPoly::variable(amb_vars_, 0);
    MultiPoly df0_dxn = poly::partial_derivative(f0_, static_cast<std::size_t>(n_));
    std::map<std::pair<int, int>, MultiPoly> layer_n, layer_0;
    for (int mu = 0; mu <= N; ++mu) {
        std::pair<int, int> key{mu, N - mu};
        MultiPoly p = p_tab.count(key) ? p_tab[key] : MultiPoly(amb_vars_);
        MultiPoly q = q_tab.count(key) ? q_tab[key] : MultiPoly(amb_vars_);
        MultiPoly an = -(q * h_amb_ * x0);
        MultiPoly a0 = -(x0 * (p + df0_dxn * an));
        // lift-layer degree cap
        for (const MultiPoly* a : {&an, &a0}) {
            if (generic_position_ && !a->is_zero() && a->total_degree() > working_gamma_)
                throw ComputationError("gysin", "lift layer exceeds the degree cap");
        }
        // the layer solves both defect equations modulo I: exact check in B
        MultiPoly check1 = p + g_amb_ * a0 + df0_dxn * an;
        MultiPoly df1_dxn = poly::partial_derivative(f1_, static_cast<std::size_t>(n_));
        MultiPoly check2 = q + df1_dxn * an;
        if (!project_to_b(check1).is_zero() || !project_to_b(check2).is_zero())
            throw ComputationError("gysin", "lift layer fails the defect equations");
        if (!an.is_zero()) layer_n.emplace(key, an);
        if (!a0.is_zero()) layer_0.emplace(key, a0);
    }

    auto apply_layer = [&](int var, const std::map<std::pair<int, int>, MultiPoly>& layer) {
        for (const auto& [key, a] : layer) {
            max_layer_degree_ = std::max(max_layer_degree_, a.total_degree());
            y_[static_cast<std::size_t>(var)] =
                y_[static_cast<std::size_t>(var)] +
                a * f0_.pow(static_cast<unsigned>(key.first)) *
                    f1_.pow(static_cast<unsigned>(key.second));
            series_[static_cast<std::size_t>(var)].emplace(key, a);
        }
    };
    apply_layer(0, layer_0);
    apply_layer(n_, layer_n);
    ++level_;
}

std::map<std::pair<int, int>, MultiPoly> i_decompose(const MultiPoly& t, int N,
                                                     const GysinSetup& setup, int degree_cap) {
    std::map<std::pair<int, int>, MultiPoly> out;
    if (N == 0) {
        out.emplace(std::make_pair(0, 0), t);
        return out;
    }
    const auto& vars = setup.ambient_vars();
    if (t.is_zero()) {
        for (int mu = 0; mu <= N; ++mu) out.emplace(std::make_pair(mu, N - mu), MultiPoly(vars));
        return out;
    }
    if (degree_cap < 0) throw PreconditionError("i_decompose: negative cap");

    // products f0^mu f1^nu, mu+nu = N
    std::vector<MultiPoly> products;
    std::vector<std::pair<int, int>> keys;
    for (int mu = 0; mu <= N; ++mu) {
        keys.emplace_back(mu, N - mu);
        products.push_back(setup.f0().pow(static_cast<unsigned>(mu)) *
                           setup.f1().pow(static_cast<unsigned>(N - mu)));
    }
    int max_deg = t.total_degree();
    for (std::size_t k = 0; k < keys.size(); ++k)
        max_deg = std::max(max_deg, degree_cap + products[k].total_degree());

    MonomialTable rows(vars->size(), max_deg);
    struct Col {
        std::size_t pair;
        Monomial mon;
    };
    std::vector<Col> cols;
    MonomialTable unknowns(vars->size(), degree_cap);
    for (std::size_t k = 0; k < keys.size(); ++k)
        for (std::size_t u = unknowns.size(); u-- > 0;) cols.push_back({k, unknowns.at(u)});

    linsolve::SparseMatrix m(rows.size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        MultiPoly prod = products[cols[j].pair] * MultiPoly::term(vars, cols[j].mon, Scalar(1));
        for (const auto& [mon, c] : prod.terms()) m.set(*rows.index(mon), j, c);
    }
    std::vector<Scalar> rhs(rows.size(), Scalar(0));
    for (const auto& [mon, c] : t.terms()) rhs[*rows.index(mon)] = c;
    auto sol = linsolve::solve_particular(m, rhs);
    if (!sol)
        throw ComputationError("gysin", "i_decompose: not in I^" + std::to_string(N) +
                                            " at degree cap " + std::to_string(degree_cap));
    for (std::size_t k = 0; k < keys.size(); ++k) out.emplace(keys[k], MultiPoly(vars));
    for (std::size_t j = 0; j < cols.size(); ++j)
        if (!is_zero((*sol)[j])) out[keys[cols[j].pair]].add_term(cols[j].mon, (*sol)[j]);
    // exact recomposition check
    MultiPoly total(vars);
    for (std::size_t k = 0; k < keys.size(); ++k) total = total + out[keys[k]] * products[k];
    if (!(total == t)) throw ComputationError("gysin", "i_decompose: recomposition failed");
    return out;
}

LocalizedElem BiSeries::at(int mu, int nu, const GysinSetup& setup) const {
    auto it = coeff.find({mu, nu});
    if (it != coeff.end()) return it->second;
    return LocalizedElem::make(setup.b_ring(), setup.g_orig(), MultiPoly(setup.b_ring()->vars()), 0);
}

BiSeries psihat_inverse(const GysinSetupPtr& setup, const MultiPoly& a_ambient, int m0, int m1) {
    const int K = m0 + m1 + 1;
    setup->ensure_level(K);
    BiSeries out;
    out.m0 = m0;
    out.m1 = m1;
    const int dega = std::max(a_ambient.total_degree(), 0);
    std::vector<PolySeries> tables;
    for (int i = 0; i <= setup->n(); ++i) tables.push_back(setup->lift_series(i));

    // remainder kept as an exact series; every subtraction happens level-wise
    PolySeries rho;
    series_add_into(rho, 0, 0, a_ambient);
    for (int k = 0; k < K && !rho.empty(); ++k) {
        push_series_to(*setup, rho, k);
        std::vector<std::pair<std::pair<int, int>, MultiPoly>> level;
        for (const auto& [key, d] : rho)
            if (key.first + key.second == k && !d.is_zero()) level.emplace_back(key, d);
        for (const auto& [key, d] : level) {
            LocalizedElem b = setup->project_to_b(d);
            if (b.is_zero()) continue;
            BigInt bound =
                big_pow(BigInt(setup->working_gamma()), static_cast<unsigned long>(k)) * dega;
            int rep_deg = std::min(d.total_degree(), b.numerator().total_degree() + b.order());
            if (setup->generic_position() && BigInt(rep_deg) > bound)
                throw ComputationError("gysin", "psihat_inverse: coefficient degree stamp exceeds"
                                                " the gamma^(mu+nu) bound");
            if (key.first <= m0 && key.second <= m1) out.coeff.emplace(key, b);
            // subtract the psi(b)-series shifted by T0^mu T1^nu
            PolySeries correction =
                series_compose(setup->ambient_vars(), setup->b_to_ambient(b), tables, K - 1 - k);
            for (const auto& [ck, cv] : correction)
                series_add_into(rho, ck.first + key.first, ck.second + key.second, -cv);
        }
    }
    // reconstruction check: the remainder must sit in I^K; the push either
    // clears every lower level or reports the inconsistency
    push_series_to(*setup, rho, K);
    for (const auto& [key, v] : rho)
        if (key.first + key.second < K && !v.is_zero())
            throw ComputationError("gysin", "psihat_inverse: truncation insufficiency");
    return out;
}

bool in_denominator_subspace(const DiffForm& w, const GysinSetup& setup, int degree_slack) {
    if (w.is_zero()) return true;
    auto stamp = ring::filtration_stamp(w);
    int s = std::max(stamp.order_s, 1);
    hypercoh::FormSlice slice(setup.ambient_ring(), setup.divisor_product(), w.degree_p(), s,
                              stamp.degree_d + degree_slack);
    linsolve::RowSpace span(slice.dim());
    for (auto& gen : slice.multiple_generators(setup.f1().pow(static_cast<unsigned>(s))))
        span.add(std::move(gen));
    for (auto& gen : slice.multiple_generators(setup.f0().pow(static_cast<unsigned>(s))))
        span.add(std::move(gen));
    return span.contains(slice.encode(w));
}

DiffForm zero_b_form(const GysinSetup& setup, int p) {
    return DiffForm(setup.b_ring(), setup.g_orig(), p);
}

DiffForm reduce_b_form(const GysinSetup& setup, const DiffForm& w) {
    const int last = setup.n() - 1;  // B-ring index of X_n
    DiffForm out = zero_b_form(setup, w.degree_p());
    for (const auto& [idx, c] : w.coefficients()) {
        if (std::find(idx.begin(), idx.end(), last) == idx.end()) {
            out.add_term(idx, c);
            continue;
        }
        // dX_n is the largest index, so it sits at the back: dX_I = dX_{I'} ^ dX_n
        IndexTuple head(idx.begin(), idx.end() - 1);
        const auto& elim = setup.dxn_elimination();
        for (int j = 0; j + 1 < setup.n(); ++j) {
            if (elim[static_cast<std::size_t>(j)].is_zero()) continue;
            IndexTuple merged;
            int sign = ring::merge_sign(head, {j}, merged);
            if (sign == 0) continue;
            LocalizedElem coeff = c.times(elim[static_cast<std::size_t>(j)]);
            out.add_term(merged, sign < 0 ? coeff.negated() : coeff);
        }
    }
    return out;
}

DiffForm b_exterior_d(const GysinSetup& setup, const DiffForm& w) {
    return reduce_b_form(setup, ring::exterior_d(w));
}

bool b_form_is_zero(const GysinSetup& setup, const DiffForm& w) {
    (void)setup;
    return w.is_zero();
}

QuotientForm lambda_map(const GysinSetupPtr& setup, const DiffForm& w) {
    const auto& amb = setup->ambient_ring();
    MultiPoly div = setup->divisor_product();
    // df0 ^ df1 / (f0 f1), one order in each factor
    DiffForm df0df1(amb, div, 2);
    for (int i = 0; i <= setup->n(); ++i)
        for (int j = 0; j <= setup->n(); ++j) {
            if (i >= j) continue;
            MultiPoly num = poly::partial_derivative(setup->f0(), static_cast<std::size_t>(i)) *
                                poly::partial_derivative(setup->f1(), static_cast<std::size_t>(j)) -
                            poly::partial_derivative(setup->f0(), static_cast<std::size_t>(j)) *
                                poly::partial_derivative(setup->f1(), static_cast<std::size_t>(i));
            if (num.is_zero()) continue;
            df0df1.add_term({i, j}, LocalizedElem::make(amb, div, num, 1));
        }

    // lift the B-form coefficient-wise: numerator * X0^order, indices shifted by one
    DiffForm lift(amb, div, w.degree_p());
    for (const auto& [idx, c] : w.coefficients()) {
        IndexTuple shifted;
        for (auto i : idx) shifted.push_back(i + 1);
        lift.add_term(shifted, LocalizedElem::make(amb, div, setup->b_to_ambient(c), 0));
    }
    return QuotientForm{ring::wedge(df0df1, lift)};
}

namespace {

// Laurent series with reduced B-form coefficients; sector bit0 = dT0, bit1 = dT1.
// Indices are stored relative to the numerator window: global exponent = index - s.
struct FormSeries {
    int window = 0;  // indices 0..window per direction
    std::map<std::tuple<int, int, int>, DiffForm> terms;

    void add(const GysinSetup& setup, int mu, int nu, int sector, const DiffForm& f) {
        if (f.is_zero()) return;
        auto key = std::make_tuple(mu, nu, sector);
        auto it = terms.find(key);
        if (it == terms.end()) {
            terms.emplace(key, f);
        } else {
            DiffForm sum = it->second.plus(f);
            if (sum.is_zero())
                terms.erase(it);
            else
                it->second = std::move(sum);
        }
    }
};

int sector_size(int sector) { return (sector & 1) + ((sector >> 1) & 1); }

FormSeries series_wedge(const GysinSetup& setup, const FormSeries& a, const FormSeries& b) {
    FormSeries out;
    out.window = std::min(a.window, b.window);
    for (const auto& [ka, fa] : a.terms)
        for (const auto& [kb, fb] : b.terms) {
            auto [mua, nua, seca] = ka;
            auto [mub, nub, secb] = kb;
            if (seca & secb) continue;  // repeated dT
            int mu = mua + mub, nu = nua + nub;
            if (mu > out.window || nu > out.window) continue;
            int sign = 1;
            // move the second B-form left past the first sector's dT symbols
            if (sector_size(seca) % 2 == 1 && fb.degree_p() % 2 == 1) sign = -sign;
            // dT1 ^ dT0 -> -dT0 ^ dT1
            if ((seca & 2) && (secb & 1)) sign = -sign;
            DiffForm prod = ring::wedge(fa, fb);
            if (prod.is_zero()) continue;
            out.add(setup, mu, nu, seca | secb, sign < 0 ? prod.negated() : prod);
        }
    return out;
}

// series of the universally finite differential of Xi = psi-hat^{-1}(X_i)
FormSeries dxi_series(const GysinSetup& setup, const BiSeries& xi, int window) {
    FormSeries out;
    out.window = window;
    for (int mu = 0; mu <= window; ++mu)
        for (int nu = 0; nu <= window; ++nu) {
            LocalizedElem b = xi.at(mu, nu, setup);
            if (!b.is_zero()) {
                DiffForm db(setup.b_ring(), setup.g_orig(), 0);
                db.add_term({}, b);
                DiffForm d1 = b_exterior_d(setup, db);
                out.add(setup, mu, nu, 0, d1);
            }
            LocalizedElem bt0 = xi.at(mu + 1, nu, setup);
            if (!bt0.is_zero()) {
                DiffForm c = zero_b_form(setup, 0);
                c.add_term({}, bt0.times_scalar(Scalar(mu + 1)));
                out.add(setup, mu, nu, 1, c);
            }
            LocalizedElem bt1 = xi.at(mu, nu + 1, setup);
            if (!bt1.is_zero()) {
                DiffForm c = zero_b_form(setup, 0);
                c.add_term({}, bt1.times_scalar(Scalar(nu + 1)));
                out.add(setup, mu, nu, 2, c);
            }
        }
    return out;
}

}  // namespace

ResidueResult residue(const GysinSetupPtr& setup, const QuotientForm& w, bool require_closed) {
    const DiffForm& rep = w.rep;
    const int p = rep.degree_p();
    if (p < 2) throw PreconditionError("residue: form degree must be at least 2");
    int s = std::max(rep.max_order(), 1);

    // closedness in the quotient complex
    bool closed = true;
    DiffForm drep = ring::exterior_d(rep);
    if (!drep.is_zero() && !in_denominator_subspace(drep, *setup, 2)) {
        if (require_closed)
            throw ComputationError("gysin", "residue: form is not closed in the quotient complex");
        closed = false;
    }

    // numerator window (s-1, s-1); the Xi series carry one guard layer beyond
    // what their differentials need
    const int window = s - 1;
    setup->ensure_level(2 * s + 1);

    std::vector<FormSeries> dxi;
    std::vector<BiSeries> xi;
    for (int i = 0; i <= setup->n(); ++i) {
        xi.push_back(psihat_inverse(setup, MultiPoly::variable(setup->ambient_vars(),
                                                               static_cast<std::size_t>(i)),
                                    s, s));
        dxi.push_back(dxi_series(*setup, xi.back(), window));
    }

    int deg_alpha = 0;
    FormSeries acc;
    acc.window = window;
    for (const auto& [idx, c] : rep.coefficients()) {
        MultiPoly num = c.at_order(s).numerator();
        if (num.is_zero()) continue;
        deg_alpha = std::max(deg_alpha, num.total_degree() + p);
        BiSeries bs = psihat_inverse(setup, num, window, window);
        FormSeries term;
        term.window = window;
        for (const auto& [key, b] : bs.coeff) {
            DiffForm f = zero_b_form(*setup, 0);
            f.add_term({}, b);
            term.add(*setup, key.first, key.second, 0, f);
        }
        for (auto i : idx) term = series_wedge(*setup, term, dxi[static_cast<std::size_t>(i)]);
        for (const auto& [key, f] : term.terms) acc.add(*setup, std::get<0>(key), std::get<1>(key),
                                                        std::get<2>(key), f);
    }

    // delta_{1,1}: dT0^dT1 sector at numerator bidegree (s-1, s-1)
    DiffForm res = zero_b_form(*setup, std::max(p - 2, 0));
    auto it = acc.terms.find(std::make_tuple(s - 1, s - 1, 3));
    if (it != acc.terms.end()) res = it->second;

    // for closed input the extracted coefficient is closed over B
    DiffForm dres = b_exterior_d(*setup, res);
    if (closed && !dres.is_zero())
        throw ComputationError("gysin", "residue: extracted coefficient is not closed");

    ResidueResult out;
    out.form = res;
    out.degree_bound =
        big_pow(BigInt(setup->working_gamma()), static_cast<unsigned long>(2 * s - 1)) * deg_alpha;
    auto stamp = ring::filtration_stamp(res);
    out.stamp_degree = stamp.degree_d;
    if (!res.is_zero() && BigInt(out.stamp_degree) > out.degree_bound)
        throw ComputationError("gysin", "residue: degree bound violated");
    return out;
}

}  // namespace edrc::gysin
