#include "edrc/poly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace edrc::poly {

VarSet::VarSet(std::vector<std::string> names) : names_(std::move(names)) {
    for (std::size_t i = 0; i < names_.size(); ++i)
        for (std::size_t j = i + 1; j < names_.size(); ++j)
            if (names_[i] == names_[j])
                throw PreconditionError("duplicate variable name: " + names_[i]);
}

std::optional<std::size_t> VarSet::index(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return i;
    return std::nullopt;
}

VarSetPtr make_vars(std::vector<std::string> names) {
    return std::make_shared<const VarSet>(std::move(names));
}

VarSetPtr make_vars(const std::string& comma_separated) {
    std::vector<std::string> names;
    std::string cur;
    for (char ch : comma_separated) {
        if (ch == ',') {
            if (!cur.empty()) names.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) names.push_back(cur);
    return make_vars(std::move(names));
}

int Monomial::total_degree() const {
    int d = 0;
    for (auto e : exp) d += static_cast<int>(e);
    return d;
}

bool Monomial::is_one() const {
    return std::all_of(exp.begin(), exp.end(), [](std::uint32_t e) { return e == 0; });
}

Monomial Monomial::times(const Monomial& o) const {
    Monomial r = *this;
    for (std::size_t i = 0; i < exp.size(); ++i) r.exp[i] += o.exp[i];
    return r;
}

std::optional<Monomial> Monomial::divided_by(const Monomial& o) const {
    Monomial r = *this;
    for (std::size_t i = 0; i < exp.size(); ++i) {
        if (exp[i] < o.exp[i]) return std::nullopt;
        r.exp[i] -= o.exp[i];
    }
    return r;
}

bool GradedLexLess::operator()(const Monomial& a, const Monomial& b) const {
    int da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db;
    // lex with earlier variables dominant
    for (std::size_t i = 0; i < a.exp.size(); ++i)
        if (a.exp[i] != b.exp[i]) return a.exp[i] < b.exp[i];
    return false;
}

MultiPoly MultiPoly::constant(VarSetPtr vars, const Scalar& c) {
    MultiPoly p(std::move(vars));
    if (!edrc::is_zero(c)) p.terms_.emplace(Monomial::one(p.nvars()), c);
    return p;
}

MultiPoly MultiPoly::variable(VarSetPtr vars, std::size_t i, std::uint32_t e) {
    MultiPoly p(vars);
    if (i >= p.nvars()) throw PreconditionError("variable index out of range");
    if (e == 0) return constant(std::move(vars), 1);
    Monomial m = Monomial::one(p.nvars());
    m.exp[i] = e;
    p.terms_.emplace(std::move(m), Scalar(1));
    return p;
}

MultiPoly MultiPoly::term(VarSetPtr vars, Monomial m, const Scalar& c) {
    MultiPoly p(std::move(vars));
    if (m.exp.size() != p.nvars()) throw PreconditionError("monomial arity mismatch");
    if (!edrc::is_zero(c)) p.terms_.emplace(std::move(m), c);
    return p;
}

bool MultiPoly::is_one() const {
    return terms_.size() == 1 && terms_.begin()->first.is_one() && terms_.begin()->second == 1;
}

int MultiPoly::total_degree() const {
    if (terms_.empty()) return kDegZero;
    return terms_.rbegin()->first.total_degree();  // map is graded, last term has max degree
}

int MultiPoly::degree_in(std::size_t var) const {
    if (terms_.empty()) return kDegZero;
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m.exp[var]));
    return d;
}

Scalar MultiPoly::coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Scalar(0) : it->second;
}

void MultiPoly::set_coeff(const Monomial& m, const Scalar& c) {
    if (edrc::is_zero(c))
        terms_.erase(m);
    else
        terms_[m] = c;
}

void MultiPoly::add_term(const Monomial& m, const Scalar& c) {
    if (edrc::is_zero(c)) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (edrc::is_zero(it->second)) terms_.erase(it);
    }
}

void MultiPoly::check_same_ambient(const MultiPoly& o) const {
    if (vars_ == o.vars_) return;
    if (vars_ && o.vars_ && *vars_ == *o.vars_) return;
    throw PreconditionError("ambient variable mismatch");
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
    check_same_ambient(o);
    MultiPoly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const {
    check_same_ambient(o);
    MultiPoly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly r(vars_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
    check_same_ambient(o);
    MultiPoly r(vars_);
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) r.add_term(ma.times(mb), ca * cb);
    return r;
}

MultiPoly MultiPoly::operator*(const Scalar& c) const {
    MultiPoly r(vars_);
    if (edrc::is_zero(c)) return r;
    for (const auto& [m, cc] : terms_) r.terms_.emplace(m, cc * c);
    return r;
}

bool MultiPoly::operator==(const MultiPoly& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    auto it = terms_.begin(), jt = o.terms_.begin();
    for (; it != terms_.end(); ++it, ++jt)
        if (!(it->first == jt->first) || it->second != jt->second) return false;
    return true;
}

MultiPoly MultiPoly::pow(unsigned e) const {
    MultiPoly r = constant(vars_, 1);
    MultiPoly base = *this;
    while (e) {
        if (e & 1u) r = r * base;
        base = e > 1 ? base * base : base;
        e >>= 1u;
    }
    return r;
}

Scalar MultiPoly::eval(const std::vector<Scalar>& point) const {
    if (point.size() != nvars()) throw PreconditionError("eval: point arity mismatch");
    Scalar acc(0);
    for (const auto& [m, c] : terms_) {
        Scalar t = c;
        for (std::size_t i = 0; i < m.exp.size(); ++i)
            for (std::uint32_t k = 0; k < m.exp[i]; ++k) t *= point[i];
        acc += t;
    }
    return acc;
}

std::string MultiPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // descending graded lex
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        Scalar ac = abs(c);
        if (first) {
            if (sgn(c) < 0) os << "-";
            first = false;
        } else {
            os << (sgn(c) < 0 ? " - " : " + ");
        }
        bool printed_coeff = false;
        if (!(ac == 1) || m.is_one()) {
            os << ac.get_str();
            printed_coeff = true;
        }
        for (std::size_t i = 0; i < m.exp.size(); ++i) {
            if (m.exp[i] == 0) continue;
            if (printed_coeff) os << "*";
            printed_coeff = true;
            os << vars_->name(i);
            if (m.exp[i] > 1) os << "^" << m.exp[i];
        }
    }
    return os.str();
}

MultiPoly partial_derivative(const MultiPoly& f, std::size_t var) {
    if (var >= f.nvars()) throw PreconditionError("partial_derivative: bad variable index");
    MultiPoly r(f.vars());
    for (const auto& [m, c] : f.terms()) {
        if (m.exp[var] == 0) continue;
        Monomial d = m;
        d.exp[var] -= 1;
        r.add_term(d, c * Scalar(static_cast<long>(m.exp[var])));
    }
    return r;
}

bool is_monic_in(const MultiPoly& g, std::size_t var) {
    int d = g.degree_in(var);
    if (d == kDegZero || d == 0) return false;
    MultiPoly lead(g.vars());
    for (const auto& [m, c] : g.terms()) {
        if (static_cast<int>(m.exp[var]) == d) {
            Monomial q = m;
            q.exp[var] = 0;
            lead.add_term(q, c);
        }
    }
    return lead.is_one();
}

DivisionResult monic_division(const MultiPoly& f, const MultiPoly& g, std::size_t var) {
    if (!is_monic_in(g, var)) throw PreconditionError("monic_division: divisor not monic in variable");
    int dg = g.degree_in(var);
    MultiPoly q(f.vars()), r = f;
    while (true) {
        int dr = r.degree_in(var);
        if (r.is_zero() || dr < dg) break;
        // leading slice of r in var
        MultiPoly lead(f.vars());
        for (const auto& [m, c] : r.terms()) {
            if (static_cast<int>(m.exp[var]) == dr) {
                Monomial t = m;
                t.exp[var] = static_cast<std::uint32_t>(dr - dg);
                lead.add_term(t, c);
            }
        }
        q = q + lead;
        r = r - lead * g;
    }
    return {q, r};
}

std::optional<MultiPoly> exact_divide(const MultiPoly& f, const MultiPoly& g) {
    if (g.is_zero()) throw PreconditionError("exact_divide: zero divisor");
    MultiPoly q(f.vars()), r = f;
    const auto& glead = *g.terms().rbegin();
    while (!r.is_zero()) {
        const auto& rlead = *r.terms().rbegin();
        auto m = rlead.first.divided_by(glead.first);
        if (!m) return std::nullopt;
        Scalar c = rlead.second / glead.second;
        MultiPoly t = MultiPoly::term(f.vars(), *m, c);
        q = q + t;
        r = r - t * g;
    }
    return q;
}

MultiPoly substitute(const MultiPoly& f, const std::vector<MultiPoly>& values) {
    if (values.size() != f.nvars()) throw PreconditionError("substitute: value per variable required");
    if (values.empty()) return f;
    const VarSetPtr& target = values[0].vars();
    MultiPoly acc(target);
    for (const auto& [m, c] : f.terms()) {
        MultiPoly t = MultiPoly::constant(target, c);
        for (std::size_t i = 0; i < m.exp.size(); ++i)
            if (m.exp[i] > 0) t = t * values[i].pow(m.exp[i]);
        acc = acc + t;
    }
    return acc;
}

ScalarMatrix ScalarMatrix::identity(std::size_t n) {
    ScalarMatrix m;
    m.n = n;
    m.a.assign(n * n, Scalar(0));
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

std::optional<ScalarMatrix> ScalarMatrix::inverse() const {
    ScalarMatrix work = *this;
    ScalarMatrix inv = identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && edrc::is_zero(work.at(piv, col))) ++piv;
        if (piv == n) return std::nullopt;
        if (piv != col)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(work.at(piv, j), work.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        Scalar p = work.at(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            work.at(col, j) /= p;
            inv.at(col, j) /= p;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || edrc::is_zero(work.at(i, col))) continue;
            Scalar fct = work.at(i, col);
            for (std::size_t j = 0; j < n; ++j) {
                work.at(i, j) -= fct * work.at(col, j);
                inv.at(i, j) -= fct * inv.at(col, j);
            }
        }
    }
    return inv;
}

MultiPoly linear_change(const MultiPoly& f, const ScalarMatrix& m) {
    if (m.n != f.nvars()) throw PreconditionError("linear_change: matrix size mismatch");
    if (!m.inverse()) throw PreconditionError("linear_change: singular matrix");
    std::vector<MultiPoly> values;
    values.reserve(m.n);
    for (std::size_t i = 0; i < m.n; ++i) {
        MultiPoly v(f.vars());
        for (std::size_t j = 0; j < m.n; ++j)
            if (!edrc::is_zero(m.at(i, j))) v = v + MultiPoly::variable(f.vars(), j) * m.at(i, j);
        values.push_back(std::move(v));
    }
    return substitute(f, values);
}

namespace {

struct Lexer {
    const std::string& text;
    std::size_t pos = 0;
    int line = 1, col = 1;

    explicit Lexer(const std::string& t) : text(t) {}

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) advance();
    }
    char peek() const { return pos < text.size() ? text[pos] : '\0'; }
    void advance() {
        if (text[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line, col); }
};

class Parser {
  public:
    Parser(const std::string& text, const VarSetPtr& vars) : lex_(text), vars_(vars) {}

    MultiPoly parse() {
        MultiPoly p = expr();
        lex_.skip_ws();
        if (lex_.peek() != '\0') lex_.fail("unexpected trailing input");
        return p;
    }

  private:
    // expr := ['-'|'+'] term (('+'|'-') term)*
    MultiPoly expr() {
        lex_.skip_ws();
        bool neg = false;
        if (lex_.peek() == '-' || lex_.peek() == '+') {
            neg = lex_.peek() == '-';
            lex_.advance();
        }
        MultiPoly acc = term();
        if (neg) acc = -acc;
        while (true) {
            lex_.skip_ws();
            char c = lex_.peek();
            if (c != '+' && c != '-') break;
            lex_.advance();
            MultiPoly t = term();
            acc = (c == '+') ? acc + t : acc - t;
        }
        return acc;
    }

    // term := factor ('*' factor)*
    MultiPoly term() {
        MultiPoly acc = factor();
        while (true) {
            lex_.skip_ws();
            if (lex_.peek() != '*') break;
            lex_.advance();
            acc = acc * factor();
        }
        return acc;
    }

    // factor := atom ['^' nat]
    MultiPoly factor() {
        MultiPoly a = atom();
        lex_.skip_ws();
        if (lex_.peek() == '^') {
            lex_.advance();
            lex_.skip_ws();
            unsigned e = natural();
            a = a.pow(e);
        }
        return a;
    }

    MultiPoly atom() {
        lex_.skip_ws();
        char c = lex_.peek();
        if (c == '(') {
            lex_.advance();
            MultiPoly inner = expr();
            lex_.skip_ws();
            if (lex_.peek() != ')') lex_.fail("expected ')'");
            lex_.advance();
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        lex_.fail("expected variable, literal, or '('");
    }

    unsigned natural() {
        if (!std::isdigit(static_cast<unsigned char>(lex_.peek()))) lex_.fail("expected exponent");
        unsigned long v = 0;
        while (std::isdigit(static_cast<unsigned char>(lex_.peek()))) {
            v = v * 10 + static_cast<unsigned long>(lex_.peek() - '0');
            if (v > 100000) lex_.fail("exponent too large");
            lex_.advance();
        }
        return static_cast<unsigned>(v);
    }

    MultiPoly number() {
        std::string digits;
        while (std::isdigit(static_cast<unsigned char>(lex_.peek()))) {
            digits.push_back(lex_.peek());
            lex_.advance();
        }
        BigInt num(digits, 10);
        BigInt den(1);
        // rational literal p/q (only when '/' directly follows digits)
        if (lex_.peek() == '/') {
            std::size_t save = lex_.pos;
            int sl = lex_.line, sc = lex_.col;
            lex_.advance();
            if (!std::isdigit(static_cast<unsigned char>(lex_.peek()))) {
                lex_.pos = save;
                lex_.line = sl;
                lex_.col = sc;
            } else {
                std::string dden;
                while (std::isdigit(static_cast<unsigned char>(lex_.peek()))) {
                    dden.push_back(lex_.peek());
                    lex_.advance();
                }
                den = BigInt(dden, 10);
                if (sgn(den) == 0) lex_.fail("zero denominator");
            }
        }
        Scalar q(num, den);
        q.canonicalize();
        return MultiPoly::constant(vars_, q);
    }

    MultiPoly identifier() {
        std::string name;
        int line = lex_.line, col = lex_.col;
        while (std::isalnum(static_cast<unsigned char>(lex_.peek())) || lex_.peek() == '_') {
            name.push_back(lex_.peek());
            lex_.advance();
        }
        auto idx = vars_->index(name);
        if (!idx) throw ParseError("unknown variable '" + name + "'", line, col);
        return MultiPoly::variable(vars_, *idx);
    }

    Lexer lex_;
    VarSetPtr vars_;
};

}  // namespace

MultiPoly parse_poly(const std::string& text, const VarSetPtr& vars) {
    return Parser(text, vars).parse();
}

}  // namespace edrc::poly
