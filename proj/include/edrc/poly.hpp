#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edrc/scalar.hpp"

namespace edrc::poly {

// Ordered ambient variable list, shared by all polynomials of one ring.
class VarSet {
  public:
    explicit VarSet(std::vector<std::string> names);
    std::size_t size() const { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_[i]; }
    const std::vector<std::string>& names() const { return names_; }
    std::optional<std::size_t> index(std::string_view name) const;
    bool operator==(const VarSet& o) const { return names_ == o.names_; }

  private:
    std::vector<std::string> names_;
};

using VarSetPtr = std::shared_ptr<const VarSet>;

VarSetPtr make_vars(std::vector<std::string> names);
// convenience: "x,y,z"
VarSetPtr make_vars(const std::string& comma_separated);

struct Monomial {
    std::vector<std::uint32_t> exp;

    static Monomial one(std::size_t nvars) { return Monomial{std::vector<std::uint32_t>(nvars, 0)}; }
    int total_degree() const;
    bool is_one() const;
    Monomial times(const Monomial& o) const;
    // componentwise quotient; nullopt when not divisible
    std::optional<Monomial> divided_by(const Monomial& o) const;
    bool operator==(const Monomial& o) const { return exp == o.exp; }
};

// Graded lexicographic: lower total degree first; ties broken by lex with
// earlier variables dominant (larger exponent on an earlier variable = larger).
struct GradedLexLess {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

constexpr int kDegZero = INT32_MIN;  // degree sentinel of the zero polynomial

class MultiPoly {
  public:
    MultiPoly() = default;
    explicit MultiPoly(VarSetPtr vars) : vars_(std::move(vars)) {}

    static MultiPoly zero(VarSetPtr vars) { return MultiPoly(std::move(vars)); }
    static MultiPoly constant(VarSetPtr vars, const Scalar& c);
    static MultiPoly variable(VarSetPtr vars, std::size_t i, std::uint32_t e = 1);
    static MultiPoly term(VarSetPtr vars, Monomial m, const Scalar& c);

    const VarSetPtr& vars() const { return vars_; }
    std::size_t nvars() const { return vars_ ? vars_->size() : 0; }
    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    std::size_t term_count() const { return terms_.size(); }
    // total degree; kDegZero for the zero polynomial
    int total_degree() const;
    int degree_in(std::size_t var) const;
    const std::map<Monomial, Scalar, GradedLexLess>& terms() const { return terms_; }

    Scalar coeff(const Monomial& m) const;
    void set_coeff(const Monomial& m, const Scalar& c);  // erases on zero
    void add_term(const Monomial& m, const Scalar& c);

    MultiPoly operator+(const MultiPoly& o) const;
    MultiPoly operator-(const MultiPoly& o) const;
    MultiPoly operator-() const;
    MultiPoly operator*(const MultiPoly& o) const;
    MultiPoly operator*(const Scalar& c) const;
    bool operator==(const MultiPoly& o) const;
    bool operator!=(const MultiPoly& o) const { return !(*this == o); }

    MultiPoly pow(unsigned e) const;
    Scalar eval(const std::vector<Scalar>& point) const;

    std::string str() const;  // canonical printing, graded lex descending

  private:
    void check_same_ambient(const MultiPoly& o) const;
    VarSetPtr vars_;
    std::map<Monomial, Scalar, GradedLexLess> terms_;
};

MultiPoly partial_derivative(const MultiPoly& f, std::size_t var);

// f = q*g + r with deg_var(r) < deg_var(g); requires g monic in var.
struct DivisionResult {
    MultiPoly quotient, remainder;
};
DivisionResult monic_division(const MultiPoly& f, const MultiPoly& g, std::size_t var);

// true iff the coefficient of var^deg_var(g) in g is the scalar 1
bool is_monic_in(const MultiPoly& g, std::size_t var);

// Exact division by an arbitrary nonzero divisor; nullopt when not divisible.
std::optional<MultiPoly> exact_divide(const MultiPoly& f, const MultiPoly& g);

// Composition with polynomial values, one per ambient variable of f.
// The values must share a common ambient.
MultiPoly substitute(const MultiPoly& f, const std::vector<MultiPoly>& values);

// Small dense rational matrix used for linear coordinate changes.
struct ScalarMatrix {
    std::size_t n = 0;
    std::vector<Scalar> a;  // row-major

    static ScalarMatrix identity(std::size_t n);
    Scalar& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    const Scalar& at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
    std::optional<ScalarMatrix> inverse() const;
};

// f composed with the substitution X_i -> sum_j M(i,j) X_j. Throws on singular M.
MultiPoly linear_change(const MultiPoly& f, const ScalarMatrix& m);

// Text grammar shared by every module: identifiers, integer and rational
// literals p/q, operators + - * ^, parentheses. No implicit multiplication.
MultiPoly parse_poly(const std::string& text, const VarSetPtr& vars);

}  // namespace edrc::poly
