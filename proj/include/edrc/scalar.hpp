#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace edrc {

// Exact rational scalar. mpq_class keeps values canonical (lowest terms,
// positive denominator) as long as raw mpq_t access goes through canonicalize.
using Scalar = mpq_class;
using BigInt = mpz_class;

inline bool is_zero(const Scalar& a) { return sgn(a) == 0; }

inline Scalar scalar_of(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("scalar: zero denominator");
    Scalar q(num, den);
    q.canonicalize();
    return q;
}

inline BigInt big_pow(const BigInt& base, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline std::string scalar_str(const Scalar& a) { return a.get_str(); }

struct ParseError : std::runtime_error {
    int line, col;
    ParseError(const std::string& msg, int line_, int col_)
        : std::runtime_error(msg + " at line " + std::to_string(line_) + ", column " +
                             std::to_string(col_)),
          line(line_),
          col(col_) {}
};

// Violated caller contract (bad inputs, mismatched ambients, failed preconditions).
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A computation stage failed (infeasible system, cap exhausted, size limit).
struct ComputationError : std::runtime_error {
    std::string stage;
    ComputationError(const std::string& stage_, const std::string& msg)
        : std::runtime_error("[" + stage_ + "] " + msg), stage(stage_) {}
};

}  // namespace edrc
