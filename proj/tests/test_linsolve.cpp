#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "edrc/linsolve.hpp"
#include "edrc/rng.hpp"

using namespace edrc;
using namespace edrc::linsolve;

namespace {

SparseMatrix from_rows(std::size_t rows, std::size_t cols,
                       const std::vector<std::vector<long>>& data) {
    SparseMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (data[r][c] != 0) m.set(r, c, Scalar(data[r][c]));
    return m;
}

SparseMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng, int fill = 3) {
    SparseMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (int k = 0; k < fill; ++k)
            m.set(r, static_cast<std::size_t>(rng.range(0, static_cast<long>(cols) - 1)),
                  rng.rational(6));
    return m;
}

Scalar dot_row(const SparseVec& row, const std::vector<Scalar>& x) {
    Scalar acc(0);
    for (const auto& [c, v] : row) acc += v * x[c];
    return acc;
}

}  // namespace

TEST_CASE("rref basics") {
    auto id = from_rows(2, 2, {{1, 0}, {0, 1}});
    auto r = rref(id);
    CHECK(r.rank == 2);

    auto dep = from_rows(2, 2, {{1, 2}, {2, 4}});
    r = rref(dep);
    CHECK(r.rank == 1);
    CHECK(r.pivots == std::vector<std::size_t>{0});

    auto anti = from_rows(2, 2, {{0, 1}, {1, 0}});
    CHECK(rref(anti).rank == 2);
}

TEST_CASE("solve_particular") {
    auto id = from_rows(3, 3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    std::vector<Scalar> rhs{Scalar(3), Scalar(-1), Scalar(7)};
    auto x = solve_particular(id, rhs);
    REQUIRE(x.has_value());
    CHECK(*x == rhs);

    auto bad = from_rows(2, 1, {{1}, {1}});
    CHECK(!solve_particular(bad, {Scalar(1), Scalar(2)}).has_value());

    auto wide = from_rows(1, 2, {{1, 1}});
    auto y = solve_particular(wide, {Scalar(2)});
    REQUIRE(y.has_value());
    CHECK((*y)[0] == 2);
    CHECK((*y)[1] == 0);  // free variable zeroed

    CHECK_THROWS_AS(solve_particular(wide, {Scalar(1), Scalar(2)}), PreconditionError);
}

TEST_CASE("kernel_basis") {
    auto id = from_rows(2, 2, {{1, 0}, {0, 1}});
    CHECK(kernel_basis(id).basis.empty());

    SparseMatrix zero(2, 3);
    CHECK(kernel_basis(zero).basis.size() == 3);

    auto m = from_rows(1, 2, {{1, -1}});
    auto k = kernel_basis(m);
    REQUIRE(k.basis.size() == 1);
    CHECK(k.basis[0] == SparseVec{{0, Scalar(1)}, {1, Scalar(1)}});
}

TEST_CASE("random systems: exactness and rank-nullity") {
    Rng rng(99);
    for (int it = 0; it < 15; ++it) {
        std::size_t rows = 4 + it % 4, cols = 5 + it % 5;
        SparseMatrix m = random_matrix(rows, cols, rng);
        auto rr = rref(m);
        auto kb = kernel_basis(m);
        CHECK(rr.rank + kb.basis.size() == cols);
        for (const auto& v : kb.basis) {
            std::vector<Scalar> x(cols, Scalar(0));
            for (const auto& [c, val] : v) x[c] = val;
            for (std::size_t r = 0; r < rows; ++r) CHECK(is_zero(dot_row(m.row[r], x)));
        }
        // a consistent system from a planted solution
        std::vector<Scalar> planted;
        for (std::size_t c = 0; c < cols; ++c) planted.push_back(rng.rational(4));
        std::vector<Scalar> rhs;
        for (std::size_t r = 0; r < rows; ++r) rhs.push_back(dot_row(m.row[r], planted));
        auto x = solve_particular(m, rhs);
        REQUIRE(x.has_value());
        for (std::size_t r = 0; r < rows; ++r) CHECK(dot_row(m.row[r], *x) == rhs[r]);
    }
}

TEST_CASE("serial and parallel kernels are bit-identical") {
    Rng rng(2024);
    for (int it = 0; it < 6; ++it) {
        SparseMatrix m = random_matrix(30, 40, rng, 4);
        auto a = rref_serial(m);
        set_parallel_rows(4);
        auto b = rref_parallel(m);
        set_parallel_rows(0);
        REQUIRE(a.rank == b.rank);
        CHECK(a.pivots == b.pivots);
        for (std::size_t r = 0; r < a.rank; ++r) CHECK(a.rref.row[r] == b.rref.row[r]);
    }
}

TEST_CASE("determinism: identical inputs give identical outputs") {
    Rng rng1(5), rng2(5);
    SparseMatrix m1 = random_matrix(20, 25, rng1), m2 = random_matrix(20, 25, rng2);
    auto a = rref(m1), b = rref(m2);
    CHECK(a.pivots == b.pivots);
    for (std::size_t r = 0; r < a.rank; ++r) CHECK(a.rref.row[r] == b.rref.row[r]);
}

TEST_CASE("quotient_basis") {
    SubspaceBasis big, small;
    big.ambient_dim = 2;
    big.basis = {SparseVec{{0, Scalar(1)}}, SparseVec{{1, Scalar(1)}}};
    auto q = quotient_basis(big, small, {});
    CHECK(q.dim == 2);

    small.ambient_dim = 2;
    small.basis = {SparseVec{{0, Scalar(1)}}};
    q = quotient_basis(big, small, {});
    CHECK(q.dim == 1);
    CHECK(big.basis[q.representative_indices[0]] == SparseVec{{1, Scalar(1)}});

    // big = span{(1,0),(1,1)}, small = span{(1,1)}
    big.basis = {SparseVec{{0, Scalar(1)}}, SparseVec{{0, Scalar(1)}, {1, Scalar(1)}}};
    small.basis = {SparseVec{{0, Scalar(1)}, {1, Scalar(1)}}};
    q = quotient_basis(big, small, {});
    CHECK(q.dim == 1);

    // big == small
    q = quotient_basis(small, small, {});
    CHECK(q.dim == 0);

    // weights steer representative choice
    big.basis = {SparseVec{{0, Scalar(1)}}, SparseVec{{1, Scalar(1)}}};
    small.basis = {};
    q = quotient_basis(big, small, {{2, 0}, {1, 0}});
    CHECK(q.representative_indices == std::vector<std::size_t>{1, 0});

    // small not contained in big
    SubspaceBasis outside;
    outside.ambient_dim = 2;
    outside.basis = {SparseVec{{1, Scalar(1)}}};
    SubspaceBasis only_x;
    only_x.ambient_dim = 2;
    only_x.basis = {SparseVec{{0, Scalar(1)}}};
    CHECK_THROWS_AS(quotient_basis(only_x, outside, {}), PreconditionError);
}
