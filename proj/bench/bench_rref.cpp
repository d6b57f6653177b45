// Benchmark comparing the serial reference elimination against the OpenMP
// kernel on random sparse rational matrices, with a bit-identity check.

#include <chrono>
#include <cstdlib>
#include <iostream>

#include "edrc/linsolve.hpp"
#include "edrc/rng.hpp"

using namespace edrc;

namespace {

linsolve::SparseMatrix random_matrix(std::size_t rows, std::size_t cols, int nnz_per_row,
                                     Rng& rng) {
    linsolve::SparseMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (int k = 0; k < nnz_per_row; ++k) {
            std::size_t c = static_cast<std::size_t>(rng.range(0, static_cast<long>(cols) - 1));
            m.set(r, c, rng.rational(9));
        }
    return m;
}

bool same(const linsolve::RrefResult& a, const linsolve::RrefResult& b) {
    if (a.rank != b.rank || a.pivots != b.pivots) return false;
    for (std::size_t r = 0; r < a.rank; ++r)
        if (a.rref.row[r] != b.rref.row[r]) return false;
    return true;
}

double run_ms(linsolve::RrefResult (*fn)(linsolve::SparseMatrix), const linsolve::SparseMatrix& m,
              linsolve::RrefResult& out) {
    auto t0 = std::chrono::steady_clock::now();
    out = fn(m);
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t rows = argc > 1 ? static_cast<std::size_t>(std::atol(argv[1])) : 400;
    std::size_t cols = argc > 2 ? static_cast<std::size_t>(std::atol(argv[2])) : 600;
    int nnz = argc > 3 ? std::atoi(argv[3]) : 8;
    int threads = argc > 4 ? std::atoi(argv[4]) : 4;

    Rng rng(12345);
    linsolve::SparseMatrix m = random_matrix(rows, cols, nnz, rng);
    std::cout << "matrix " << rows << "x" << cols << ", nnz " << m.nnz() << "\n";

    linsolve::RrefResult serial, parallel;
    double t_serial = run_ms(linsolve::rref_serial, m, serial);
    linsolve::set_parallel_rows(threads);
    double t_parallel = run_ms(linsolve::rref_parallel, m, parallel);

    std::cout << "serial   " << t_serial << " ms  (rank " << serial.rank << ")\n";
    std::cout << "parallel " << t_parallel << " ms  (" << threads << " threads, rank "
              << parallel.rank << ")\n";
    if (!same(serial, parallel)) {
        std::cout << "MISMATCH: kernels disagree\n";
        return 1;
    }
    std::cout << "kernels bit-identical\n";
    return 0;
}
