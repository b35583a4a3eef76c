#pragma once

#include <cstddef>
#include <vector>

namespace vlc::linalg {

/// Dense symmetric matrix in row-major storage, n x n.
struct SymMatrix {
    std::size_t n = 0;
    std::vector<double> a;  // n*n entries

    explicit SymMatrix(std::size_t size) : n(size), a(size * size, 0.0) {}
    double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

struct SolveResult {
    std::vector<double> coef;
    bool rank_deficient = false;
};

/// Solve G b = c for symmetric positive semi-definite G (normal equations).
/// Full-rank systems go through Cholesky; singular ones fall back to an
/// eigenvalue-truncated pseudo-inverse, which yields the minimum-norm
/// least-squares solution.
SolveResult solve_spd(SymMatrix gram, std::vector<double> rhs);

/// In-place cyclic Jacobi eigendecomposition of a symmetric matrix.
/// On return `m` holds the eigenvalues on its diagonal and `vectors`
/// holds the eigenvectors column-wise.
void jacobi_eigen(SymMatrix& m, SymMatrix& vectors);

}  // namespace vlc::linalg
