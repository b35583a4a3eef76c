#include "vlc/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace vlc::linalg {

namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kEigenTol = 1e-10;

// Row dot product with independent accumulators so the reduction vectorizes
// without reassociation flags. Order of operations is fixed, results are
// reproducible across builds.
double row_dot(const double* a, const double* b, std::size_t n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        s0 += a[k] * b[k];
        s1 += a[k + 1] * b[k + 1];
        s2 += a[k + 2] * b[k + 2];
        s3 += a[k + 3] * b[k + 3];
    }
    double tail = 0.0;
    for (; k < n; ++k) tail += a[k] * b[k];
    return ((s0 + s1) + (s2 + s3)) + tail;
}

// Lower Cholesky, G = L Lᵀ, blocked right-looking so the trailing update
// streams cache-resident panels. Returns false on a pivot too small relative
// to the largest diagonal entry, signalling (near-)rank deficiency.
bool cholesky(SymMatrix& g, std::vector<double>& lower) {
    const std::size_t n = g.n;
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, g.at(i, i));
    if (max_diag <= 0.0) return false;

    lower = g.a;  // factor in place over the lower triangle
    constexpr std::size_t kBlock = 48;

    for (std::size_t k = 0; k < n; k += kBlock) {
        const std::size_t kb = std::min(kBlock, n - k);

        // Factor the diagonal block.
        for (std::size_t j = k; j < k + kb; ++j) {
            double* lj = &lower[j * n];
            const double d = lj[j] - row_dot(lj + k, lj + k, j - k);
            if (d <= kPivotTol * max_diag) return false;
            const double root = std::sqrt(d);
            lj[j] = root;
            const double inv = 1.0 / root;
            for (std::size_t i = j + 1; i < k + kb; ++i) {
                double* li = &lower[i * n];
                li[j] = (li[j] - row_dot(li + k, lj + k, j - k)) * inv;
            }
        }

        // Triangular solve of the panel below the block.
        for (std::size_t i = k + kb; i < n; ++i) {
            double* li = &lower[i * n];
            for (std::size_t j = k; j < k + kb; ++j) {
                const double* lj = &lower[j * n];
                li[j] = (li[j] - row_dot(li + k, lj + k, j - k)) / lj[j];
            }
        }

        // Trailing update: A[i][j] -= L[i,k:k+kb) . L[j,k:k+kb), two rows at
        // a time so each streamed L[j] panel row serves two accumulations.
        std::size_t i = k + kb;
        for (; i + 1 < n; i += 2) {
            const double* a_row = &lower[i * n + k];
            const double* b_row = &lower[(i + 1) * n + k];
            double* out_a = &lower[i * n];
            double* out_b = &lower[(i + 1) * n];
            for (std::size_t j = k + kb; j <= i; ++j) {
                const double* lj = &lower[j * n + k];
                double sa0 = 0.0, sa1 = 0.0, sb0 = 0.0, sb1 = 0.0;
                std::size_t t = 0;
                for (; t + 2 <= kb; t += 2) {
                    sa0 += a_row[t] * lj[t];
                    sa1 += a_row[t + 1] * lj[t + 1];
                    sb0 += b_row[t] * lj[t];
                    sb1 += b_row[t + 1] * lj[t + 1];
                }
                if (t < kb) {
                    sa0 += a_row[t] * lj[t];
                    sb0 += b_row[t] * lj[t];
                }
                out_a[j] -= sa0 + sa1;
                out_b[j] -= sb0 + sb1;
            }
            // the (i+1, i+1) and (i+1, i) cells belong to row i+1 only
            out_b[i + 1] -= row_dot(b_row, b_row, kb);
        }
        if (i < n) {
            double* out = &lower[i * n];
            const double* rowk = &lower[i * n + k];
            for (std::size_t j = k + kb; j <= i; ++j)
                out[j] -= row_dot(rowk, &lower[j * n + k], kb);
        }
    }
    return true;
}

std::vector<double> cholesky_solve(const std::vector<double>& lower, std::size_t n,
                                   const std::vector<double>& rhs) {
    std::vector<double> y(n), x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = rhs[i];
        const double* li = &lower[i * n];
        for (std::size_t k = 0; k < i; ++k) s -= li[k] * y[k];
        y[i] = s / li[i];
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= lower[k * n + ii] * x[k];
        x[ii] = s / lower[ii * n + ii];
    }
    return x;
}

}  // namespace

void jacobi_eigen(SymMatrix& m, SymMatrix& vectors) {
    const std::size_t n = m.n;
    vectors = SymMatrix(n);
    for (std::size_t i = 0; i < n; ++i) vectors.at(i, i) = 1.0;
    if (n < 2) return;

    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += m.at(i, j) * m.at(i, j);
        if (off < 1e-24) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = m.at(p, q);
                if (apq == 0.0) continue;
                const double app = m.at(p, p);
                const double aqq = m.at(q, q);
                if (std::abs(apq) < 1e-300) {
                    m.at(p, q) = m.at(q, p) = 0.0;
                    continue;
                }
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double mkp = m.at(k, p);
                    const double mkq = m.at(k, q);
                    m.at(k, p) = c * mkp - s * mkq;
                    m.at(k, q) = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double mpk = m.at(p, k);
                    const double mqk = m.at(q, k);
                    m.at(p, k) = c * mpk - s * mqk;
                    m.at(q, k) = s * mpk + c * mqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = vectors.at(k, p);
                    const double vkq = vectors.at(k, q);
                    vectors.at(k, p) = c * vkp - s * vkq;
                    vectors.at(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
}

SolveResult solve_spd(SymMatrix gram, std::vector<double> rhs) {
    const std::size_t n = gram.n;
    SolveResult result;

    std::vector<double> lower;
    SymMatrix work = gram;
    if (cholesky(work, lower)) {
        result.coef = cholesky_solve(lower, n, rhs);
        return result;
    }

    // Minimum-norm solution through the truncated eigendecomposition.
    result.rank_deficient = true;
    SymMatrix vectors(n);
    jacobi_eigen(gram, vectors);

    std::vector<double> eigenvalues(n);
    double max_eig = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        eigenvalues[i] = gram.at(i, i);
        max_eig = std::max(max_eig, std::abs(eigenvalues[i]));
    }
    result.coef.assign(n, 0.0);
    if (max_eig <= 0.0) return result;

    // b = V diag(1/λ) Vᵀ c over the retained spectrum.
    std::vector<double> projected(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        if (eigenvalues[j] <= kEigenTol * max_eig) continue;
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += vectors.at(i, j) * rhs[i];
        projected[j] = dot / eigenvalues[j];
    }
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += vectors.at(i, j) * projected[j];
        result.coef[i] = s;
    }
    return result;
}

}  // namespace vlc::linalg
