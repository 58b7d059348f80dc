/**
 * @file linalg.hpp
 * @brief Banded linear algebra for second-difference penalized smoothing.
 *
 * Every smoother in this library reduces to the symmetric positive-definite
 * pentadiagonal system
 *
 *     M x = b,   M = diag(w) + lambda * D^T D,
 *
 * where D is the (n-2) x n second-difference operator with stencil (1, -2, 1).
 * M is stored as three diagonals (main, first and second super-diagonal) and
 * factored as L D L^T in O(n) time and memory.
 *
 * For large lambda the factorization alone loses about cond(M) * eps in the
 * affine null-space directions of D. solve() therefore runs a few steps of
 * iterative refinement with the residual evaluated as b - w.x - lambda D^T (D x),
 * whose rounding error stays proportional to sqrt(lambda) instead of lambda.
 */

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lsaps::linalg {

/// Discrete second-derivative operator of shape (n-2) x n, unit spacing.
class SecondDifference {
public:
    explicit SecondDifference(std::size_t n);

    [[nodiscard]] std::size_t cols() const noexcept { return n_; }
    [[nodiscard]] std::size_t rows() const noexcept { return n_ - 2; }

    /// (D x)_r = x_r - 2 x_{r+1} + x_{r+2}
    [[nodiscard]] std::vector<double> apply(std::span<const double> x) const;

private:
    std::size_t n_;
};

/// Convenience for SecondDifference(x.size()).apply(x).
[[nodiscard]] std::vector<double> second_difference(std::span<const double> x);

/**
 * Band-compact storage of M = diag(weights) + lambda * D^T D.
 *
 * main[i] = M(i, i), upper1[i] = M(i, i+1), upper2[i] = M(i, i+2).
 * Symmetry is implicit.
 */
struct PentadiagonalSystem {
    std::vector<double> weights;  // empty for systems not built by assemble_system
    std::vector<double> main;
    std::vector<double> upper1;
    std::vector<double> upper2;
    double lambda = 0.0;

    [[nodiscard]] std::size_t size() const noexcept { return main.size(); }

    /// Dense entry lookup; zero outside the band.
    [[nodiscard]] double at(std::size_t row, std::size_t col) const noexcept;

    /// y = M x from the band entries.
    [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const;

    /// rhs - M x; uses the weights + penalty form when weights are present.
    [[nodiscard]] std::vector<double> residual(std::span<const double> x,
                                               std::span<const double> rhs) const;
};

/// Assemble diag(weights) + lambda * D^T D. Requires n >= 3 and lambda >= 0;
/// lambda == 0 with a non-positive weight is reported as singular.
[[nodiscard]] PentadiagonalSystem assemble_system(std::span<const double> weights,
                                                  double lambda);

/// L D L^T factorization of a pentadiagonal SPD matrix.
class BandedCholesky {
public:
    /// Throws NotPositiveDefinite when a pivot drops to or below
    /// 1e-14 * max(main diagonal).
    explicit BandedCholesky(const PentadiagonalSystem& system);

    [[nodiscard]] std::size_t size() const noexcept { return pivot_.size(); }

    [[nodiscard]] std::vector<double> solve(std::span<const double> rhs) const;

    /// Diagonal of M^{-1}. Entry i is ||D^{-1/2} L^{-1} e_i||^2, obtained by one
    /// forward substitution per unit vector that starts at row i.
    [[nodiscard]] std::vector<double> inverse_diagonal() const;

private:
    std::vector<double> pivot_;  // D
    std::vector<double> sub1_;   // L(i, i-1), index i
    std::vector<double> sub2_;   // L(i, i-2), index i
};

/// Solve M x = rhs via banded factorization plus iterative refinement.
[[nodiscard]] std::vector<double> solve(const PentadiagonalSystem& system,
                                        std::span<const double> rhs);

/// Same, reusing a factorization of `system`.
[[nodiscard]] std::vector<double> solve(const PentadiagonalSystem& system,
                                        const BandedCholesky& factor,
                                        std::span<const double> rhs);

/// Diagonal of the hat matrix H = M^{-1} diag(weights). The system must have
/// been assembled from the same weights.
[[nodiscard]] std::vector<double> hat_diagonal(const PentadiagonalSystem& system,
                                               std::span<const double> weights);

/// Same as above, reusing an existing factorization of M.
[[nodiscard]] std::vector<double> hat_diagonal(const BandedCholesky& factor,
                                               std::span<const double> weights);

}  // namespace lsaps::linalg
