#include "lsaps/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lsaps/error.hpp"

namespace lsaps::linalg {

namespace {

constexpr double kPivotTolerance = 1e-14;
constexpr int kMaxRefinementSteps = 4;

void require_at_least_three(std::size_t n) {
    if (n < 3) {
        throw Error(ErrorKind::InvalidSize,
                    "second difference needs at least 3 points, got " + std::to_string(n));
    }
}

}  // namespace

SecondDifference::SecondDifference(std::size_t n) : n_(n) { require_at_least_three(n); }

std::vector<double> SecondDifference::apply(std::span<const double> x) const {
    if (x.size() != n_) {
        throw Error(ErrorKind::InvalidSize, "second difference: length mismatch");
    }
    std::vector<double> out(rows());
    for (std::size_t r = 0; r < out.size(); ++r) {
        out[r] = x[r] - 2.0 * x[r + 1] + x[r + 2];
    }
    return out;
}

std::vector<double> second_difference(std::span<const double> x) {
    return SecondDifference(x.size()).apply(x);
}

double PentadiagonalSystem::at(std::size_t row, std::size_t col) const noexcept {
    const std::size_t lo = std::min(row, col);
    const std::size_t gap = std::max(row, col) - lo;
    switch (gap) {
        case 0: return main[lo];
        case 1: return upper1[lo];
        case 2: return upper2[lo];
        default: return 0.0;
    }
}

std::vector<double> PentadiagonalSystem::multiply(std::span<const double> x) const {
    const std::size_t n = size();
    if (x.size() != n) {
        throw Error(ErrorKind::InvalidSize, "multiply: length mismatch");
    }
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = main[i] * x[i];
        if (i + 1 < n) acc += upper1[i] * x[i + 1];
        if (i + 2 < n) acc += upper2[i] * x[i + 2];
        if (i >= 1) acc += upper1[i - 1] * x[i - 1];
        if (i >= 2) acc += upper2[i - 2] * x[i - 2];
        y[i] = acc;
    }
    return y;
}

std::vector<double> PentadiagonalSystem::residual(std::span<const double> x,
                                                  std::span<const double> rhs) const {
    const std::size_t n = size();
    if (x.size() != n || rhs.size() != n) {
        throw Error(ErrorKind::InvalidSize, "residual: length mismatch");
    }
    if (weights.size() != n) {
        std::vector<double> r = multiply(x);
        for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - r[i];
        return r;
    }
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - weights[i] * x[i];
    if (lambda != 0.0) {
        const std::vector<double> dx = second_difference(x);
        for (std::size_t k = 0; k < dx.size(); ++k) {
            const double v = lambda * dx[k];
            r[k] -= v;
            r[k + 1] += 2.0 * v;
            r[k + 2] -= v;
        }
    }
    return r;
}

PentadiagonalSystem assemble_system(std::span<const double> weights, double lambda) {
    const std::size_t n = weights.size();
    require_at_least_three(n);
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw Error(ErrorKind::InvalidConfig, "penalty must be finite and >= 0");
    }
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw Error(ErrorKind::InvalidConfig, "weights must be finite and >= 0");
        }
        if (lambda == 0.0 && w == 0.0) {
            throw Error(ErrorKind::Singular, "zero weight with zero penalty gives a singular system");
        }
    }

    PentadiagonalSystem sys;
    sys.lambda = lambda;
    sys.weights.assign(weights.begin(), weights.end());
    sys.main.assign(weights.begin(), weights.end());
    sys.upper1.assign(n - 1, 0.0);
    sys.upper2.assign(n - 2, 0.0);

    // Accumulate lambda * d_r d_r^T for every stencil row d_r = (1, -2, 1).
    constexpr double stencil[3] = {1.0, -2.0, 1.0};
    for (std::size_t r = 0; r + 2 < n; ++r) {
        for (std::size_t a = 0; a < 3; ++a) {
            sys.main[r + a] += lambda * stencil[a] * stencil[a];
            if (a + 1 < 3) sys.upper1[r + a] += lambda * stencil[a] * stencil[a + 1];
            if (a + 2 < 3) sys.upper2[r + a] += lambda * stencil[a] * stencil[a + 2];
        }
    }
    return sys;
}

BandedCholesky::BandedCholesky(const PentadiagonalSystem& system) {
    const std::size_t n = system.size();
    require_at_least_three(n);
    pivot_.assign(n, 0.0);
    sub1_.assign(n, 0.0);
    sub2_.assign(n, 0.0);

    const double scale = *std::max_element(system.main.begin(), system.main.end());
    const double floor = kPivotTolerance * scale;

    for (std::size_t i = 0; i < n; ++i) {
        double d = system.main[i];
        if (i >= 2) {
            sub2_[i] = system.upper2[i - 2] / pivot_[i - 2];
            d -= sub2_[i] * sub2_[i] * pivot_[i - 2];
        }
        if (i >= 1) {
            double m = system.upper1[i - 1];
            if (i >= 2) m -= sub2_[i] * sub1_[i - 1] * pivot_[i - 2];
            sub1_[i] = m / pivot_[i - 1];
            d -= sub1_[i] * sub1_[i] * pivot_[i - 1];
        }
        if (!(d > floor)) {
            throw Error(ErrorKind::NotPositiveDefinite,
                        "non-positive pivot at row " + std::to_string(i));
        }
        pivot_[i] = d;
    }
}

std::vector<double> BandedCholesky::solve(std::span<const double> rhs) const {
    const std::size_t n = size();
    if (rhs.size() != n) {
        throw Error(ErrorKind::InvalidSize, "solve: rhs length mismatch");
    }
    std::vector<double> x(rhs.begin(), rhs.end());
    for (std::size_t i = 1; i < n; ++i) {
        x[i] -= sub1_[i] * x[i - 1];
        if (i >= 2) x[i] -= sub2_[i] * x[i - 2];
    }
    for (std::size_t i = 0; i < n; ++i) x[i] /= pivot_[i];
    for (std::size_t k = n; k-- > 0;) {
        if (k + 1 < n) x[k] -= sub1_[k + 1] * x[k + 1];
        if (k + 2 < n) x[k] -= sub2_[k + 2] * x[k + 2];
    }
    return x;
}

std::vector<double> BandedCholesky::inverse_diagonal() const {
    // M^{-1} = L^{-T} D^{-1} L^{-1}, so (M^{-1})_ii = sum_k z_k^2 / D_k with
    // z = L^{-1} e_i. z vanishes above row i.
    const std::size_t n = size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 1.0 / pivot_[i];
        double z2 = 0.0;  // z_{k-2}
        double z1 = 1.0;  // z_{k-1}
        for (std::size_t k = i + 1; k < n; ++k) {
            double zk = -sub1_[k] * z1;
            if (k >= i + 2) zk -= sub2_[k] * z2;
            acc += zk * zk / pivot_[k];
            z2 = z1;
            z1 = zk;
        }
        out[i] = acc;
    }
    return out;
}

std::vector<double> solve(const PentadiagonalSystem& system, const BandedCholesky& factor,
                          std::span<const double> rhs) {
    std::vector<double> x = factor.solve(rhs);
    double x_norm = 0.0;
    for (double v : x) x_norm = std::max(x_norm, std::abs(v));
    for (int step = 0; step < kMaxRefinementSteps; ++step) {
        const std::vector<double> correction = factor.solve(system.residual(x, rhs));
        double c_norm = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] += correction[i];
            c_norm = std::max(c_norm, std::abs(correction[i]));
        }
        if (!(c_norm > 1e-16 * x_norm)) break;
    }
    return x;
}

std::vector<double> solve(const PentadiagonalSystem& system, std::span<const double> rhs) {
    return solve(system, BandedCholesky(system), rhs);
}

std::vector<double> hat_diagonal(const BandedCholesky& factor, std::span<const double> weights) {
    if (weights.size() != factor.size()) {
        throw Error(ErrorKind::InvalidSize, "hat_diagonal: weight length mismatch");
    }
    std::vector<double> h = factor.inverse_diagonal();
    for (std::size_t i = 0; i < h.size(); ++i) {
        h[i] = std::clamp(h[i] * weights[i], 0.0, 1.0);
    }
    return h;
}

std::vector<double> hat_diagonal(const PentadiagonalSystem& system,
                                 std::span<const double> weights) {
    if (system.lambda == 0.0) {
        // H = I exactly; assemble_system already rejected zero weights.
        if (weights.size() != system.size()) {
            throw Error(ErrorKind::InvalidSize, "hat_diagonal: weight length mismatch");
        }
        return std::vector<double>(system.size(), 1.0);
    }
    return hat_diagonal(BandedCholesky(system), weights);
}

}  // namespace lsaps::linalg
