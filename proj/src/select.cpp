#include "lsaps/select.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "lsaps/error.hpp"
#include "lsaps/linalg.hpp"

namespace lsaps {

namespace {

constexpr double kSaturation = 1e-12;

struct Candidate {
    std::vector<double> smoothed;
    std::vector<double> weights;  // A as used in the solve
    double lambda = 0.0;
};

Candidate fit_candidate(std::span<const double> y, Method method, double parameter,
                        const CurvatureWeights* raw, bool clip) {
    Candidate c;
    if (method == Method::PS) {
        c.weights.assign(y.size(), 1.0);
        c.lambda = parameter;
        c.smoothed = smooth_ps(y, parameter);
    } else {
        LsaPsResult r = smooth_lsa_ps(y, *raw, parameter, clip);
        c.weights = std::move(r.weights.values);
        c.lambda = r.lambda;
        c.smoothed = std::move(r.smoothed);
    }
    return c;
}

}  // namespace

std::vector<double> default_cv_grid() {
    return {0.001, 0.01, 0.1, 0.5, 1.0, 2.5, 5.0, 10.0, 25.0, 50.0, 100.0};
}

std::vector<double> loo_residuals(std::span<const double> y, std::span<const double> smoothed,
                                  std::span<const double> hat_diag) {
    if (y.size() != smoothed.size() || y.size() != hat_diag.size()) {
        throw Error(ErrorKind::InvalidSize, "loo_residuals: length mismatch");
    }
    std::vector<double> r(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!(hat_diag[i] < 1.0 - kSaturation)) {
            throw Error(ErrorKind::LeverageSaturation,
                        "leverage saturated at point " + std::to_string(i));
        }
        r[i] = (y[i] - smoothed[i]) / (1.0 - hat_diag[i]);
    }
    return r;
}

double cv_loss_ps(std::span<const double> residuals) {
    if (residuals.empty()) {
        throw Error(ErrorKind::InvalidSize, "cv loss of an empty residual vector");
    }
    double sum = 0.0;
    for (double r : residuals) sum += r * r;
    return std::sqrt(sum / static_cast<double>(residuals.size()));
}

double cv_loss_lsa(std::span<const double> residuals, std::span<const double> weights) {
    if (residuals.empty() || residuals.size() != weights.size()) {
        throw Error(ErrorKind::InvalidSize, "cv_loss_lsa: length mismatch");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        if (!(weights[i] > 0.0)) {
            throw Error(ErrorKind::Precondition,
                        "non-positive weight at point " + std::to_string(i));
        }
        sum += residuals[i] * residuals[i] / weights[i];
    }
    return std::sqrt(sum / static_cast<double>(residuals.size()));
}

Selection select_parameter(std::span<const double> y, Method method,
                           std::span<const double> grid, bool clip) {
    if (method != Method::PS && method != Method::LsaPs) {
        throw Error(ErrorKind::InvalidConfig, "parameter selection supports ps and lsa-ps only");
    }
    if (grid.empty()) {
        throw Error(ErrorKind::InvalidConfig, "empty parameter grid");
    }
    for (double g : grid) {
        if (!(g >= 0.0) || !std::isfinite(g)) {
            throw Error(ErrorKind::InvalidConfig, "grid values must be finite and >= 0");
        }
    }

    std::optional<CurvatureWeights> raw;
    if (method == Method::LsaPs) raw = local_quadratic_curvature(y);

    Selection sel;
    sel.curve.method = method;
    sel.curve.grid.assign(grid.begin(), grid.end());
    sel.curve.losses.assign(grid.size(), std::numeric_limits<double>::infinity());

    std::optional<std::size_t> best;
    Candidate best_fit;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        Candidate c;
        double loss = std::numeric_limits<double>::infinity();
        try {
            c = fit_candidate(y, method, grid[g], raw ? &*raw : nullptr, clip);
            const auto system = linalg::assemble_system(c.weights, c.lambda);
            const auto hat = linalg::hat_diagonal(system, c.weights);
            const auto r = loo_residuals(y, c.smoothed, hat);
            if (method == Method::PS) {
                loss = cv_loss_ps(r);
            } else {
                CurvatureWeights used{c.weights, 0.0, false};
                loss = cv_loss_lsa(r, floor_weights(std::move(used)).values);
            }
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::LeverageSaturation && e.kind() != ErrorKind::Singular) {
                throw;
            }
        }
        sel.curve.losses[g] = loss;
        if (!std::isfinite(loss)) continue;
        const bool better = !best || loss < sel.curve.losses[*best] ||
                            (loss == sel.curve.losses[*best] && grid[g] > grid[*best]);
        if (better) {
            best = g;
            best_fit = std::move(c);
        }
    }
    if (!best) {
        throw Error(ErrorKind::SelectionFailed, "every candidate saturated the leverage");
    }

    sel.curve.best_index = *best;
    sel.best_parameter = grid[*best];
    sel.effective_lambda = best_fit.lambda;
    sel.smoothed = std::move(best_fit.smoothed);
    if (raw) {
        double norm = 0.0;
        for (double a : best_fit.weights) norm += a * a;
        sel.curve.normalization = std::sqrt(norm);
        sel.weights = clip ? clip_weights(*raw) : *raw;
    }
    return sel;
}

}  // namespace lsaps
