#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lsaps/localfit.hpp"
#include "lsaps/smoothers.hpp"

namespace lsaps {

/// Cross-validation loss over a candidate grid.
struct CvCurve {
    Method method = Method::LsaPs;
    std::vector<double> grid;
    std::vector<double> losses;  // +inf marks a candidate with saturated leverage
    std::size_t best_index = 0;
    /// Divisor for display only: ||A|| for LSA-PS, 1 for PS. Never used in the argmin.
    double normalization = 1.0;
};

struct Selection {
    CvCurve curve;
    double best_parameter = 0.0;
    double effective_lambda = 0.0;
    std::vector<double> smoothed;
    std::optional<CurvatureWeights> weights;  // LSA-PS only
};

/// {0.001, 0.01, 0.1, 0.5, 1, 2.5, 5, 10, 25, 50, 100}
[[nodiscard]] std::vector<double> default_cv_grid();

/// r_i = (y_i - x_i) / (1 - H_ii). Throws LeverageSaturation if any
/// H_ii >= 1 - 1e-12.
[[nodiscard]] std::vector<double> loo_residuals(std::span<const double> y,
                                                std::span<const double> smoothed,
                                                std::span<const double> hat_diag);

/// sqrt(r^T r / N)
[[nodiscard]] double cv_loss_ps(std::span<const double> residuals);

/// sqrt(r^T A^{-1} r / N); every weight must be strictly positive.
[[nodiscard]] double cv_loss_lsa(std::span<const double> residuals,
                                 std::span<const double> weights);

/**
 * Grid search for the smoothing parameter.
 *
 * PS scores lambda with the ordinary leave-one-out loss. LSA-PS scores
 * lambda_bar with the curvature-weighted loss, where A is the (clipped, if
 * requested) weight vector that entered the solve, floored away from zero.
 * Candidates whose leverage saturates are scored +inf. Ties go to the larger
 * parameter.
 */
[[nodiscard]] Selection select_parameter(std::span<const double> y, Method method,
                                         std::span<const double> grid, bool clip = true);

}  // namespace lsaps
