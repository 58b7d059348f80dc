#pragma once

#include <span>
#include <vector>

namespace lsaps {

/**
 * Per-point data-fidelity weights (the diagonal of A).
 *
 * values[i] = (2 a_i)^2 where a_i is the quadratic coefficient of a
 * least-squares parabola through the five points centred on i. `median` is the
 * median of the values as first computed; clipping leaves it untouched so the
 * penalty scale stays tied to the unclipped curvature.
 */
struct CurvatureWeights {
    std::vector<double> values;
    double median = 0.0;
    bool clipped = false;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

/// Median with the mean-of-central-pair convention for even counts.
[[nodiscard]] double median(std::span<const double> values);

/// Quadratic coefficient of the five-point local fit centred at each point.
/// The first and last two points reuse the nearest full window.
[[nodiscard]] std::vector<double> local_quadratic_coefficients(std::span<const double> y);

/// Requires y.size() >= 5.
[[nodiscard]] CurvatureWeights local_quadratic_curvature(std::span<const double> y);

/// min(value, median). Idempotent.
[[nodiscard]] CurvatureWeights clip_weights(CurvatureWeights weights);

/// max(value, epsilon_ratio * median of the positive values). Only the CV loss
/// uses this; the smoother itself tolerates zero weights when lambda > 0.
[[nodiscard]] CurvatureWeights floor_weights(CurvatureWeights weights,
                                             double epsilon_ratio = 1e-8);

}  // namespace lsaps
